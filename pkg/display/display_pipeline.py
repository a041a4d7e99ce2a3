"""
Симуляция дисплея с двойной модуляцией (проектор + LCD)

Цепочка: тональная компрессия Рейнхарда -> RGB_LCD; Y -> Y_projector = sqrt(Y);
PSF проектора (гауссово ядро 12x12, sigma 2) -> Y_lightfield;
LCD = RGB_LCD / Y_lightfield; излучение = Y_lightfield * яркость(LCD).
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from core.core_logger import get_logger
from core.core_exceptions import ValidationException
from adapters.adapters_types import DisplayModel
from display.display_types import DisplaySignals, FrameSummary
from distortion.distortion_kernels import gaussian_blur
from hdrio.hdrio_color import luminance, normalize, rgb_to_luminance
from hdrio.hdrio_types import HdrFrame, LumaPlane, LumaUnits
from settings import get_setting

logger = get_logger(__name__)

REINHARD_DELTA = 1e-6
CLAMP_TOLERANCE = 1e-9


def reinhard_tonemap(frame: HdrFrame, key: float = 0.18, delta: float = REINHARD_DELTA) -> np.ndarray:
    """Глобальный оператор Рейнхарда с белой точкой = максимум L_s; RGB в [0, 1]"""
    lum = luminance(frame.data)
    if not lum.size or lum.max() <= 0:
        return np.zeros_like(frame.data)

    log_average = np.exp(np.mean(np.log(delta + lum)))
    scaled = key * lum / log_average
    white_sq = scaled.max() ** 2
    display = scaled * (1.0 + scaled / white_sq) / (1.0 + scaled)

    ratio = np.divide(display, lum, out=np.zeros_like(lum), where=lum > 0)
    return np.clip(frame.data * ratio[..., None], 0.0, 1.0)


def split_signal(frame: HdrFrame, psf_size: int = 12, psf_sigma: float = 2.0,
                 scale: Optional[float] = None, key: float = 0.18,
                 guard: float = 1e-4) -> DisplaySignals:
    """
    Разделение сигнала между проектором и LCD.

    scale - максимум яркости последовательности; без него кадр нормируется
    собственным максимумом.
    """
    luma = normalize(rgb_to_luminance(frame), scale)[0].values
    projector = np.sqrt(luma)
    lightfield = gaussian_blur(projector, psf_size, psf_sigma)
    rgb_lcd = reinhard_tonemap(frame, key)

    guarded = np.maximum(lightfield, guard)
    quotient = rgb_lcd / guarded[..., None]
    guard_engaged = (lightfield < guard)[..., None] & (rgb_lcd > 0)
    clamped = (quotient > 1.0 + CLAMP_TOLERANCE) | guard_engaged
    lcd = np.clip(quotient, 0.0, 1.0)

    return DisplaySignals(
        luma=luma,
        projector=projector,
        lightfield=lightfield,
        rgb_lcd=rgb_lcd,
        lcd=lcd,
        clamped=clamped,
    )


def emitted_relative(signals: DisplaySignals) -> np.ndarray:
    """Излучение до масштабирования: Y_lightfield * яркость(LCD)"""
    return signals.lightfield * luminance(signals.lcd)


def simulate_emitted(signals: Sequence[DisplaySignals], model: DisplayModel) -> List[LumaPlane]:
    """Излучаемая яркость (кд/м²): максимум последовательности -> peak, снизу уровень чёрного"""
    raw = [emitted_relative(s) for s in signals]
    top = max((float(r.max()) for r in raw if r.size), default=0.0)
    if top <= 0:
        logger.warning("⚠️ Последовательность не излучает света, выход равен уровню чёрного")
        return [LumaPlane(np.full(r.shape, model.black_level), LumaUnits.ABSOLUTE) for r in raw]

    factor = model.peak / top
    return [LumaPlane(np.maximum(r * factor, model.black_level), LumaUnits.ABSOLUTE) for r in raw]


def reconstruction_rmse(signals: DisplaySignals, emitted: LumaPlane, model: DisplayModel) -> float:
    """RMSE (кд/м²) между излучением и идеалом clamp(Y * peak, black, peak)"""
    ideal = np.clip(signals.luma * model.peak, model.black_level, model.peak)
    return float(np.sqrt(np.mean((emitted.values - ideal) ** 2)))


@dataclass
class DisplayRun:
    """Результат симуляции последовательности"""
    signals: List[DisplaySignals] = field(default_factory=list)
    emitted: List[LumaPlane] = field(default_factory=list)
    summaries: List[FrameSummary] = field(default_factory=list)


class DisplayPipeline:
    """Симулятор дисплея с двойной модуляцией"""

    def __init__(self):
        self.settings = {
            'reinhard_key': get_setting('REINHARD_KEY', 0.18),
            'psf_size': get_setting('PSF_SIZE', 12),
            'psf_sigma': get_setting('PSF_SIGMA', 2.0),
            'lcd_division_guard': get_setting('LCD_DIVISION_GUARD', 1e-4),
            'normalization_mode': get_setting('NORMALIZATION_MODE', 'sequence'),
        }

    def run(self, frames: Sequence[HdrFrame], model: DisplayModel, mapper: Callable = map) -> DisplayRun:
        """Симуляция всей последовательности"""
        if not frames:
            raise ValidationException("Пустая последовательность")

        mode = self.settings['normalization_mode']
        if mode not in ('sequence', 'frame'):
            raise ValidationException(f"Неизвестный режим нормализации: {mode}")
        scale = None
        if mode == 'sequence':
            scale = max(float(luminance(frame.data).max()) for frame in frames)
            if not scale > 0:
                raise ValidationException("Последовательность полностью чёрная")

        def split(frame):
            return split_signal(
                frame,
                psf_size=int(self.settings['psf_size']),
                psf_sigma=float(self.settings['psf_sigma']),
                scale=scale,
                key=float(self.settings['reinhard_key']),
                guard=float(self.settings['lcd_division_guard']),
            )

        signals = list(mapper(split, frames))
        emitted = simulate_emitted(signals, model)

        summaries = []
        for i, (s, e) in enumerate(zip(signals, emitted)):
            summaries.append(FrameSummary(
                frame=i,
                clamp_fraction=s.clamp_fraction,
                emitted_max=float(e.values.max()),
                emitted_min=float(e.values.min()),
                reconstruction_rmse=reconstruction_rmse(s, e, model),
            ))
        logger.info(f"✅ Симуляция дисплея: {len(frames)} кадров, максимум {max(s.emitted_max for s in summaries):.1f} кд/м²")
        return DisplayRun(signals=signals, emitted=emitted, summaries=summaries)

    def get_settings(self) -> Dict:
        """Получить текущие настройки"""
        return self.settings.copy()

    def update_settings(self, new_settings: Dict):
        """Обновить настройки"""
        self.settings.update(new_settings)
        logger.info(f"⚙️ Настройки симулятора дисплея обновлены: {new_settings}")
