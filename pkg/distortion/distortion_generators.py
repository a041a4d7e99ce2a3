"""
Генераторы искажений: AWGN, сдвиг интенсивности, соль и перец, гауссов ФНЧ
"""
import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from core.core_logger import get_logger
from core.core_exceptions import ConfigurationException, ValidationException
from distortion.distortion_kernels import gaussian_kernel_1d, separable_filter
from distortion.distortion_random import frame_generator
from distortion.distortion_types import DistortionKind, DistortionSpec, STOCHASTIC_KINDS
from hdrio.hdrio_color import luminance
from hdrio.hdrio_types import HdrFrame
from settings import get_setting

logger = get_logger(__name__)


def add_awgn(frame: HdrFrame, sigma: float, rng: np.random.Generator) -> HdrFrame:
    """
    Аддитивный белый гауссов шум.

    Кадр нормируется общим максимумом каналов, шум добавляется к каждому
    отсчёту, результат ограничивается [0, 1] и возвращается в исходный масштаб.
    """
    if sigma < 0:
        raise ValidationException(f"sigma не может быть отрицательной: {sigma}")
    if sigma == 0:
        return frame

    peak = frame.max_value
    if not peak > 0:
        raise ValidationException("AWGN не определён для полностью чёрного кадра")

    noisy = frame.data / peak + rng.normal(0.0, sigma, size=frame.data.shape)
    return HdrFrame(np.clip(noisy, 0.0, 1.0) * peak)


def sequence_max_luminance(frames: Sequence[HdrFrame]) -> float:
    """Максимум яркости по всей последовательности"""
    if not frames:
        raise ValidationException("Пустая последовательность")
    return max(float(luminance(frame.data).max()) for frame in frames)


def shift_frame(frame: HdrFrame, offset: float) -> HdrFrame:
    """Добавление одинакового смещения к R, G, B (яркость растёт на offset)"""
    if offset == 0:
        return frame
    return HdrFrame(frame.data + offset)


def intensity_shift(frames: Sequence[HdrFrame], fraction: float = 0.1) -> List[HdrFrame]:
    """Глобальный сдвиг яркости на fraction от максимума яркости последовательности"""
    peak = sequence_max_luminance(frames)
    if peak == 0:
        logger.warning("⚠️ Последовательность полностью чёрная, сдвиг интенсивности не применяется")
        return list(frames)
    offset = fraction * peak
    logger.debug(f"Сдвиг интенсивности: M={peak:.6g}, смещение {offset:.6g}")
    return [shift_frame(frame, offset) for frame in frames]


def salt_pepper_count(width: int, height: int, fraction: float) -> int:
    """Число изменяемых пикселей: floor(fraction * N)"""
    # округление до 9 знаков убирает ошибку представления (0.02 * 100 * 100 = 200.00000000000003)
    return int(math.floor(round(fraction * width * height, 9)))


def salt_pepper_positions(width: int, height: int, fraction: float, rng: np.random.Generator):
    """Индексы выбранных пикселей и маска 'соли' для них"""
    count = salt_pepper_count(width, height, fraction)
    positions = rng.choice(width * height, size=count, replace=False)
    salt = rng.random(count) < 0.5
    return positions, salt


def salt_pepper(frame: HdrFrame, fraction: float, rng: np.random.Generator) -> HdrFrame:
    """Шум 'соль и перец': точное число пикселей заменяется минимумом или максимумом кадра"""
    if not 0 <= fraction <= 1:
        raise ValidationException(f"Доля должна лежать в [0, 1]: {fraction}")
    positions, salt = salt_pepper_positions(frame.width, frame.height, fraction, rng)
    if positions.size == 0:
        return frame

    data = frame.data.reshape(-1, 3).copy()
    data[positions] = np.where(salt[:, None], float(frame.data.max()), float(frame.data.min()))
    return HdrFrame(data.reshape(frame.data.shape))


def gaussian_lowpass(frame: HdrFrame, size: int = 8, sigma: float = 8.0) -> HdrFrame:
    """Поканальная свёртка с гауссовым ядром size x size"""
    kernel = gaussian_kernel_1d(size, sigma)
    channels = [separable_filter(frame.data[..., c], kernel) for c in range(3)]
    return HdrFrame(np.clip(np.stack(channels, axis=2), 0.0, None))


class DistortionGenerator:
    """Применение искажений к последовательности кадров"""

    def __init__(self):
        self.settings = {
            'awgn_sigma': get_setting('AWGN_SIGMA', 0.002),
            'salt_pepper_fraction': get_setting('SALT_PEPPER_FRACTION', 0.02),
            'intensity_shift_fraction': get_setting('INTENSITY_SHIFT_FRACTION', 0.1),
            'lpf_size': get_setting('LPF_SIZE', 8),
            'lpf_sigma': get_setting('LPF_SIGMA', 8.0),
            'default_seed': get_setting('DEFAULT_SEED', 0),
        }

    def build_spec(self, kind, parameters: Optional[Dict[str, Any]] = None, seed: Optional[int] = None) -> DistortionSpec:
        """Спецификация искажения с параметрами по умолчанию из настроек"""
        kind = DistortionKind(kind) if isinstance(kind, str) else kind
        defaults = {
            DistortionKind.AWGN: {'sigma': self.settings['awgn_sigma']},
            DistortionKind.SALT_PEPPER: {'fraction': self.settings['salt_pepper_fraction']},
            DistortionKind.INTENSITY_SHIFT: {'fraction': self.settings['intensity_shift_fraction']},
            DistortionKind.GAUSSIAN_LPF: {'size': self.settings['lpf_size'], 'sigma': self.settings['lpf_sigma']},
            DistortionKind.COMPRESSION: {},
        }[kind]
        merged = dict(defaults)
        merged.update({k: v for k, v in (parameters or {}).items() if v is not None})

        if kind in STOCHASTIC_KINDS and seed is None:
            seed = self.settings['default_seed']
        if kind not in STOCHASTIC_KINDS:
            seed = None
        return DistortionSpec(kind=kind, parameters=merged, seed=seed)

    def prepare(self, frames: Sequence[HdrFrame], spec: DistortionSpec) -> Dict[str, Any]:
        """Предварительный проход по последовательности (нужен только сдвигу интенсивности)"""
        if spec.kind is DistortionKind.COMPRESSION:
            raise ConfigurationException(
                "Сжатие HEVC не реализовано: используйте внешний кодер (HM, main10, random access, "
                "GOP 8, QP 22/27/32/37) и подайте декодированный 12-битный YUV"
            )
        if spec.kind is DistortionKind.INTENSITY_SHIFT:
            peak = sequence_max_luminance(frames)
            if peak == 0:
                logger.warning("⚠️ Последовательность полностью чёрная, сдвиг интенсивности не применяется")
            return {'offset': spec.parameters['fraction'] * peak, 'max_luminance': peak}
        return {}

    def apply_frame(self, frame: HdrFrame, index: int, spec: DistortionSpec, context: Dict[str, Any]) -> HdrFrame:
        """Искажение одного кадра; результат зависит только от (кадр, номер, spec)"""
        p = spec.parameters
        if spec.kind is DistortionKind.AWGN:
            return add_awgn(frame, p['sigma'], frame_generator(spec.seed, index))
        if spec.kind is DistortionKind.SALT_PEPPER:
            return salt_pepper(frame, p['fraction'], frame_generator(spec.seed, index))
        if spec.kind is DistortionKind.INTENSITY_SHIFT:
            return shift_frame(frame, context['offset'])
        if spec.kind is DistortionKind.GAUSSIAN_LPF:
            return gaussian_lowpass(frame, int(p['size']), float(p['sigma']))
        raise ConfigurationException(f"Искажение {spec.kind.value} не применяется к кадрам")

    def apply_sequence(self, frames: Sequence[HdrFrame], spec: DistortionSpec) -> List[HdrFrame]:
        """Последовательное искажение всех кадров"""
        context = self.prepare(frames, spec)
        return [self.apply_frame(frame, i, spec, context) for i, frame in enumerate(frames)]

    def describe(self, spec: DistortionSpec, width: int, height: int) -> Dict[str, Any]:
        """Сводка параметров для манифеста"""
        summary = spec.to_dict()
        if spec.kind is DistortionKind.SALT_PEPPER:
            summary['modified_pixels_per_frame'] = salt_pepper_count(width, height, spec.parameters['fraction'])
        return summary

    def get_settings(self) -> Dict:
        """Получить текущие настройки"""
        return self.settings.copy()

    def update_settings(self, new_settings: Dict):
        """Обновить настройки"""
        self.settings.update(new_settings)
        logger.info(f"⚙️ Настройки генератора искажений обновлены: {new_settings}")
