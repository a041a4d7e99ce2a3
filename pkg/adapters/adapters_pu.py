"""
Перцептивно-равномерное (PU) кодирование абсолютной яркости и PU-метрики

Встроенная таблица строится интегрированием чувствительности
объединённой палочково-колбочковой CSF в лог-области и нормируется так,
что диапазон LDR 0.1-80 кд/м² переходит примерно в 0-255.
"""
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid

from core.core_logger import get_logger
from core.core_exceptions import DimensionMismatchException, FormatException, ValidationException
from adapters.adapters_types import AdapterKind, DisplayModel
from hdrio.hdrio_color import luminance
from hdrio.hdrio_types import CodeKind, CodePlane, HdrFrame, LumaPlane, LumaUnits
from metrics.metrics_kernels import aggregate, compute
from metrics.metrics_types import MetricId, MetricResult

logger = get_logger(__name__)

PU_LOG_MIN = -5.0
PU_LOG_MAX = 8.0
PU_NODE_COUNT = 131
PU_LDR_LOW = 0.1    # кд/м², переходит в 0
PU_LDR_HIGH = 80.0  # кд/м², переходит в 255

# Параметры чувствительности CSF
CSF_SA = (30.162, 4.0627, 1.6596, 0.2712)


@dataclass(frozen=True)
class PuTransfer:
    """Табличное монотонное отображение log10(L) -> PU код"""
    log_luminance: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        nodes = np.array(self.log_luminance, dtype=np.float64)
        values = np.array(self.values, dtype=np.float64)
        if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size < 2:
            raise ValidationException("Таблица PU должна содержать два одномерных столбца одинаковой длины (>= 2)")
        if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(values))):
            raise ValidationException("Таблица PU содержит нечисловые значения")
        if np.any(np.diff(nodes) <= 0):
            raise ValidationException("Узлы таблицы PU должны строго возрастать")
        if np.any(np.diff(values) <= 0):
            raise ValidationException("Значения таблицы PU должны строго возрастать")
        nodes.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, 'log_luminance', nodes)
        object.__setattr__(self, 'values', values)

    @property
    def domain(self) -> Tuple[float, float]:
        """Область определения в кд/м²"""
        return 10.0 ** self.log_luminance[0], 10.0 ** self.log_luminance[-1]

    def encode_log10(self, log_values: np.ndarray) -> np.ndarray:
        """Кусочно-линейная интерполяция по log10 яркости (вне области - крайние значения)"""
        return np.interp(log_values, self.log_luminance, self.values)

    def encode(self, absolute: np.ndarray) -> Tuple[np.ndarray, int]:
        """Кодирование абсолютной яркости; возвращает коды и число ограниченных отсчётов"""
        absolute = np.asarray(absolute, dtype=np.float64)
        low, high = self.domain
        outside = (absolute < low) | (absolute > high)
        clamped = int(np.count_nonzero(outside))
        log_values = np.log10(np.clip(absolute, low, high))
        return self.encode_log10(log_values), clamped


def _joint_rod_cone_sensitivity(adaptation: np.ndarray) -> np.ndarray:
    peak, sens_drop, trans_slope, low_slope = CSF_SA
    return peak * np.power(np.power(sens_drop / adaptation, trans_slope) + 1.0, -low_slope)


@lru_cache(maxsize=1)
def default_transfer() -> PuTransfer:
    """Встроенная таблица PU"""
    fine = np.linspace(PU_LOG_MIN, PU_LOG_MAX, 2 ** 12 + 1)
    lum = np.power(10.0, fine)
    threshold = lum / _joint_rod_cone_sensitivity(lum)
    # интегрирование в лог-области: dP/dl = L ln(10) / threshold
    jnd = cumulative_trapezoid(lum * np.log(10.0) / threshold, fine, initial=0.0)

    nodes = np.linspace(PU_LOG_MIN, PU_LOG_MAX, PU_NODE_COUNT)
    raw = np.interp(nodes, fine, jnd)
    low = np.interp(np.log10(PU_LDR_LOW), nodes, raw)
    high = np.interp(np.log10(PU_LDR_HIGH), nodes, raw)
    return PuTransfer(nodes, 255.0 * (raw - low) / (high - low))


def load_pu_table(path: Union[str, Path]) -> PuTransfer:
    """Загрузка таблицы из текстового файла с двумя столбцами (log10 L, PU)"""
    path = Path(path)
    try:
        table = np.loadtxt(path, dtype=np.float64, comments='#', ndmin=2)
    except OSError:
        raise FormatException(f"Таблица PU не найдена: {path}")
    except ValueError as e:
        raise FormatException(f"Ошибка разбора таблицы PU {path}: {e}")
    if table.shape[1] != 2:
        raise FormatException(f"Таблица PU {path} должна иметь два столбца, найдено {table.shape[1]}")
    transfer = PuTransfer(table[:, 0], table[:, 1])
    logger.info(f"✅ Загружена таблица PU {path}: {table.shape[0]} узлов")
    return transfer


def to_absolute_luminance(relative: LumaPlane, model: DisplayModel) -> LumaPlane:
    """L = clamp(relative * peak, black, peak) в кд/м²"""
    values = np.clip(relative.values * model.peak, model.black_level, model.peak)
    return LumaPlane(values, LumaUnits.ABSOLUTE)


def pu_encode(plane: LumaPlane, transfer: PuTransfer) -> CodePlane:
    """PU кодирование плоскости абсолютной яркости"""
    if plane.units is not LumaUnits.ABSOLUTE:
        raise ValidationException("PU кодирование принимает только абсолютную яркость (кд/м²)")
    codes, clamped = transfer.encode(plane.values)
    if clamped:
        low, high = transfer.domain
        logger.warning(f"⚠️ {clamped} отсчётов вне области PU [{low:g}, {high:g}] кд/м² ограничены")
    return CodePlane(codes, CodeKind.PU, clamped)


def pu_dynamic_range(model: DisplayModel, transfer: PuTransfer) -> float:
    """PU(peak) - PU(black)"""
    codes, _ = transfer.encode(np.array([model.black_level, model.peak]))
    return float(codes[1] - codes[0])


def check_sequences(ref: Sequence[HdrFrame], dist: Sequence[HdrFrame]):
    if not ref:
        raise ValidationException("Пустая опорная последовательность")
    if len(ref) != len(dist):
        raise DimensionMismatchException(f"Разное число кадров: {len(ref)} и {len(dist)}")
    for i, (r, d) in enumerate(zip(ref, dist)):
        if r.data.shape != d.data.shape:
            raise DimensionMismatchException(f"Кадр {i}: размеры {r.data.shape} и {d.data.shape} не совпадают")


def pu_metric(ref: Sequence[HdrFrame], dist: Sequence[HdrFrame], metric: MetricId,
              model: DisplayModel, transfer: PuTransfer, mapper: Callable = map) -> MetricResult:
    """
    Метрика через PU кодирование.

    Обе последовательности нормируются максимумом яркости опорной
    последовательности, переводятся в кд/м² моделью дисплея и кодируются PU.
    """
    check_sequences(ref, dist)
    scale = max(float(luminance(frame.data).max()) for frame in ref)
    if not scale > 0:
        raise ValidationException("Опорная последовательность полностью чёрная")
    dynamic_range = pu_dynamic_range(model, transfer)

    def score(pair):
        r, d = pair
        r_code = pu_encode(to_absolute_luminance(LumaPlane(luminance(r.data) / scale), model), transfer)
        d_code = pu_encode(to_absolute_luminance(LumaPlane(luminance(d.data) / scale), model), transfer)
        return compute(metric, r_code, d_code, dynamic_range)

    per_frame = [float(s) for s in mapper(score, list(zip(ref, dist)))]
    return MetricResult(
        metric=metric,
        adapter=AdapterKind.PU.value,
        per_frame=per_frame,
        sequence_score=aggregate(per_frame),
        dynamic_range=dynamic_range,
    )
