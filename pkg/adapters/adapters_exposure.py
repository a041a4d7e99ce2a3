"""
Мульти-экспозиция: HDR кадр -> набор 8-битных LDR плоскостей, метрика усредняется по экспозициям
"""
from typing import Callable, List, Sequence

import numpy as np

from core.core_logger import get_logger
from core.core_exceptions import UndefinedMetricException, ValidationException
from adapters.adapters_pu import check_sequences
from adapters.adapters_types import AdapterKind, ExposureSet
from hdrio.hdrio_color import luminance
from hdrio.hdrio_types import CodeKind, CodePlane, HdrFrame
from metrics.metrics_kernels import aggregate, compute
from metrics.metrics_types import MetricId, MetricResult

logger = get_logger(__name__)

LDR_PEAK = 255.0


def derive_exposures(frames: Sequence[HdrFrame], count: int = 5, gamma: float = 2.2,
                     percentile: float = 1.0) -> ExposureSet:
    """
    Экспозиции, равномерно распределённые в log2 между e_min и e_max.

    e_min переводит максимум яркости последовательности в 1.0, e_max переводит
    в 1.0 заданный перцентиль ненулевой яркости.
    """
    if count < 1:
        raise ValidationException(f"Число экспозиций должно быть >= 1: {count}")
    if not frames:
        raise ValidationException("Пустая последовательность")

    lum = np.concatenate([luminance(frame.data).ravel() for frame in frames])
    peak = float(lum.max())
    if not peak > 0:
        raise ValidationException("Экспозиции не определены для полностью чёрной последовательности")

    e_min = -np.log2(peak)
    anchor = float(np.percentile(lum[lum > 0], percentile))
    e_max = -np.log2(anchor)

    if count == 1 or not e_max > e_min:
        if count > 1:
            logger.warning("⚠️ Вырожденный диапазон яркости, используется одна экспозиция")
        return ExposureSet((float(e_min),), gamma)
    return ExposureSet(tuple(np.linspace(e_min, e_max, count)), gamma)


def expose(lum: np.ndarray, exposure: float, gamma: float) -> CodePlane:
    """code = floor(255 * clamp(L * 2^e, 0, 1)^(1/gamma) + 0.5)"""
    v = np.clip(np.asarray(lum, dtype=np.float64) * 2.0 ** exposure, 0.0, 1.0)
    codes = np.floor(LDR_PEAK * np.power(v, 1.0 / gamma) + 0.5)
    return CodePlane(codes, CodeKind.LDR8)


def multi_exposure(frame: HdrFrame, exposures: ExposureSet) -> List[CodePlane]:
    """LDR плоскости кадра для каждой экспозиции набора"""
    if not frame.max_value > 0:
        raise ValidationException("Мульти-экспозиция не определена для чёрного кадра")
    lum = luminance(frame.data)
    return [expose(lum, e, exposures.gamma) for e in exposures.exposures]


def _frame_score(metric: MetricId, ref: HdrFrame, dist: HdrFrame, exposures: ExposureSet) -> float:
    ref_lum = luminance(ref.data)
    dist_lum = luminance(dist.data)
    scores = []
    for e in exposures.exposures:
        try:
            scores.append(compute(
                metric,
                expose(ref_lum, e, exposures.gamma),
                expose(dist_lum, e, exposures.gamma),
                LDR_PEAK,
            ))
        except UndefinedMetricException:
            logger.warning(f"⚠️ Экспозиция {e:.3f}: {metric.value} не определена, пропускается")
    if not scores:
        raise UndefinedMetricException(f"{metric.value} не определена ни для одной экспозиции")
    return float(np.mean(scores))


def me_metric(ref: Sequence[HdrFrame], dist: Sequence[HdrFrame], metric: MetricId,
              exposures: ExposureSet, mapper: Callable = map) -> MetricResult:
    """Метрика через мульти-экспозицию; набор экспозиций берётся от опорной последовательности"""
    check_sequences(ref, dist)

    def score(pair):
        return _frame_score(metric, pair[0], pair[1], exposures)

    per_frame = [float(s) for s in mapper(score, list(zip(ref, dist)))]
    return MetricResult(
        metric=metric,
        adapter=AdapterKind.ME.value,
        per_frame=per_frame,
        sequence_score=aggregate(per_frame),
        dynamic_range=LDR_PEAK,
    )
