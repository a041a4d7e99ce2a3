"""
MOS с 95% доверительным интервалом и корреляции PCC / SCC / RMSE
"""
import math
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from core.core_logger import get_logger
from core.core_exceptions import DimensionMismatchException, UndefinedMetricException, ValidationException
from subjective.subjective_types import ClipMos, MosResult, ScoreTable

logger = get_logger(__name__)

CI_Z = 1.96
MIN_CORRELATION_POINTS = 3


def mos(table: ScoreTable) -> MosResult:
    """Среднее по испытуемым и полуширина 95% интервала 1.96 * s / sqrt(n)"""
    n = table.scores.shape[0]
    if n == 0:
        raise ValidationException("Таблица оценок не содержит испытуемых")
    if n < 2:
        logger.warning("⚠️ Меньше двух испытуемых: доверительный интервал принят равным 0")

    result = MosResult()
    for j, clip in enumerate(table.clips):
        column = table.scores[:, j].astype(np.float64)
        ci = CI_Z * float(column.std(ddof=1)) / math.sqrt(n) if n >= 2 else 0.0
        result.clips.append(ClipMos(clip.clip_id, float(column.mean()), ci, n))
    return result


def _vectors(x: Sequence[float], y: Sequence[float], minimum: int):
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatchException(f"Векторы разной длины: {a.shape} и {b.shape}")
    if a.size < minimum:
        raise ValidationException(f"Нужно не менее {minimum} точек, получено {a.size}")
    return a, b


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Коэффициент корреляции Пирсона"""
    a, b = _vectors(x, y, MIN_CORRELATION_POINTS)
    da = a - a.mean()
    db = b - b.mean()
    norm = math.sqrt(float(np.dot(da, da)) * float(np.dot(db, db)))
    if norm == 0:
        raise UndefinedMetricException("Корреляция не определена: постоянный вектор")
    return float(np.clip(np.dot(da, db) / norm, -1.0, 1.0))


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Ранговая корреляция Спирмена (средние ранги для равных значений)"""
    a, b = _vectors(x, y, MIN_CORRELATION_POINTS)
    return pearson(rankdata(a, method='average'), rankdata(b, method='average'))


def rmse(x: Sequence[float], y: Sequence[float]) -> float:
    """Среднеквадратичная ошибка"""
    a, b = _vectors(x, y, 1)
    return float(np.sqrt(np.mean((a - b) ** 2)))


def fitted_rmse(objective: Sequence[float], subjective: Sequence[float]) -> float:
    """RMSE после линейного отображения объективных оценок на MOS методом наименьших квадратов"""
    a, b = _vectors(objective, subjective, MIN_CORRELATION_POINTS)
    if np.ptp(a) == 0:
        raise UndefinedMetricException("Линейная регрессия не определена: постоянный вектор")
    slope, intercept = np.polyfit(a, b, 1)
    return rmse(slope * a + intercept, b)
