"""
Отбраковка испытуемых по ITU-R BT.500 (приложение 2)
"""
import math

import numpy as np

from core.core_logger import get_logger
from core.core_exceptions import ValidationException
from subjective.subjective_types import (
    ClipDiagnostics,
    ScoreTable,
    ScreeningResult,
    SubjectDiagnostics,
)

logger = get_logger(__name__)

NORMAL_KURTOSIS_RANGE = (2.0, 4.0)
NORMAL_FACTOR = 2.0
NON_NORMAL_FACTOR = math.sqrt(20.0)
REJECT_RATIO = 0.05
REJECT_ASYMMETRY = 0.3


def clip_statistics(scores: np.ndarray, clip_id: str) -> ClipDiagnostics:
    """Среднее, выборочное СКО, эксцесс (m4/m2^2) и порог клипа"""
    x = scores.astype(np.float64)
    mean = float(x.mean())
    std = float(x.std(ddof=1))
    deviations = x - mean
    m2 = float(np.mean(deviations ** 2))
    m4 = float(np.mean(deviations ** 4))
    kurtosis = m4 / (m2 * m2) if m2 > 0 else None

    low, high = NORMAL_KURTOSIS_RANGE
    normal = kurtosis is not None and low <= kurtosis <= high
    factor = NORMAL_FACTOR if normal else NON_NORMAL_FACTOR
    return ClipDiagnostics(clip_id=clip_id, mean=mean, std=std, kurtosis=kurtosis,
                           threshold=factor * std, normal=normal)


def screen_outliers(table: ScoreTable) -> ScreeningResult:
    """Поиск испытуемых с систематически отклоняющимися оценками"""
    n_subjects, n_clips = table.scores.shape
    if n_subjects < 2:
        raise ValidationException(f"Для отбраковки нужно не менее 2 испытуемых, получено {n_subjects}")
    if n_clips == 0:
        raise ValidationException("Таблица оценок не содержит клипов")

    clips = [clip_statistics(table.scores[:, j], table.clips[j].clip_id) for j in range(n_clips)]
    means = np.array([c.mean for c in clips])
    thresholds = np.array([c.threshold for c in clips])

    scores = table.scores.astype(np.float64)
    above = np.sum(scores > means + thresholds, axis=1)
    below = np.sum(scores < means - thresholds, axis=1)

    result = ScreeningResult(clips=clips, low_confidence=n_clips < 2)
    if result.low_confidence:
        logger.warning("⚠️ Отбраковка по одному клипу ненадёжна")

    for i, subject in enumerate(table.subjects):
        p, q = int(above[i]), int(below[i])
        ratio = (p + q) / n_clips
        asymmetry = abs(p - q) / (p + q) if p + q else None
        rejected = ratio > REJECT_RATIO and asymmetry is not None and asymmetry < REJECT_ASYMMETRY
        result.subjects.append(SubjectDiagnostics(subject, p, q, ratio, asymmetry, rejected))
        if rejected:
            result.rejected.append(subject)

    if result.rejected:
        logger.info(f"🔍 Отбраковано испытуемых: {len(result.rejected)} ({', '.join(result.rejected)})")
    else:
        logger.info("✅ Выбросов среди испытуемых не обнаружено")
    return result
