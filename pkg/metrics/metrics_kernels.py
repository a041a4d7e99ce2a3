"""
Полно-референсные метрики на одноканальных плоскостях: PSNR, SSIM, VIF
"""
from typing import List, Sequence, Union

import numpy as np
from scipy import ndimage

from core.core_logger import get_logger
from core.core_exceptions import (
    DimensionMismatchException,
    UndefinedMetricException,
    ValidationException,
)
from distortion.distortion_kernels import gaussian_kernel_1d
from hdrio.hdrio_types import CodePlane
from metrics.metrics_types import MetricId, PSNR_CAP_DB

logger = get_logger(__name__)

PlaneLike = Union[CodePlane, np.ndarray]

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03

VIF_SCALES = 4
VIF_SIGMA_NSQ = 2.0
VIF_EPS = 1e-10


def _pair(ref: PlaneLike, dist: PlaneLike):
    a = np.asarray(ref.values if isinstance(ref, CodePlane) else ref, dtype=np.float64)
    b = np.asarray(dist.values if isinstance(dist, CodePlane) else dist, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise ValidationException("Метрики вычисляются на двумерных плоскостях")
    if a.shape != b.shape:
        raise DimensionMismatchException(f"Размеры плоскостей не совпадают: {a.shape} и {b.shape}")
    return a, b


def _valid_filter(plane: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Взвешенное окно по всем позициям, целиком лежащим в плоскости"""
    half = kernel.size // 2
    out = ndimage.correlate1d(plane, kernel, axis=0, mode='constant')
    out = ndimage.correlate1d(out, kernel, axis=1, mode='constant')
    return out[half:plane.shape[0] - half, half:plane.shape[1] - half]


def psnr(ref: PlaneLike, dist: PlaneLike, peak: float) -> float:
    """PSNR в дБ; при нулевой MSE возвращается PSNR_CAP_DB"""
    a, b = _pair(ref, dist)
    if not peak > 0:
        raise ValidationException(f"peak должен быть положительным: {peak}")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0:
        return PSNR_CAP_DB
    return float(10.0 * np.log10(peak ** 2 / mse))


def ssim_map(ref: PlaneLike, dist: PlaneLike, dynamic_range: float,
             k1: float = SSIM_K1, k2: float = SSIM_K2) -> np.ndarray:
    """Карта SSIM по допустимым позициям окна 11x11 (sigma 1.5)"""
    a, b = _pair(ref, dist)
    if not dynamic_range > 0:
        raise ValidationException(f"Динамический диапазон должен быть положительным: {dynamic_range}")
    if a.shape[0] < SSIM_WINDOW or a.shape[1] < SSIM_WINDOW:
        raise ValidationException(f"Плоскость {a.shape} меньше окна SSIM {SSIM_WINDOW}x{SSIM_WINDOW}")

    c1 = (k1 * dynamic_range) ** 2
    c2 = (k2 * dynamic_range) ** 2
    window = gaussian_kernel_1d(SSIM_WINDOW, SSIM_SIGMA)

    mu1 = _valid_filter(a, window)
    mu2 = _valid_filter(b, window)
    mu1_sq = mu1 * mu1
    mu2_sq = mu2 * mu2
    mu1_mu2 = mu1 * mu2
    sigma1_sq = _valid_filter(a * a, window) - mu1_sq
    sigma2_sq = _valid_filter(b * b, window) - mu2_sq
    sigma12 = _valid_filter(a * b, window) - mu1_mu2

    return ((2 * mu1_mu2 + c1) * (2 * sigma12 + c2)) / ((mu1_sq + mu2_sq + c1) * (sigma1_sq + sigma2_sq + c2))


def ssim(ref: PlaneLike, dist: PlaneLike, dynamic_range: float,
         k1: float = SSIM_K1, k2: float = SSIM_K2) -> float:
    """Средний SSIM"""
    return float(np.mean(ssim_map(ref, dist, dynamic_range, k1, k2)))


def vif_window(scale: int) -> np.ndarray:
    """Одномерное окно масштаба scale (1..4): размер 2^(5-s)+1, sigma = размер/5"""
    size = 2 ** (VIF_SCALES + 1 - scale) + 1
    return gaussian_kernel_1d(size, size / 5.0)


def vif_min_size() -> int:
    """Минимальная сторона плоскости, при которой все масштабы имеют хотя бы одно окно"""
    side = 1
    for scale in range(VIF_SCALES, 0, -1):
        side = max(side, vif_window(scale).size)
        if scale > 1:
            side = 2 * side - 1
    return side


def vif_terms(ref: PlaneLike, dist: PlaneLike) -> List[tuple]:
    """Числитель и знаменатель VIF по масштабам"""
    a, b = _pair(ref, dist)
    min_side = vif_min_size()
    if min(a.shape) < min_side:
        raise ValidationException(f"Плоскость {a.shape} мала для {VIF_SCALES} масштабов VIF (нужно >= {min_side})")

    terms = []
    for scale in range(1, VIF_SCALES + 1):
        window = vif_window(scale)
        if scale > 1:
            a = ndimage.correlate1d(ndimage.correlate1d(a, window, axis=0, mode='nearest'), window, axis=1, mode='nearest')
            b = ndimage.correlate1d(ndimage.correlate1d(b, window, axis=0, mode='nearest'), window, axis=1, mode='nearest')
            a = a[::2, ::2]
            b = b[::2, ::2]

        mu1 = _valid_filter(a, window)
        mu2 = _valid_filter(b, window)
        sigma1_sq = _valid_filter(a * a, window) - mu1 * mu1
        sigma2_sq = _valid_filter(b * b, window) - mu2 * mu2
        sigma12 = _valid_filter(a * b, window) - mu1 * mu2
        num, den = vif_scale_terms(sigma1_sq, sigma2_sq, sigma12)
        terms.append((num, den))
    return terms


def vif_scale_terms(sigma1_sq: np.ndarray, sigma2_sq: np.ndarray, sigma12: np.ndarray):
    """Вклад одного масштаба по локальным статистикам"""
    sigma1_sq = np.maximum(sigma1_sq, 0.0)
    sigma2_sq = np.maximum(sigma2_sq, 0.0)

    g = sigma12 / (sigma1_sq + VIF_EPS)
    sv_sq = sigma2_sq - g * sigma12

    flat_ref = sigma1_sq < VIF_EPS
    g[flat_ref] = 0
    sv_sq[flat_ref] = sigma2_sq[flat_ref]
    sigma1_sq = np.where(flat_ref, 0.0, sigma1_sq)

    flat_dist = sigma2_sq < VIF_EPS
    g[flat_dist] = 0
    sv_sq[flat_dist] = 0

    negative = g < 0
    sv_sq[negative] = sigma2_sq[negative]
    g[negative] = 0
    sv_sq = np.maximum(sv_sq, 0.0)

    num = float(np.sum(np.log2(1.0 + g * g * sigma1_sq / (sv_sq + VIF_SIGMA_NSQ))))
    den = float(np.sum(np.log2(1.0 + sigma1_sq / VIF_SIGMA_NSQ)))
    return num, den


def vif(ref: PlaneLike, dist: PlaneLike) -> float:
    """VIF в пиксельной области по четырём масштабам"""
    terms = vif_terms(ref, dist)
    num = sum(t[0] for t in terms)
    den = sum(t[1] for t in terms)
    if den == 0:
        raise UndefinedMetricException("VIF не определён: опорная плоскость постоянна (знаменатель равен 0)")
    return num / den


def aggregate(per_frame: Sequence[float]) -> float:
    """Оценка последовательности: среднее покадровых оценок"""
    if len(per_frame) == 0:
        raise ValidationException("Нельзя агрегировать пустой список оценок")
    return float(np.mean(np.asarray(per_frame, dtype=np.float64)))


def compute(metric: MetricId, ref: PlaneLike, dist: PlaneLike, dynamic_range: float) -> float:
    """Вычисление метрики по идентификатору"""
    if metric is MetricId.PSNR:
        return psnr(ref, dist, dynamic_range)
    if metric is MetricId.SSIM:
        return ssim(ref, dist, dynamic_range)
    if metric is MetricId.VIF:
        return vif(ref, dist)
    raise ValidationException(f"Неизвестная метрика: {metric}")
