"""
Гауссовы ядра и сепарабельная фильтрация

Ядро чётного размера центрировано между отсчётами; якорь фильтра стоит
в позиции (size - 1) // 2 (для 8x8 это (3, 3), верхний левый из центрального 2x2).
Граница: повторение крайних отсчётов.
"""
import numpy as np
from scipy import ndimage

from core.core_exceptions import ValidationException


def gaussian_kernel_1d(size: int, sigma: float) -> np.ndarray:
    """Одномерное гауссово ядро длины size с суммой 1"""
    if size < 1:
        raise ValidationException(f"Размер ядра должен быть >= 1: {size}")
    if not sigma > 0:
        raise ValidationException(f"sigma должна быть положительной: {sigma}")
    x = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    kernel = np.exp(-(x ** 2) / (2.0 * sigma ** 2))
    return kernel / kernel.sum()


def gaussian_kernel_2d(size: int, sigma: float) -> np.ndarray:
    """Двумерное ядро size x size как внешнее произведение одномерных"""
    kernel = gaussian_kernel_1d(size, sigma)
    return np.outer(kernel, kernel)


def kernel_anchor(size: int) -> int:
    """Индекс якоря ядра"""
    return (size - 1) // 2


def _origin(size: int) -> int:
    # scipy ставит центр в size // 2 + origin
    return kernel_anchor(size) - size // 2


def separable_filter(plane: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Сепарабельная корреляция двумерной плоскости с одномерным ядром по обеим осям"""
    plane = np.asarray(plane, dtype=np.float64)
    origin = _origin(kernel.size)
    rows = ndimage.correlate1d(plane, kernel, axis=0, mode='nearest', origin=origin)
    return ndimage.correlate1d(rows, kernel, axis=1, mode='nearest', origin=origin)


def gaussian_blur(plane: np.ndarray, size: int, sigma: float) -> np.ndarray:
    """Гауссово размытие двумерной плоскости"""
    return separable_filter(plane, gaussian_kernel_1d(size, sigma))
