"""
Цветовые преобразования: яркость BT.709, нормализация, YUV 12 бит <-> RGB

Матрица YUV выбирается настройкой YUV_MATRIX (bt709 по умолчанию, bt2020);
яркость для метрик и дисплея всегда считается с весами BT.709.
"""
from typing import Dict, Optional, Tuple

import numpy as np

from core.core_logger import get_logger
from core.core_exceptions import ConfigurationException, DimensionMismatchException, ValidationException
from hdrio.hdrio_types import (
    HdrFrame,
    LumaPlane,
    LumaUnits,
    ScaleRecord,
    Yuv12Frame,
    YUV12_MAX,
)
from settings import get_setting

logger = get_logger(__name__)

# Весовые коэффициенты яркости BT.709
KR = 0.2126
KG = 0.7152
KB = 0.0722

# (KR, KG, KB) матриц полного диапазона
YUV_MATRICES: Dict[str, Tuple[float, float, float]] = {
    'bt709': (KR, KG, KB),
    'bt2020': (0.2627, 0.6780, 0.0593),
}

CHROMA_OFFSET = 2048


def luminance(rgb: np.ndarray) -> np.ndarray:
    """Яркость для массива (..., 3)"""
    rgb = np.asarray(rgb, dtype=np.float64)
    return KR * rgb[..., 0] + KG * rgb[..., 1] + KB * rgb[..., 2]


def rgb_to_luminance(frame: HdrFrame) -> LumaPlane:
    """Y = 0.2126 R + 0.7152 G + 0.0722 B в относительных единицах"""
    return LumaPlane(luminance(frame.data), LumaUnits.RELATIVE)


def normalize(plane: LumaPlane, scale: Optional[float] = None) -> Tuple[LumaPlane, ScaleRecord]:
    """
    Нормализация плоскости в [0, 1].

    Без scale делит на максимум плоскости; с scale (максимум последовательности)
    делит на него. Возвращает использованный масштаб.
    """
    if plane.units is LumaUnits.NORMALIZED:
        logger.debug("Плоскость уже нормирована, повторная нормализация")

    per_frame = scale is None
    if scale is None:
        scale = float(plane.values.max()) if plane.values.size else 0.0
    if not scale > 0:
        raise ValidationException("Нормализация невозможна: максимум плоскости равен нулю")

    values = plane.values / scale
    if values.size and values.max() > 1.0:
        raise ValidationException(
            f"Масштаб {scale} меньше максимума плоскости {float(plane.values.max())}"
        )
    return LumaPlane(values, LumaUnits.NORMALIZED), ScaleRecord(float(scale), per_frame=per_frame)


def resolve_yuv_matrix(matrix: Optional[str] = None) -> str:
    """Имя матрицы YUV: явное значение или настройка YUV_MATRIX"""
    name = str(matrix if matrix is not None else get_setting('YUV_MATRIX', 'bt709')).lower()
    if name not in YUV_MATRICES:
        raise ConfigurationException(f"Неизвестная матрица YUV: {name} (допустимы {', '.join(YUV_MATRICES)})")
    return name


def upsample_chroma(plane: np.ndarray) -> np.ndarray:
    """Повторение каждого отсчёта цветности в блок 2x2"""
    return plane.repeat(2, axis=0).repeat(2, axis=1)


def downsample_chroma(plane: np.ndarray) -> np.ndarray:
    """Усреднение блоков 2x2"""
    height, width = plane.shape
    if height % 2 or width % 2:
        raise DimensionMismatchException(f"Размеры плоскости должны быть чётными: {width}x{height}")
    return plane.reshape(height // 2, 2, width // 2, 2).mean(axis=(1, 3))


def yuv_to_rgb(frame: Yuv12Frame, matrix: Optional[str] = None) -> HdrFrame:
    """YUV 12 бит (полный диапазон) в нормированный RGB"""
    kr, kg, kb = YUV_MATRICES[resolve_yuv_matrix(matrix)]
    y = frame.y.astype(np.float64) / YUV12_MAX
    cb = (upsample_chroma(frame.u).astype(np.float64) - CHROMA_OFFSET) / YUV12_MAX
    cr = (upsample_chroma(frame.v).astype(np.float64) - CHROMA_OFFSET) / YUV12_MAX

    r = y + 2.0 * (1.0 - kr) * cr
    b = y + 2.0 * (1.0 - kb) * cb
    g = (y - kr * r - kb * b) / kg

    rgb = np.stack((r, g, b), axis=2)
    return HdrFrame(np.clip(rgb, 0.0, None))


def rgb_to_yuv(frame: HdrFrame, peak: float = 1.0, matrix: Optional[str] = None) -> Yuv12Frame:
    """
    RGB в YUV 12 бит (полный диапазон).

    Радиантность делится на peak и ограничивается [0, 1]; цветность
    прореживается усреднением блоков 2x2.
    """
    if not peak > 0:
        raise ValidationException(f"Пиковое значение должно быть положительным: {peak}")
    if frame.width % 2 or frame.height % 2:
        raise ValidationException(f"Размеры кадра 4:2:0 должны быть чётными: {frame.width}x{frame.height}")
    kr, kg, kb = YUV_MATRICES[resolve_yuv_matrix(matrix)]

    rgb = np.clip(frame.data / peak, 0.0, 1.0)
    if frame.max_value > peak:
        logger.debug(f"Значения выше peak={peak} ограничены при переводе в YUV")

    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    y = kr * r + kg * g + kb * b
    cb = (b - y) / (2.0 * (1.0 - kb))
    cr = (r - y) / (2.0 * (1.0 - kr))

    y_codes = np.clip(np.rint(y * YUV12_MAX), 0, YUV12_MAX)
    u_codes = np.clip(np.rint(downsample_chroma(cb) * YUV12_MAX + CHROMA_OFFSET), 0, YUV12_MAX)
    v_codes = np.clip(np.rint(downsample_chroma(cr) * YUV12_MAX + CHROMA_OFFSET), 0, YUV12_MAX)
    return Yuv12Frame(y_codes.astype(np.uint16), u_codes.astype(np.uint16), v_codes.astype(np.uint16))
