from enum import Enum
from dataclasses import dataclass
from typing import Dict, Any

import numpy as np

from core.core_exceptions import ValidationException, SampleRangeException

YUV12_MAX = 4095


class LumaUnits(Enum):
    RELATIVE = "relative"      # относительная яркость, >= 0, без верхней границы
    NORMALIZED = "normalized"  # нормированная яркость в [0, 1]
    ABSOLUTE = "absolute"      # абсолютная яркость, кд/м²


class CodeKind(Enum):
    PU = "pu"
    LDR8 = "ldr8"
    YUV12 = "yuv12"


@dataclass(frozen=True)
class HdrFrame:
    """Кадр HDR: линейная RGB радиантность, форма (height, width, 3), float64"""
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64)
        if data.ndim != 3 or data.shape[2] != 3:
            raise ValidationException(f"Кадр должен иметь форму (h, w, 3), получено {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValidationException("Кадр содержит нечисловые значения")
        if data.size and data.min() < 0:
            raise ValidationException("Кадр содержит отрицательную радиантность")
        data.setflags(write=False)
        object.__setattr__(self, 'data', data)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def max_value(self) -> float:
        return float(self.data.max()) if self.data.size else 0.0

    @classmethod
    def filled(cls, width: int, height: int, rgb) -> 'HdrFrame':
        """Кадр, заполненный одним цветом"""
        data = np.empty((height, width, 3), dtype=np.float64)
        data[...] = np.asarray(rgb, dtype=np.float64)
        return cls(data)


@dataclass(frozen=True)
class Yuv12Frame:
    """Кадр YUV 4:2:0 с 12-битными отсчётами"""
    y: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        planes = {}
        for name in ('y', 'u', 'v'):
            plane = np.asarray(getattr(self, name))
            if plane.ndim != 2:
                raise ValidationException(f"Плоскость {name.upper()} должна быть двумерной")
            if plane.size and (plane.min() < 0 or plane.max() > YUV12_MAX):
                raise SampleRangeException(
                    f"Плоскость {name.upper()} содержит отсчёт {int(plane.max())} > {YUV12_MAX} "
                    f"(неверная битность?)"
                )
            plane = plane.astype(np.uint16)
            plane.setflags(write=False)
            planes[name] = plane

        height, width = planes['y'].shape
        if width % 2 or height % 2:
            raise ValidationException(f"Размеры кадра 4:2:0 должны быть чётными: {width}x{height}")
        chroma_shape = (height // 2, width // 2)
        if planes['u'].shape != chroma_shape or planes['v'].shape != chroma_shape:
            raise ValidationException(
                f"Плоскости цветности должны иметь форму {chroma_shape}, "
                f"получено U={planes['u'].shape}, V={planes['v'].shape}"
            )
        for name, plane in planes.items():
            object.__setattr__(self, name, plane)

    @property
    def width(self) -> int:
        return self.y.shape[1]

    @property
    def height(self) -> int:
        return self.y.shape[0]


@dataclass(frozen=True)
class LumaPlane:
    """Одноканальная плоскость яркости с меткой единиц"""
    values: np.ndarray
    units: LumaUnits = LumaUnits.RELATIVE

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValidationException(f"Плоскость яркости должна быть двумерной, получено {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValidationException("Плоскость яркости содержит нечисловые значения")
        if self.units is LumaUnits.NORMALIZED and values.size and (values.min() < 0 or values.max() > 1):
            raise ValidationException("Нормированная плоскость яркости должна лежать в [0, 1]")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class CodePlane:
    """Плоскость кодовых значений (PU, 8-бит LDR или компонент YUV)"""
    values: np.ndarray
    kind: CodeKind = CodeKind.PU
    clamped: int = 0  # число отсчётов, ограниченных областью определения кодирования

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValidationException(f"Кодовая плоскость должна быть двумерной, получено {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def shape(self):
        return self.values.shape


@dataclass(frozen=True)
class ScaleRecord:
    """Масштаб нормализации (для обратного преобразования)"""
    scale: float
    per_frame: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {'scale': self.scale, 'per_frame': self.per_frame}
