from enum import Enum
from dataclasses import dataclass
from typing import Optional, Dict, Any, Tuple

from core.core_exceptions import ValidationException


class AdapterKind(Enum):
    PU = "pu"   # перцептивно-равномерное кодирование
    ME = "me"   # мульти-экспозиция


@dataclass(frozen=True)
class DisplayModel:
    """Модель дисплея: пиковая яркость, контраст и уровень чёрного (кд/м²)"""
    peak: float = 2700.0
    contrast: float = 2000.0
    black_level: Optional[float] = None

    def __post_init__(self):
        if self.black_level is None:
            if not self.contrast > 1:
                raise ValidationException(f"Контраст должен быть больше 1: {self.contrast}")
            object.__setattr__(self, 'black_level', self.peak / self.contrast)
        if not self.peak > self.black_level > 0:
            raise ValidationException(
                f"Требуется peak > black > 0, получено peak={self.peak}, black={self.black_level}"
            )

    def to_dict(self) -> Dict[str, Any]:
        return {'peak': self.peak, 'contrast': self.contrast, 'black_level': self.black_level}


@dataclass(frozen=True)
class ExposureSet:
    """Набор виртуальных экспозиций (в стопах log2) и гамма"""
    exposures: Tuple[float, ...]
    gamma: float = 2.2

    def __post_init__(self):
        exposures = tuple(float(e) for e in self.exposures)
        if not exposures:
            raise ValidationException("Набор экспозиций пуст")
        if any(b <= a for a, b in zip(exposures, exposures[1:])):
            raise ValidationException(f"Экспозиции должны строго возрастать: {exposures}")
        if not self.gamma > 0:
            raise ValidationException(f"Гамма должна быть положительной: {self.gamma}")
        object.__setattr__(self, 'exposures', exposures)

    @property
    def count(self) -> int:
        return len(self.exposures)

    def to_dict(self) -> Dict[str, Any]:
        return {'exposures': list(self.exposures), 'gamma': self.gamma}
