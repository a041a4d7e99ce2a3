from dataclasses import dataclass
from typing import Dict, Any, Optional

import numpy as np


@dataclass
class DisplaySignals:
    """Сигналы дисплея с двойной модуляцией для одного кадра"""
    luma: np.ndarray          # Y, нормированная яркость [0, 1]
    projector: np.ndarray     # Y_projector = sqrt(Y)
    lightfield: np.ndarray    # Y_projector после PSF
    rgb_lcd: np.ndarray       # результат тональной компрессии, (h, w, 3)
    lcd: np.ndarray           # управляющий сигнал LCD, (h, w, 3) в [0, 1]
    clamped: np.ndarray       # маска ограниченных отсчётов LCD, (h, w, 3)

    @property
    def clamp_fraction(self) -> float:
        return float(np.mean(self.clamped)) if self.clamped.size else 0.0

    @property
    def shape(self):
        return self.luma.shape


@dataclass
class FrameSummary:
    """Сводка симуляции по кадру"""
    frame: int
    clamp_fraction: float
    emitted_max: float
    emitted_min: float
    reconstruction_rmse: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        """Преобразование в словарь"""
        return {
            'frame': self.frame,
            'clamp_fraction': self.clamp_fraction,
            'emitted_max': self.emitted_max,
            'emitted_min': self.emitted_min,
            'reconstruction_rmse': self.reconstruction_rmse,
        }
