from enum import Enum
from dataclasses import dataclass, field
from typing import Optional, Dict, Any, List

PSNR_CAP_DB = 100.0


class MetricId(Enum):
    PSNR = "psnr"
    SSIM = "ssim"
    VIF = "vif"


@dataclass
class MetricResult:
    """Результат метрики: покадровые оценки и оценка последовательности"""
    metric: MetricId
    adapter: str
    per_frame: List[float] = field(default_factory=list)
    sequence_score: Optional[float] = None
    dynamic_range: Optional[float] = None
    skipped_frames: int = 0

    def to_dict(self) -> Dict[str, Any]:
        """Преобразование в словарь"""
        return {
            'metric': self.metric.value,
            'adapter': self.adapter,
            'per_frame': list(self.per_frame),
            'sequence_score': self.sequence_score,
            'dynamic_range': self.dynamic_range,
            'skipped_frames': self.skipped_frames,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MetricResult':
        """Создание из словаря"""
        return cls(
            metric=MetricId(data['metric']),
            adapter=data['adapter'],
            per_frame=list(data.get('per_frame', [])),
            sequence_score=data.get('sequence_score'),
            dynamic_range=data.get('dynamic_range'),
            skipped_frames=data.get('skipped_frames', 0),
        )
