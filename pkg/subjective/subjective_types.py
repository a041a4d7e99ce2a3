from enum import Enum
from dataclasses import dataclass, field
from typing import Optional, Dict, Any, List

import numpy as np

from core.core_exceptions import ScoreSchemaException, DimensionMismatchException

SCORE_MIN = 1
SCORE_MAX = 10


class ImpairmentCategory(Enum):
    NON_COMPRESSION = "non_compression"
    COMPRESSION = "compression"


class EventKind(Enum):
    REFERENCE = "reference"
    GRAY = "gray"
    TEST = "test"
    VOTE = "vote"


@dataclass(frozen=True)
class ClipInfo:
    """Описание тестового клипа"""
    clip_id: str
    sequence: str
    category: ImpairmentCategory
    impairment: str = ""
    qp: Optional[int] = None
    bitrate_kbps: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'clip_id': self.clip_id,
            'sequence': self.sequence,
            'impairment': self.impairment,
            'category': self.category.value,
            'qp': self.qp,
            'bitrate_kbps': self.bitrate_kbps,
        }


@dataclass
class ScoreTable:
    """Оценки испытуемых: матрица subjects x clips, целые 1..10"""
    subjects: List[str]
    clips: List[ClipInfo]
    scores: np.ndarray

    def __post_init__(self):
        scores = np.asarray(self.scores)
        if scores.shape != (len(self.subjects), len(self.clips)):
            raise DimensionMismatchException(
                f"Матрица оценок {scores.shape} не соответствует {len(self.subjects)} испытуемым "
                f"и {len(self.clips)} клипам"
            )
        if scores.size:
            if not np.all(np.isfinite(scores.astype(np.float64))):
                raise ScoreSchemaException("Пропущенные оценки недопустимы")
            if np.any(scores != np.round(scores)):
                raise ScoreSchemaException("Оценки должны быть целыми")
            bad = np.argwhere((scores < SCORE_MIN) | (scores > SCORE_MAX))
            if bad.size:
                row, col = bad[0]
                raise ScoreSchemaException(
                    f"Оценка {scores[row, col]} вне диапазона [{SCORE_MIN}, {SCORE_MAX}]",
                    row=int(row), column=self.clips[col].clip_id,
                )
        self.scores = scores.astype(np.int64)

    @property
    def clip_ids(self) -> List[str]:
        return [c.clip_id for c in self.clips]

    def without_subjects(self, rejected) -> 'ScoreTable':
        """Таблица без указанных испытуемых"""
        rejected = set(rejected)
        keep = [i for i, s in enumerate(self.subjects) if s not in rejected]
        return ScoreTable([self.subjects[i] for i in keep], list(self.clips), self.scores[keep])


@dataclass
class ClipMos:
    """MOS клипа"""
    clip_id: str
    mos: float
    ci95: float
    n: int

    def to_dict(self) -> Dict[str, Any]:
        return {'clip_id': self.clip_id, 'mos': self.mos, 'ci95': self.ci95, 'n': self.n}


@dataclass
class MosResult:
    """MOS по всем клипам"""
    clips: List[ClipMos] = field(default_factory=list)

    def by_clip(self) -> Dict[str, ClipMos]:
        return {c.clip_id: c for c in self.clips}


@dataclass(frozen=True)
class SessionEvent:
    """Событие показа в сессии"""
    kind: EventKind
    duration: float
    clip_id: Optional[str] = None
    discard: bool = False
    training: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'duration': self.duration,
            'clip_id': self.clip_id,
            'discard': self.discard,
            'training': self.training,
        }


@dataclass
class SessionPlan:
    """План сессии по методу двойного стимула"""
    events: List[SessionEvent] = field(default_factory=list)
    dummy_count: int = 0
    training_count: int = 0
    seed: Optional[int] = None

    @property
    def total_duration(self) -> float:
        return float(sum(e.duration for e in self.events))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dummy_count': self.dummy_count,
            'training_count': self.training_count,
            'seed': self.seed,
            'total_duration': self.total_duration,
            'events': [e.to_dict() for e in self.events],
        }


@dataclass
class SubjectDiagnostics:
    """Диагностика отбраковки испытуемого"""
    subject: str
    above: int   # P
    below: int   # Q
    ratio: float
    asymmetry: Optional[float]
    rejected: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'subject': self.subject,
            'P': self.above,
            'Q': self.below,
            'ratio': self.ratio,
            'asymmetry': self.asymmetry,
            'rejected': self.rejected,
        }


@dataclass
class ClipDiagnostics:
    """Статистики клипа для отбраковки"""
    clip_id: str
    mean: float
    std: float
    kurtosis: Optional[float]
    threshold: float
    normal: bool


@dataclass
class ScreeningResult:
    """Результат отбраковки по BT.500"""
    rejected: List[str] = field(default_factory=list)
    subjects: List[SubjectDiagnostics] = field(default_factory=list)
    clips: List[ClipDiagnostics] = field(default_factory=list)
    low_confidence: bool = False


@dataclass
class CorrelationCell:
    """Корреляции метрики с MOS в одной категории"""
    metric: str
    category: str
    pearson: Optional[float]
    spearman: Optional[float]
    rmse: Optional[float]
    n: int
    fitted_rmse: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'metric': self.metric,
            'category': self.category,
            'pearson': self.pearson,
            'spearman': self.spearman,
            'rmse': self.rmse,
            'fitted_rmse': self.fitted_rmse,
            'n': self.n,
        }


@dataclass
class CorrelationReport:
    """Отчёт о корреляции объективных метрик с MOS"""
    cells: List[CorrelationCell] = field(default_factory=list)
    scatter: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    bitrate_series: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    metrics: List[str] = field(default_factory=list)

    def cell(self, metric: str, category: str) -> CorrelationCell:
        for c in self.cells:
            if c.metric == metric and c.category == category:
                return c
        raise KeyError(f"{metric}/{category}")
