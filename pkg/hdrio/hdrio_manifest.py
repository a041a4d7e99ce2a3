"""
Манифест набора HDR видео (YAML, схема версии 1)
"""
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from core.core_logger import get_logger
from core.core_exceptions import ManifestException
from core.core_utils import CoreUtils

logger = get_logger(__name__)

SCHEMA_VERSION = 1

LineageKind = Literal['awgn', 'salt_pepper', 'intensity_shift', 'gaussian_lowpass', 'compression']


class Environment(str, Enum):
    INDOOR = "indoor"
    OUTDOOR = "outdoor"


class Motion(str, Enum):
    SLOW = "slow"
    INTERMEDIATE = "intermediate"
    FAST = "fast"


class SourceFormat(str, Enum):
    RGBE = "rgbe"
    YUV12 = "yuv12"


class LineageModel(BaseModel):
    """Происхождение искажённой последовательности"""
    model_config = ConfigDict(extra='forbid')

    kind: LineageKind
    parent: Optional[str] = None
    seed: Optional[int] = None
    parameters: Dict[str, Any] = Field(default_factory=dict)
    modified_pixels_per_frame: Optional[int] = None


class SequenceManifest(BaseModel):
    """Описание одной последовательности"""
    model_config = ConfigDict(extra='forbid')

    name: str = Field(min_length=1)
    frames: int = Field(gt=0)
    fps: float = Field(gt=0)
    width: int = Field(gt=0)
    height: int = Field(gt=0)
    environment: Environment
    motion: Motion
    source_format: SourceFormat = SourceFormat.RGBE
    path: Optional[str] = None
    lineage: Optional[LineageModel] = None
    qp: Optional[int] = Field(default=None, ge=0, le=51)
    bitrate_kbps: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode='after')
    def check_compression_fields(self) -> 'SequenceManifest':
        is_compression = self.lineage is not None and self.lineage.kind == 'compression'
        if is_compression and self.qp is None:
            raise ValueError(f"{self.name}: qp обязателен для сжатой последовательности")
        if not is_compression and self.qp is not None:
            raise ValueError(f"{self.name}: qp допустим только при lineage.kind = compression")
        return self

    @property
    def resolution(self) -> str:
        return f"{self.width}x{self.height}"


class DatasetManifest(BaseModel):
    """Манифест набора данных"""
    model_config = ConfigDict(extra='forbid')

    schema_version: int = SCHEMA_VERSION
    name: str = 'dataset'
    sequences: List[SequenceManifest] = Field(default_factory=list)

    @model_validator(mode='after')
    def check_unique_names(self) -> 'DatasetManifest':
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(f"Неподдерживаемая версия схемы: {self.schema_version}")
        seen = set()
        for sequence in self.sequences:
            if sequence.name in seen:
                raise ValueError(f"Повторяющееся имя последовательности: {sequence.name}")
            seen.add(sequence.name)
        return self

    def get(self, name: str) -> SequenceManifest:
        """Последовательность по имени"""
        for sequence in self.sequences:
            if sequence.name == name:
                return sequence
        raise ManifestException(f"Последовательность '{name}' отсутствует в манифесте '{self.name}'")

    def bitrates(self) -> Dict[Tuple[str, int], float]:
        """Битрейты сжатых последовательностей по (исходная последовательность, QP)"""
        bitrates = {}
        for s in self.sequences:
            if s.qp is not None and s.bitrate_kbps is not None:
                parent = s.lineage.parent if s.lineage and s.lineage.parent else s.name
                bitrates[(parent, s.qp)] = s.bitrate_kbps
        return bitrates


def parse_manifest(document: Dict[str, Any]) -> DatasetManifest:
    """Валидация словаря манифеста"""
    if not isinstance(document, dict):
        raise ManifestException("Манифест должен быть YAML словарём")
    try:
        return DatasetManifest.model_validate(document)
    except ValidationError as e:
        details = '; '.join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise ManifestException(f"Некорректный манифест: {details}")


def load_manifest(path: Union[str, Path]) -> DatasetManifest:
    """Загрузка манифеста из YAML файла"""
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            document = yaml.safe_load(f)
    except FileNotFoundError:
        raise ManifestException(f"Манифест не найден: {path}")
    except yaml.YAMLError as e:
        raise ManifestException(f"Ошибка разбора YAML {path}: {e}")

    manifest = parse_manifest(document)
    logger.debug(f"Манифест {path}: {len(manifest.sequences)} последовательностей")
    return manifest


def save_manifest(manifest: DatasetManifest, path: Union[str, Path]):
    """Сохранение манифеста в YAML"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = CoreUtils.to_plain(manifest.model_dump(exclude_none=True))
    with open(path, 'w', encoding='utf-8') as f:
        yaml.safe_dump(document, f, sort_keys=False, allow_unicode=True)


def validate_manifest(path: Union[str, Path]) -> List[str]:
    """Проверка манифеста; возвращает строки сводки по последовательностям"""
    manifest = load_manifest(path)
    lines = []
    for s in manifest.sequences:
        lineage = s.lineage.kind if s.lineage else 'source'
        extra = f" QP {s.qp} {s.bitrate_kbps} kb/s" if s.qp is not None else ''
        lines.append(
            f"{s.name}: {s.frames} кадров {s.resolution} @ {s.fps:g} fps, "
            f"{s.motion.value}/{s.environment.value}, {lineage}{extra}"
        )
    logger.info(f"✅ Манифест {manifest.name} корректен ({len(manifest.sequences)} последовательностей)")
    return lines
