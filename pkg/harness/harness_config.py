"""
Конфигурация запуска и её эхо (run_config.yaml) для воспроизведения
"""
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from core.core_logger import get_logger
from core.core_exceptions import ConfigurationException
from core.core_utils import CoreUtils
from settings import settings_snapshot

logger = get_logger(__name__)

ECHO_FILE = 'run_config.yaml'
SCHEMA_VERSION = 1

Command = Literal['distort', 'metric', 'display-sim', 'analyze', 'session-plan', 'manifest-validate']


YuvMatrix = Literal['bt709', 'bt2020']

# Флаги distort, применимые к каждому виду искажения
KIND_FLAGS = {
    'awgn': {'sigma'},
    'intensity_shift': {'fraction'},
    'salt_pepper': {'fraction'},
    'gaussian_lowpass': {'size', 'lpf_sigma'},
    'compression': {'qp'},
}


class DistortParams(BaseModel):
    model_config = ConfigDict(extra='forbid')

    input: str
    manifest: str
    sequence: str
    kind: Literal['awgn', 'intensity_shift', 'salt_pepper', 'gaussian_lowpass', 'compression']
    sigma: Optional[float] = None
    fraction: Optional[float] = None
    size: Optional[int] = None
    lpf_sigma: Optional[float] = None
    qp: Optional[int] = None
    output_format: Literal['hdr', 'yuv12'] = 'hdr'
    yuv_matrix: Optional[YuvMatrix] = None

    @model_validator(mode='after')
    def flags_match_kind(self) -> 'DistortParams':
        allowed = KIND_FLAGS[self.kind]
        for flag in ('sigma', 'fraction', 'size', 'lpf_sigma', 'qp'):
            if getattr(self, flag) is not None and flag not in allowed:
                raise ValueError(f"--{flag.replace('_', '-')} не применим к искажению {self.kind}")
        return self

    def kind_parameters(self) -> Dict[str, Any]:
        """Параметры для DistortionSpec: --lpf-sigma становится sigma фильтра"""
        return {
            'sigma': self.lpf_sigma if self.kind == 'gaussian_lowpass' else self.sigma,
            'fraction': self.fraction,
            'size': self.size,
            'qp': self.qp,
        }


class MetricParams(BaseModel):
    model_config = ConfigDict(extra='forbid')

    reference: str
    distorted: str
    metrics: List[Literal['psnr', 'ssim', 'vif']] = Field(default_factory=lambda: ['psnr', 'ssim', 'vif'])
    adapters: List[Literal['pu', 'me']] = Field(default_factory=lambda: ['pu', 'me'])
    clip_id: Optional[str] = None
    width: Optional[int] = None
    height: Optional[int] = None
    peak: Optional[float] = None
    contrast: Optional[float] = None
    exposures: Optional[int] = None
    gamma: Optional[float] = None
    pu_table: Optional[str] = None
    reference_peak: Optional[float] = Field(default=None, gt=0)
    distorted_peak: Optional[float] = Field(default=None, gt=0)
    yuv_matrix: Optional[YuvMatrix] = None

    @field_validator('metrics', 'adapters')
    @classmethod
    def non_empty(cls, value):
        if not value:
            raise ValueError("список не может быть пустым")
        return value


class DisplayParams(BaseModel):
    model_config = ConfigDict(extra='forbid')

    input: str
    width: Optional[int] = None
    height: Optional[int] = None
    peak: Optional[float] = None
    contrast: Optional[float] = None
    key: Optional[float] = None
    psf_size: Optional[int] = None
    psf_sigma: Optional[float] = None
    normalization: Optional[Literal['sequence', 'frame']] = None
    yuv_peak: Optional[float] = Field(default=None, gt=0)
    yuv_matrix: Optional[YuvMatrix] = None


class AnalyzeParams(BaseModel):
    model_config = ConfigDict(extra='forbid')

    scores: str
    clips: str
    objective: str
    roster: Optional[str] = None
    manifest: Optional[str] = None
    bitrates: Optional[str] = None
    fit_linear: bool = False


class SessionParams(BaseModel):
    model_config = ConfigDict(extra='forbid')

    clips: str
    dummy_count: int = Field(default=0, ge=0)
    training: List[str] = Field(default_factory=list)


class ManifestParams(BaseModel):
    model_config = ConfigDict(extra='forbid')

    path: str


PARAMS_MODELS = {
    'distort': DistortParams,
    'metric': MetricParams,
    'display-sim': DisplayParams,
    'analyze': AnalyzeParams,
    'session-plan': SessionParams,
    'manifest-validate': ManifestParams,
}


class RunConfig(BaseModel):
    """Полная конфигурация одного запуска"""
    model_config = ConfigDict(extra='forbid')

    schema_version: int = SCHEMA_VERSION
    command: Command
    seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)
    out_dir: str = 'out'
    log_level: str = 'INFO'
    params: Dict[str, Any] = Field(default_factory=dict)
    settings: Dict[str, Any] = Field(default_factory=dict)

    def typed_params(self) -> BaseModel:
        """Параметры подкоманды, проверенные моделью подкоманды"""
        try:
            return PARAMS_MODELS[self.command].model_validate(self.params)
        except ValidationError as e:
            raise ConfigurationException(f"Некорректные параметры команды {self.command}: {_describe(e)}")


def _describe(error: ValidationError) -> str:
    return '; '.join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in error.errors())


def build_config(command: str, params: Dict[str, Any], seed: int, threads: int,
                 out_dir: str, log_level: str = 'INFO') -> RunConfig:
    """Сборка и проверка конфигурации до начала работы"""
    try:
        config = RunConfig(
            command=command,
            seed=seed,
            threads=threads,
            out_dir=str(out_dir),
            log_level=log_level,
            params={k: v for k, v in params.items() if v is not None},
            settings=settings_snapshot(),
        )
    except ValidationError as e:
        raise ConfigurationException(f"Некорректная конфигурация запуска: {_describe(e)}")
    config.typed_params()
    return config


def write_echo(config: RunConfig, out_dir: Union[str, Path, None] = None) -> Path:
    """Запись run_config.yaml в каталог результатов"""
    out_dir = Path(out_dir or config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / ECHO_FILE
    with open(path, 'w', encoding='utf-8') as f:
        yaml.safe_dump(CoreUtils.to_plain(config.model_dump()), f, sort_keys=True, allow_unicode=True)
    return path


def load_echo(path: Union[str, Path]) -> RunConfig:
    """Чтение эха конфигурации"""
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            document = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigurationException(f"Файл конфигурации не найден: {path}")
    except yaml.YAMLError as e:
        raise ConfigurationException(f"Ошибка разбора {path}: {e}")
    try:
        config = RunConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigurationException(f"Некорректное эхо конфигурации {path}: {_describe(e)}")
    config.typed_params()
    return config


def apply_echo_settings(config: RunConfig):
    """Восстановление настроек, действовавших при исходном запуске"""
    for key, value in config.settings.items():
        if value is None:
            os.environ.pop(key, None)
        else:
            os.environ[key] = str(value)
