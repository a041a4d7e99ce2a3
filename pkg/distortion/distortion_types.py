from enum import Enum
from dataclasses import dataclass, field
from typing import Optional, Dict, Any

from core.core_exceptions import ConfigurationException

HEVC_QP_SET = (22, 27, 32, 37)


class DistortionKind(Enum):
    AWGN = "awgn"
    INTENSITY_SHIFT = "intensity_shift"
    SALT_PEPPER = "salt_pepper"
    GAUSSIAN_LPF = "gaussian_lowpass"
    COMPRESSION = "compression"  # только метка, кодирование выполняется внешним HEVC


STOCHASTIC_KINDS = {DistortionKind.AWGN, DistortionKind.SALT_PEPPER}

# Допустимые параметры для каждого вида искажения
KIND_PARAMETERS = {
    DistortionKind.AWGN: {'sigma'},
    DistortionKind.INTENSITY_SHIFT: {'fraction'},
    DistortionKind.SALT_PEPPER: {'fraction'},
    DistortionKind.GAUSSIAN_LPF: {'size', 'sigma'},
    DistortionKind.COMPRESSION: {'qp'},
}


@dataclass
class DistortionSpec:
    """Описание искажения: вид, параметры, зерно генератора"""
    kind: DistortionKind
    parameters: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.kind, str):
            try:
                self.kind = DistortionKind(self.kind)
            except ValueError:
                raise ConfigurationException(f"Неизвестный вид искажения: {self.kind}")
        self.validate()

    def validate(self):
        """Проверка параметров и наличия зерна"""
        unknown = set(self.parameters) - KIND_PARAMETERS[self.kind]
        if unknown:
            raise ConfigurationException(
                f"Параметры {sorted(unknown)} не применимы к искажению {self.kind.value}"
            )

        if self.kind in STOCHASTIC_KINDS and self.seed is None:
            raise ConfigurationException(f"Для искажения {self.kind.value} требуется seed")
        if self.kind not in STOCHASTIC_KINDS and self.seed is not None:
            raise ConfigurationException(f"Искажение {self.kind.value} детерминировано, seed не допускается")
        if self.seed is not None and not 0 <= self.seed < 2 ** 64:
            raise ConfigurationException(f"seed должен быть 64-битным целым без знака: {self.seed}")

        p = self.parameters
        if 'sigma' in p and self.kind is DistortionKind.AWGN and p['sigma'] < 0:
            raise ConfigurationException(f"sigma не может быть отрицательной: {p['sigma']}")
        if 'sigma' in p and self.kind is DistortionKind.GAUSSIAN_LPF and not p['sigma'] > 0:
            raise ConfigurationException(f"sigma фильтра должна быть положительной: {p['sigma']}")
        if 'size' in p and (int(p['size']) != p['size'] or p['size'] < 1):
            raise ConfigurationException(f"Размер ядра должен быть целым >= 1: {p['size']}")
        if 'fraction' in p and not 0 <= p['fraction'] <= 1:
            raise ConfigurationException(f"Доля должна лежать в [0, 1]: {p['fraction']}")
        if 'qp' in p and p['qp'] not in HEVC_QP_SET:
            raise ConfigurationException(f"QP должен быть одним из {HEVC_QP_SET}: {p['qp']}")

    def to_dict(self) -> Dict[str, Any]:
        """Преобразование в словарь"""
        return {
            'kind': self.kind.value,
            'parameters': dict(self.parameters),
            'seed': self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DistortionSpec':
        """Создание из словаря"""
        return cls(
            kind=DistortionKind(data['kind']),
            parameters=dict(data.get('parameters', {})),
            seed=data.get('seed'),
        )
