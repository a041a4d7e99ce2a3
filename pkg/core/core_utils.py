import hashlib
import json
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from core.core_logger import get_logger

logger = get_logger(__name__)


class CoreUtils:
    """Утилиты общего назначения"""

    @staticmethod
    def to_plain(obj: Any) -> Any:
        """Приведение объекта к простым типам для YAML/JSON"""
        if isinstance(obj, Enum):
            return obj.value
        if isinstance(obj, Path):
            return str(obj)
        if isinstance(obj, np.generic):
            return obj.item()
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if is_dataclass(obj) and not isinstance(obj, type):
            return CoreUtils.to_plain(asdict(obj))
        if hasattr(obj, 'model_dump'):
            return CoreUtils.to_plain(obj.model_dump())
        if isinstance(obj, dict):
            return {str(k): CoreUtils.to_plain(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [CoreUtils.to_plain(v) for v in obj]
        return obj

    @staticmethod
    def safe_json_dumps(data: Any) -> str:
        """Детерминированная сериализация в JSON (ключи отсортированы)"""
        try:
            return json.dumps(CoreUtils.to_plain(data), sort_keys=True, separators=(',', ':'))
        except (TypeError, ValueError) as e:
            logger.error(f"Ошибка сериализации JSON: {e}")
            return "{}"

    @staticmethod
    def stable_hash(payload: Dict[str, Any], length: int = 12) -> str:
        """Короткий хэш параметров (одинаковые параметры - одинаковый хэш)"""
        digest = hashlib.sha256(CoreUtils.safe_json_dumps(payload).encode('utf-8'))
        return digest.hexdigest()[:length]

    @staticmethod
    def format_number(value: Optional[float], precision: int = 4) -> str:
        """Форматирование числа для отчётов ('n/a' для отсутствующих значений)"""
        if value is None:
            return 'n/a'
        try:
            if not np.isfinite(value):
                return 'n/a'
        except TypeError:
            return 'n/a'
        return f"{value:.{precision}f}"
