import os
from pathlib import Path
from typing import Dict, Any

# Базовый путь проекта
BASE_DIR = Path(__file__).parent

# Путь к .env файлу
ENV_FILE_PATH = BASE_DIR / '.env'

# Кэш настроек (обновляется по mtime файла)
_settings_cache = {}
_last_modified = 0

# Настройки по умолчанию
DEFAULT_SETTINGS = {
    # Настройки логирования
    'LOG_LEVEL': 'INFO',
    'LOG_FILE': '',

    # Настройки выполнения
    'HDRQA_THREADS': '1',
    'DEFAULT_SEED': '0',

    # Модель дисплея
    'DISPLAY_PEAK_LUMINANCE': '2700.0',
    'DISPLAY_CONTRAST': '2000.0',
    'DISPLAY_BLACK_LEVEL': '',

    # Форматы
    'YUV_MATRIX': 'bt709',

    # PU кодирование
    'PU_TABLE_FILE': '',

    # Мульти-экспозиция
    'ME_EXPOSURE_COUNT': '5',
    'ME_GAMMA': '2.2',
    'ME_ANCHOR_PERCENTILE': '1.0',

    # Симуляция дисплея с двойной модуляцией
    'REINHARD_KEY': '0.18',
    'PSF_SIZE': '12',
    'PSF_SIGMA': '2.0',
    'LCD_DIVISION_GUARD': '0.0001',
    'NORMALIZATION_MODE': 'sequence',

    # Искажения
    'AWGN_SIGMA': '0.002',
    'SALT_PEPPER_FRACTION': '0.02',
    'INTENSITY_SHIFT_FRACTION': '0.1',
    'LPF_SIZE': '8',
    'LPF_SIGMA': '8.0',
}


def load_settings() -> Dict[str, Any]:
    """Загрузка настроек из .env файла с дополнением значениями по умолчанию"""
    global _settings_cache, _last_modified

    # Проверяем, изменился ли файл
    try:
        current_modified = ENV_FILE_PATH.stat().st_mtime
        if current_modified == _last_modified and _settings_cache:
            return _settings_cache
        _last_modified = current_modified
    except FileNotFoundError:
        if _settings_cache:
            return _settings_cache

    settings = {}

    if ENV_FILE_PATH.exists():
        try:
            with open(ENV_FILE_PATH, 'r', encoding='utf-8') as f:
                for line in f:
                    line = line.strip()
                    if line and not line.startswith('#') and '=' in line:
                        key, value = line.split('=', 1)
                        settings[key.strip()] = value.strip()
        except OSError as e:
            print(f"Ошибка чтения .env файла: {e}")
            return dict(DEFAULT_SETTINGS)

    # Дополняем недостающие настройки значениями по умолчанию
    for key, default_value in DEFAULT_SETTINGS.items():
        if key not in settings:
            settings[key] = default_value

    _settings_cache = settings
    return settings


def _coerce(value: str) -> Any:
    """Преобразование строкового значения в нужный тип"""
    if value.lower() in ('true', 'false'):
        return value.lower() == 'true'
    try:
        if '.' in value or 'e' in value.lower():
            return float(value)
        return int(value)
    except ValueError:
        return value


def get_setting(key: str, default: Any = None) -> Any:
    """Получение значения настройки (переменная окружения имеет приоритет над .env)"""
    if key in os.environ:
        value = os.environ[key]
    else:
        value = load_settings().get(key, default)

    if isinstance(value, str):
        if value == '':
            return default
        return _coerce(value)

    return value


def settings_snapshot() -> Dict[str, Any]:
    """Снимок действующих настроек для эхо-конфигурации запуска"""
    return {key: get_setting(key) for key in DEFAULT_SETTINGS}
