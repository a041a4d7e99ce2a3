"""
Пользовательские исключения для системы HDRQA

Каждый класс несёт код завершения, который main.py возвращает из CLI:
1 - ошибка использования, 2 - ошибка данных/схемы, 3 - численная ошибка.
"""
from typing import Optional


class HdrqaException(Exception):
    """Базовое исключение для HDRQA"""
    exit_code = 2


class ConfigurationException(HdrqaException):
    """Исключения связанные с конфигурацией и параметрами запуска"""
    exit_code = 1


class ValidationException(HdrqaException):
    """Исключения связанные с валидацией данных"""
    pass


class DimensionMismatchException(ValidationException):
    """Несовпадение размеров кадров, плоскостей или числа кадров"""
    pass


class ManifestException(ValidationException):
    """Исключения связанные с манифестами набора данных"""
    pass


class ScoreSchemaException(ValidationException):
    """Нарушение схемы CSV с оценками (с координатами строки и столбца)"""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        location = []
        if row is not None:
            location.append(f"строка {row}")
        if column is not None:
            location.append(f"столбец {column}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class FormatException(HdrqaException):
    """Исключения связанные с форматами файлов"""
    pass


class MalformedHeaderException(FormatException):
    """Некорректный заголовок Radiance"""
    pass


class TruncatedDataException(FormatException):
    """Обрезанная строка развёртки или недостаточная длина YUV данных"""
    pass


class UnsupportedOrientationException(FormatException):
    """Неподдерживаемый порядок пикселей в строке разрешения"""
    pass


class SampleRangeException(FormatException):
    """Отсчёт вне 12-битного диапазона"""
    pass


class NumericException(HdrqaException):
    """Численные ошибки"""
    exit_code = 3


class UndefinedMetricException(NumericException):
    """Метрика или корреляция не определена для входных данных"""
    pass
