"""
Детерминированные генераторы случайных чисел

PCG64 из numpy; поток кадра определяется парой (seed, номер кадра) через
spawn_key SeedSequence, поэтому результат кадра не зависит от порядка обработки.
"""
import numpy as np

from core.core_exceptions import ValidationException


def frame_generator(seed: int, frame_index: int = 0) -> np.random.Generator:
    """Генератор для кадра frame_index"""
    if frame_index < 0:
        raise ValidationException(f"Номер кадра не может быть отрицательным: {frame_index}")
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(frame_index,))
    return np.random.Generator(np.random.PCG64(sequence))
