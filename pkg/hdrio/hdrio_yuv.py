"""
Чтение и запись сырого YUV 4:2:0 (I420), 12 бит в 16-битных little-endian контейнерах
"""
from pathlib import Path
from typing import Iterator, Union

import numpy as np

from core.core_logger import get_logger
from core.core_exceptions import (
    SampleRangeException,
    TruncatedDataException,
    ValidationException,
)
from hdrio.hdrio_types import Yuv12Frame, YUV12_MAX

logger = get_logger(__name__)

SAMPLE_DTYPE = np.dtype('<u2')


def frame_stride(width: int, height: int) -> int:
    """Размер одного кадра в байтах: Y + U + V по 2 байта на отсчёт"""
    if width <= 0 or height <= 0 or width % 2 or height % 2:
        raise ValidationException(f"Размеры кадра 4:2:0 должны быть положительными и чётными: {width}x{height}")
    return width * height * 2 + 2 * (width // 2) * (height // 2) * 2


def read_yuv12(data: bytes, width: int, height: int, frame_index: int = 0) -> Yuv12Frame:
    """Чтение кадра frame_index из буфера сырого YUV"""
    if frame_index < 0:
        raise ValidationException(f"Номер кадра не может быть отрицательным: {frame_index}")

    stride = frame_stride(width, height)
    offset = frame_index * stride
    if len(data) < offset + stride:
        raise TruncatedDataException(
            f"Недостаточно данных для кадра {frame_index}: нужно {offset + stride} байт, есть {len(data)}"
        )

    luma_count = width * height
    chroma_count = (width // 2) * (height // 2)
    samples = np.frombuffer(data, dtype=SAMPLE_DTYPE, count=luma_count + 2 * chroma_count, offset=offset)

    if samples.size and samples.max() > YUV12_MAX:
        raise SampleRangeException(
            f"Кадр {frame_index}: отсчёт {int(samples.max())} > {YUV12_MAX}, ожидалась 12-битная глубина"
        )

    y = samples[:luma_count].reshape(height, width)
    u = samples[luma_count:luma_count + chroma_count].reshape(height // 2, width // 2)
    v = samples[luma_count + chroma_count:].reshape(height // 2, width // 2)
    return Yuv12Frame(y, u, v)


def write_yuv12(frame: Yuv12Frame) -> bytes:
    """Сериализация кадра в планарный I420 с little-endian отсчётами"""
    return b''.join(plane.astype(SAMPLE_DTYPE).tobytes() for plane in (frame.y, frame.u, frame.v))


def iter_yuv12_file(path: Union[str, Path], width: int, height: int) -> Iterator[Yuv12Frame]:
    """Последовательное чтение кадров из файла .yuv"""
    path = Path(path)
    stride = frame_stride(width, height)
    with open(path, 'rb') as f:
        index = 0
        while True:
            chunk = f.read(stride)
            if not chunk:
                break
            if len(chunk) < stride:
                raise TruncatedDataException(f"{path}: кадр {index} обрезан ({len(chunk)} из {stride} байт)")
            yield read_yuv12(chunk, width, height)
            index += 1
    logger.debug(f"{path}: прочитано кадров: {index}")


def write_yuv12_file(path: Union[str, Path], frames) -> int:
    """Запись последовательности кадров в файл .yuv; возвращает число кадров"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, 'wb') as f:
        for frame in frames:
            f.write(write_yuv12(frame))
            count += 1
    return count
