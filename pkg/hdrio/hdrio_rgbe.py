"""
Чтение и запись Radiance RGBE (.hdr)

Поддерживается заголовок '#?RADIANCE' / '#?RGBE', формат 32-bit_rle_rgbe,
строка разрешения '-Y h +X w' (первая строка развёртки - верх кадра),
RLE строки нового формата, а также плоские строки со старым RLE (1,1,1,n).
"""
import re
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from core.core_logger import get_logger
from core.core_exceptions import (
    FormatException,
    MalformedHeaderException,
    TruncatedDataException,
    UnsupportedOrientationException,
)
from hdrio.hdrio_types import HdrFrame

logger = get_logger(__name__)

RGBE_FORMAT = b'32-bit_rle_rgbe'
MIN_RLE_WIDTH = 8
MAX_RLE_WIDTH = 0x7FFF
MIN_RUN_LENGTH = 4

_RESOLUTION_RE = re.compile(rb'^([-+])([XY])\s+(\d+)\s+([-+])([XY])\s+(\d+)\s*$')


def rgbe_decode_pixel(quad) -> Tuple[float, float, float]:
    """Декодирование одного пикселя RGBE: mantissa/256 * 2^(e-128), e == 0 - ноль"""
    r_m, g_m, b_m, e = (int(v) for v in quad)
    if e == 0:
        return 0.0, 0.0, 0.0
    f = 2.0 ** (e - 128) / 256.0
    return r_m * f, g_m * f, b_m * f


def decode_pixels(quads: np.ndarray) -> np.ndarray:
    """Векторное декодирование массива (..., 4) uint8 в float64 RGB"""
    quads = np.asarray(quads, dtype=np.uint8)
    exponent = quads[..., 3].astype(np.int32)
    mantissa = quads[..., :3].astype(np.float64) / 256.0
    rgb = np.ldexp(mantissa, (exponent - 128)[..., None])
    rgb[exponent == 0] = 0.0
    return rgb


def encode_pixels(rgb: np.ndarray) -> np.ndarray:
    """
    Векторное кодирование float RGB (..., 3) в RGBE (..., 4) uint8.

    Мантиссы округляются к ближайшему и насыщаются на 255, поэтому ошибка
    каждого канала не превышает max(R, G, B) / 256.
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    max_channel = rgb.max(axis=-1)
    mant, exponent = np.frexp(max_channel)
    scale = np.ldexp(256.0, -exponent)

    quads = np.zeros(rgb.shape[:-1] + (4,), dtype=np.uint8)
    mantissas = np.clip(np.floor(rgb * scale[..., None] + 0.5), 0, 255)
    biased = exponent + 128

    valid = (max_channel > 0) & (biased >= 1)
    overflow = biased > 255
    mantissas[overflow] = 255
    biased = np.clip(biased, 0, 255)

    quads[..., :3] = np.where(valid[..., None], mantissas, 0).astype(np.uint8)
    quads[..., 3] = np.where(valid, biased, 0).astype(np.uint8)
    return quads


def _parse_header(data: bytes) -> Tuple[int, int, int]:
    """Разбор заголовка; возвращает (width, height, смещение начала данных)"""
    if not (data.startswith(b'#?RADIANCE') or data.startswith(b'#?RGBE')):
        raise MalformedHeaderException("Отсутствует сигнатура '#?RADIANCE' или '#?RGBE'")

    pos = 0
    format_seen = None
    while True:
        end = data.find(b'\n', pos)
        if end < 0:
            raise MalformedHeaderException("Заголовок не завершён пустой строкой")
        line = data[pos:end].rstrip(b'\r')
        pos = end + 1
        if not line:
            break
        if line.startswith(b'FORMAT='):
            format_seen = line[len(b'FORMAT='):].strip()

    if format_seen is not None and format_seen != RGBE_FORMAT:
        raise MalformedHeaderException(f"Неподдерживаемый формат пикселей: {format_seen.decode(errors='replace')}")

    end = data.find(b'\n', pos)
    if end < 0:
        raise MalformedHeaderException("Отсутствует строка разрешения")
    resolution = data[pos:end].rstrip(b'\r')
    match = _RESOLUTION_RE.match(resolution)
    if not match:
        raise MalformedHeaderException(
            f"Некорректная строка разрешения: {resolution.decode(errors='replace')!r}"
        )

    sign1, axis1, size1, sign2, axis2, size2 = match.groups()
    if (sign1, axis1, sign2, axis2) != (b'-', b'Y', b'+', b'X'):
        raise UnsupportedOrientationException(
            f"Поддерживается только порядок '-Y h +X w', получено {resolution.decode(errors='replace')!r}"
        )

    height, width = int(size1), int(size2)
    if width <= 0 or height <= 0:
        raise MalformedHeaderException(f"Некорректные размеры кадра: {width}x{height}")
    return width, height, end + 1


def _read_flat_scanline(data: bytes, pos: int, width: int, row: int) -> Tuple[np.ndarray, int]:
    """Плоская строка развёртки (включая старый RLE с маркером 1,1,1,n)"""
    needed = width * 4
    if pos + needed > len(data):
        # старый RLE может быть короче плоской строки - проверяем ниже
        chunk = np.frombuffer(data, dtype=np.uint8, count=(len(data) - pos) // 4 * 4, offset=pos).reshape(-1, 4)
    else:
        chunk = np.frombuffer(data, dtype=np.uint8, count=needed, offset=pos).reshape(-1, 4)

    markers = (chunk[:, 0] == 1) & (chunk[:, 1] == 1) & (chunk[:, 2] == 1)
    if chunk.shape[0] >= width and not markers[:width].any():
        return chunk[:width].copy(), pos + needed

    line = np.zeros((width, 4), dtype=np.uint8)
    j = 0
    shift = 0
    k = 0
    while j < width:
        if k >= chunk.shape[0]:
            raise TruncatedDataException(f"Обрезанная строка развёртки {row}")
        quad = chunk[k]
        k += 1
        if quad[0] == 1 and quad[1] == 1 and quad[2] == 1:
            if j == 0:
                raise FormatException(f"Повтор без предыдущего пикселя в строке {row}")
            repeat = int(quad[3]) << shift
            if j + repeat > width:
                raise FormatException(f"Повтор выходит за пределы строки {row}")
            line[j:j + repeat] = line[j - 1]
            j += repeat
            shift += 8
        else:
            line[j] = quad
            j += 1
            shift = 0
    return line, pos + k * 4


def _read_rle_scanline(data: bytes, pos: int, width: int, row: int) -> Tuple[np.ndarray, int]:
    """Строка развёртки нового RLE формата (компоненты кодируются раздельно)"""
    line = np.zeros((width, 4), dtype=np.uint8)
    size = len(data)
    for component in range(4):
        j = 0
        while j < width:
            if pos >= size:
                raise TruncatedDataException(f"Обрезанная строка развёртки {row}")
            code = data[pos]
            pos += 1
            if code > 128:
                count = code - 128
                if j + count > width:
                    raise FormatException(f"Серия выходит за пределы строки {row}")
                if pos >= size:
                    raise TruncatedDataException(f"Обрезанная строка развёртки {row}")
                line[j:j + count, component] = data[pos]
                pos += 1
            else:
                count = code
                if count == 0 or j + count > width:
                    raise FormatException(f"Некорректная длина блока в строке {row}")
                if pos + count > size:
                    raise TruncatedDataException(f"Обрезанная строка развёртки {row}")
                line[j:j + count, component] = np.frombuffer(data, dtype=np.uint8, count=count, offset=pos)
                pos += count
            j += count
    return line, pos


def read_rgbe(data: bytes) -> HdrFrame:
    """Декодирование файла Radiance .hdr из байтов"""
    width, height, pos = _parse_header(data)
    quads = np.zeros((height, width, 4), dtype=np.uint8)

    for row in range(height):
        is_rle = (
            MIN_RLE_WIDTH <= width <= MAX_RLE_WIDTH
            and pos + 4 <= len(data)
            and data[pos] == 2 and data[pos + 1] == 2
            and (data[pos + 2] & 0x80) == 0
        )
        if is_rle:
            declared = (data[pos + 2] << 8) | data[pos + 3]
            if declared != width:
                raise FormatException(f"Длина строки {declared} не совпадает с шириной {width} (строка {row})")
            quads[row], pos = _read_rle_scanline(data, pos + 4, width, row)
        else:
            if pos >= len(data):
                raise TruncatedDataException(f"Обрезанная строка развёртки {row}")
            quads[row], pos = _read_flat_scanline(data, pos, width, row)

    return HdrFrame(decode_pixels(quads))


def _rle_encode_component(values: np.ndarray, out: bytearray):
    """RLE кодирование одного компонента строки"""
    data = values.tobytes()
    n = len(data)
    cur = 0
    while cur < n:
        beg_run = cur
        run_count = 0
        old_run_count = 0
        # ищем следующую серию длиной не меньше MIN_RUN_LENGTH
        while run_count < MIN_RUN_LENGTH and beg_run < n:
            beg_run += run_count
            old_run_count = run_count
            run_count = 1
            while beg_run + run_count < n and run_count < 127 and data[beg_run] == data[beg_run + run_count]:
                run_count += 1
        # короткая серия перед длинной записывается как серия
        if old_run_count > 1 and old_run_count == beg_run - cur:
            out.append(128 + old_run_count)
            out.append(data[cur])
            cur = beg_run
        # литералы до начала серии
        while cur < beg_run:
            count = min(beg_run - cur, 128)
            out.append(count)
            out.extend(data[cur:cur + count])
            cur += count
        if run_count >= MIN_RUN_LENGTH:
            out.append(128 + run_count)
            out.append(data[beg_run])
            cur += run_count


def write_rgbe(frame: HdrFrame) -> bytes:
    """Кодирование кадра в байты Radiance .hdr"""
    width, height = frame.width, frame.height
    header = (
        b'#?RADIANCE\n'
        b'# hdrqa\n'
        b'FORMAT=' + RGBE_FORMAT + b'\n'
        b'\n'
        + f'-Y {height} +X {width}\n'.encode('ascii')
    )
    out = bytearray(header)
    quads = encode_pixels(frame.data)
    use_rle = MIN_RLE_WIDTH <= width <= MAX_RLE_WIDTH

    for row in range(height):
        if use_rle:
            out.extend((2, 2, width >> 8, width & 0xFF))
            for component in range(4):
                _rle_encode_component(np.ascontiguousarray(quads[row, :, component]), out)
        else:
            out.extend(quads[row].tobytes())

    return bytes(out)


def read_rgbe_file(path: Union[str, Path]) -> HdrFrame:
    """Чтение .hdr файла"""
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise FormatException(f"Файл HDR не найден: {path}")
    logger.debug(f"Чтение {path} ({len(data)} байт)")
    return read_rgbe(data)


def write_rgbe_file(path: Union[str, Path], frame: HdrFrame):
    """Запись .hdr файла"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(write_rgbe(frame))
