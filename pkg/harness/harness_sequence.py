"""
Загрузка и запись последовательностей кадров

Поддерживаются каталог кадров .hdr (сортировка по имени), одиночный .hdr
и планарный 12-битный .yuv. Для .yuv, записанного подкомандой distort,
геометрия, делитель peak и матрица берутся из manifest.yaml рядом с файлом;
явно заданные значения имеют приоритет.
"""
from pathlib import Path
from typing import List, Optional, Sequence, Union

from core.core_logger import get_logger
from core.core_exceptions import ConfigurationException, DimensionMismatchException, ValidationException
from hdrio.hdrio_color import resolve_yuv_matrix, rgb_to_yuv, yuv_to_rgb
from hdrio.hdrio_manifest import SequenceManifest, load_manifest
from hdrio.hdrio_rgbe import read_rgbe_file, write_rgbe_file
from hdrio.hdrio_types import HdrFrame
from hdrio.hdrio_yuv import iter_yuv12_file, write_yuv12_file

logger = get_logger(__name__)

PathLike = Union[str, Path]

HDR_SUFFIXES = ('.hdr', '.pic', '.rgbe')
YUV_SUFFIX = '.yuv'
FRAME_PATTERN = 'frame_{:05d}.hdr'
DERIVED_MANIFEST = 'manifest.yaml'


def list_hdr_frames(directory: PathLike) -> List[Path]:
    """Файлы кадров каталога в порядке имён"""
    directory = Path(directory)
    files = sorted(p for p in directory.iterdir() if p.suffix.lower() in HDR_SUFFIXES)
    if not files:
        raise ValidationException(f"В каталоге {directory} нет кадров .hdr")
    return files


def derived_entry(path: PathLike) -> Optional[SequenceManifest]:
    """Запись производного манифеста рядом с файлом, описывающая этот файл"""
    path = Path(path)
    manifest_path = path.parent / DERIVED_MANIFEST
    if not manifest_path.is_file():
        return None
    for sequence in load_manifest(manifest_path).sequences:
        if sequence.path == path.name:
            return sequence
    return None


def load_sequence(path: PathLike, width: Optional[int] = None, height: Optional[int] = None,
                  peak: Optional[float] = None, matrix: Optional[str] = None) -> List[HdrFrame]:
    """Загрузка последовательности; YUV переводится в RGB и умножается на peak"""
    path = Path(path)
    if not path.exists():
        raise ConfigurationException(f"Входной путь не найден: {path}")

    if path.is_dir():
        frames = [read_rgbe_file(p) for p in list_hdr_frames(path)]
    elif path.suffix.lower() in HDR_SUFFIXES:
        frames = [read_rgbe_file(path)]
    elif path.suffix.lower() == YUV_SUFFIX:
        frames = _load_yuv(path, width, height, peak, matrix)
    else:
        raise ConfigurationException(f"Неизвестный формат последовательности: {path.name}")

    if not frames:
        raise ValidationException(f"Последовательность {path} пуста")
    check_geometry(frames, str(path))
    logger.info(f"📥 Загружено {len(frames)} кадров {frames[0].width}x{frames[0].height} из {path}")
    return frames


def _load_yuv(path: Path, width: Optional[int], height: Optional[int],
              peak: Optional[float], matrix: Optional[str]) -> List[HdrFrame]:
    entry = derived_entry(path)
    if entry is not None:
        parameters = entry.lineage.parameters if entry.lineage else {}
        width = width or entry.width
        height = height or entry.height
        if peak is None and parameters.get('yuv_peak') is not None:
            peak = float(parameters['yuv_peak'])
            logger.info(f"📋 {path.name}: peak={peak:g} из {DERIVED_MANIFEST}")
        if matrix is None:
            matrix = parameters.get('yuv_matrix')

    if not width or not height:
        raise ConfigurationException(f"Для {path.name} нужны --width и --height")
    if peak is None:
        logger.warning(f"⚠️ {path.name}: peak не задан и не найден в {DERIVED_MANIFEST}, значения остаются в [0, 1]")
        peak = 1.0
    elif not peak > 0:
        raise ConfigurationException(f"peak для {path.name} должен быть положительным: {peak}")

    matrix = resolve_yuv_matrix(matrix)
    frames = []
    for yuv in iter_yuv12_file(path, width, height):
        rgb = yuv_to_rgb(yuv, matrix)
        frames.append(HdrFrame(rgb.data * peak) if peak != 1.0 else rgb)
    return frames


def check_geometry(frames: Sequence[HdrFrame], label: str = 'последовательность'):
    """Все кадры последовательности одного размера"""
    first = frames[0].data.shape
    for i, frame in enumerate(frames):
        if frame.data.shape != first:
            raise DimensionMismatchException(f"{label}: кадр {i} размера {frame.data.shape[:2]}, ожидалось {first[:2]}")


def write_hdr_sequence(directory: PathLike, frames: Sequence[HdrFrame]) -> List[Path]:
    """Запись кадров как frame_00000.hdr, frame_00001.hdr, ..."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for i, frame in enumerate(frames):
        path = directory / FRAME_PATTERN.format(i)
        write_rgbe_file(path, frame)
        written.append(path)
    return written


def write_yuv_sequence(path: PathLike, frames: Sequence[HdrFrame], peak: Optional[float] = None,
                       matrix: Optional[str] = None) -> float:
    """Запись 12-битного YUV; возвращает использованный делитель peak"""
    if peak is None:
        peak = max(frame.max_value for frame in frames)
    if not peak > 0:
        raise ValidationException("Нельзя нормировать полностью чёрную последовательность для YUV")
    matrix = resolve_yuv_matrix(matrix)
    count = write_yuv12_file(path, (rgb_to_yuv(frame, peak=peak, matrix=matrix) for frame in frames))
    logger.info(f"💾 Записано {count} кадров YUV 4:2:0 12 бит ({matrix}) в {path} (peak={peak:g})")
    return float(peak)
