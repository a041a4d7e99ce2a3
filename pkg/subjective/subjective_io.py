"""
Чтение и запись CSV: оценки испытуемых, метаданные клипов, объективные оценки, список испытуемых
"""
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd

from core.core_logger import get_logger
from core.core_exceptions import ScoreSchemaException
from subjective.subjective_types import ClipInfo, ImpairmentCategory, ScoreTable, SCORE_MAX, SCORE_MIN

logger = get_logger(__name__)

PathLike = Union[str, Path]

CLIP_COLUMNS = ['clip_id', 'sequence', 'impairment', 'category', 'qp', 'bitrate_kbps']
OBJECTIVE_COLUMNS = ['clip_id', 'metric', 'adapter', 'score']


def _read_csv(path: PathLike) -> pd.DataFrame:
    path = Path(path)
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except FileNotFoundError:
        raise ScoreSchemaException(f"Файл не найден: {path}")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ScoreSchemaException(f"Ошибка разбора CSV {path}: {e}")


def _require_columns(frame: pd.DataFrame, columns: List[str], path: PathLike):
    for column in columns:
        if column not in frame.columns:
            raise ScoreSchemaException(f"{Path(path).name}: отсутствует обязательный столбец", column=column)


def _optional_number(value: str, cast, row: int, column: str):
    if value == '':
        return None
    try:
        return cast(value)
    except ValueError:
        raise ScoreSchemaException(f"Некорректное число '{value}'", row=row, column=column)


def read_clip_metadata(path: PathLike) -> List[ClipInfo]:
    """Метаданные клипов: clip_id, sequence, impairment, category, qp, bitrate_kbps"""
    frame = _read_csv(path)
    _require_columns(frame, ['clip_id', 'sequence', 'category'], path)

    clips = []
    seen = set()
    for index, record in frame.iterrows():
        row = int(index) + 1
        clip_id = record['clip_id'].strip()
        if not clip_id:
            raise ScoreSchemaException("Пустой идентификатор клипа", row=row, column='clip_id')
        if clip_id in seen:
            raise ScoreSchemaException(f"Повторяющийся клип {clip_id}", row=row, column='clip_id')
        seen.add(clip_id)
        try:
            category = ImpairmentCategory(record['category'].strip())
        except ValueError:
            raise ScoreSchemaException(f"Неизвестная категория '{record['category']}'", row=row, column='category')
        clips.append(ClipInfo(
            clip_id=clip_id,
            sequence=record['sequence'].strip(),
            category=category,
            impairment=record.get('impairment', '').strip(),
            qp=_optional_number(record.get('qp', ''), int, row, 'qp'),
            bitrate_kbps=_optional_number(record.get('bitrate_kbps', ''), float, row, 'bitrate_kbps'),
        ))
    return clips


def read_scores(path: PathLike, clips: List[ClipInfo]) -> ScoreTable:
    """Оценки: столбец subject и по столбцу на клип, одна строка на испытуемого"""
    frame = _read_csv(path)
    _require_columns(frame, ['subject'], path)

    known = {c.clip_id: c for c in clips}
    score_columns = [c for c in frame.columns if c != 'subject']
    for column in score_columns:
        if column not in known:
            raise ScoreSchemaException(f"Клип {column} отсутствует в метаданных", column=column)

    ordered = [c for c in clips if c.clip_id in score_columns]
    scores = np.zeros((len(frame), len(ordered)), dtype=np.int64)
    subjects = []
    for index, record in frame.iterrows():
        row = int(index) + 1
        subject = record['subject'].strip()
        if not subject:
            raise ScoreSchemaException("Пустой идентификатор испытуемого", row=row, column='subject')
        subjects.append(subject)
        for j, clip in enumerate(ordered):
            cell = record[clip.clip_id].strip()
            if cell == '':
                raise ScoreSchemaException("Пропущенная оценка", row=row, column=clip.clip_id)
            try:
                value = float(cell)
            except ValueError:
                raise ScoreSchemaException(f"Нечисловая оценка '{cell}'", row=row, column=clip.clip_id)
            if not np.isfinite(value):
                raise ScoreSchemaException(f"Нечисловая оценка '{cell}'", row=row, column=clip.clip_id)
            if value != int(value):
                raise ScoreSchemaException(f"Оценка должна быть целой: {cell}", row=row, column=clip.clip_id)
            if not SCORE_MIN <= value <= SCORE_MAX:
                raise ScoreSchemaException(
                    f"Оценка {cell} вне диапазона [{SCORE_MIN}, {SCORE_MAX}]", row=row, column=clip.clip_id
                )
            scores[index, j] = int(value)

    if len(set(subjects)) != len(subjects):
        raise ScoreSchemaException("Повторяющиеся идентификаторы испытуемых", column='subject')
    return ScoreTable(subjects, ordered, scores)


def read_objective(path: PathLike) -> Dict[str, Dict[str, float]]:
    """Объективные оценки в длинном формате -> {metric/adapter: {clip_id: score}}"""
    frame = _read_csv(path)
    _require_columns(frame, OBJECTIVE_COLUMNS, path)

    result: Dict[str, Dict[str, float]] = {}
    for index, record in frame.iterrows():
        row = int(index) + 1
        key = f"{record['metric'].strip()}/{record['adapter'].strip()}"
        clip_id = record['clip_id'].strip()
        score = _optional_number(record['score'].strip(), float, row, 'score')
        if score is None or not np.isfinite(score):
            raise ScoreSchemaException("Отсутствует объективная оценка", row=row, column='score')
        per_clip = result.setdefault(key, {})
        if clip_id in per_clip:
            raise ScoreSchemaException(f"Повторная оценка {key} для клипа {clip_id}", row=row, column='clip_id')
        per_clip[clip_id] = score
    return result


def read_roster(path: PathLike) -> pd.DataFrame:
    """Список испытуемых с результатами предварительного отбора"""
    frame = _read_csv(path)
    _require_columns(frame, ['subject', 'prescreen_passed'], path)
    passed = frame['prescreen_passed'].str.strip().str.lower()
    invalid = ~passed.isin(['true', 'false', '1', '0', 'yes', 'no'])
    if invalid.any():
        row = int(np.flatnonzero(invalid.to_numpy())[0]) + 1
        raise ScoreSchemaException("prescreen_passed должен быть логическим", row=row, column='prescreen_passed')
    frame['prescreen_passed'] = passed.isin(['true', '1', 'yes'])
    frame['subject'] = frame['subject'].str.strip()
    if 'age' in frame.columns:
        frame['age'] = pd.to_numeric(frame['age'], errors='coerce')
    return frame


def roster_summary(roster: pd.DataFrame) -> str:
    """Строка сводки по испытуемым: число, пол, возраст"""
    parts = [f"{len(roster)} испытуемых"]
    if 'sex' in roster.columns:
        counts = roster['sex'].str.strip().str.upper().value_counts()
        parts.append(', '.join(f"{k}: {v}" for k, v in sorted(counts.items())))
    if 'age' in roster.columns and roster['age'].notna().any():
        parts.append(f"возраст {int(roster['age'].min())}-{int(roster['age'].max())}")
    parts.append(f"прошли отбор: {int(roster['prescreen_passed'].sum())}")
    return '; '.join(parts)


def write_objective(path: PathLike, rows: List[Dict], append: bool = False):
    """Запись объективных оценок в длинном формате"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(rows, columns=OBJECTIVE_COLUMNS)
    header = not (append and path.exists())
    frame.to_csv(path, index=False, mode='a' if append else 'w', header=header, float_format='%.10g')


def write_table(path: PathLike, rows: List[Dict], columns: Optional[List[str]] = None):
    """Запись списка словарей в CSV"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=columns).to_csv(path, index=False, float_format='%.10g')
