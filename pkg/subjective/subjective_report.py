"""
Отчёт о корреляции объективных метрик с MOS

Три группы столбцов: (a) искажения без сжатия, (b) сжатие, (c) все клипы.
Ячейка, для которой корреляция не определена, выводится как 'n/a'.
"""
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import matplotlib
matplotlib.use('Agg')
matplotlib.rcParams['svg.hashsalt'] = 'hdrqa'
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from core.core_logger import get_logger  # noqa: E402
from core.core_exceptions import ScoreSchemaException, UndefinedMetricException, ValidationException  # noqa: E402
from core.core_utils import CoreUtils  # noqa: E402
from subjective.subjective_stats import fitted_rmse, pearson, rmse, spearman  # noqa: E402
from subjective.subjective_types import (  # noqa: E402
    ClipInfo,
    CorrelationCell,
    CorrelationReport,
    ImpairmentCategory,
    MosResult,
)

logger = get_logger(__name__)

CATEGORIES: List[Tuple[str, str]] = [
    ('non_compression', '(a) Impairments'),
    ('compression', '(b) Compression'),
    ('all', '(c) All'),
]

METRIC_LABELS: Dict[str, str] = {
    'psnr/pu': 'PSNR (PU encoding)',
    'ssim/pu': 'SSIM (PU encoding)',
    'vif/pu': 'VIF (PU encoding)',
    'psnr/me': 'PSNR (MultiExposure)',
    'ssim/me': 'SSIM (MultiExposure)',
    'vif/me': 'VIF (MultiExposure)',
    'hdrvdp2/external': 'HDR-VDP-2',
}


def metric_label(key: str) -> str:
    """Подпись метрики для отчёта"""
    return METRIC_LABELS.get(key, key)


def _category_clips(clips: List[ClipInfo], category: str) -> List[ClipInfo]:
    if category == 'all':
        return list(clips)
    return [c for c in clips if c.category is ImpairmentCategory(category)]


def _safe(func, *args) -> Optional[float]:
    try:
        return func(*args)
    except (UndefinedMetricException, ValidationException):
        return None


def build_report(mos_result: MosResult, objective: Dict[str, Dict[str, float]], clips: List[ClipInfo],
                 fit_linear: bool = False, bitrates: Optional[Dict[Tuple[str, int], float]] = None) -> CorrelationReport:
    """Корреляции PCC/SCC/RMSE по трём категориям, серии для диаграмм рассеяния и MOS от битрейта"""
    mos_by_clip = mos_result.by_clip()
    clip_ids = set(mos_by_clip)
    info = {c.clip_id: c for c in clips}

    for clip_id in clip_ids:
        if clip_id not in info:
            raise ScoreSchemaException(f"Клип {clip_id} отсутствует в метаданных", column='clip_id')
    for key, scores in objective.items():
        for clip_id in scores:
            if clip_id not in clip_ids:
                raise ScoreSchemaException(f"Клип {clip_id} из объективных оценок ({key}) не имеет MOS", column='clip_id')
        missing = sorted(clip_ids - set(scores))
        if missing:
            raise ScoreSchemaException(f"Для клипа {missing[0]} нет объективной оценки {key}", column='clip_id')

    rated = [info[c.clip_id] for c in mos_result.clips]
    ordered_keys = [k for k in METRIC_LABELS if k in objective] + sorted(k for k in objective if k not in METRIC_LABELS)
    report = CorrelationReport(metrics=ordered_keys)

    for key in ordered_keys:
        for category, _ in CATEGORIES:
            members = _category_clips(rated, category)
            x = [objective[key][c.clip_id] for c in members]
            y = [mos_by_clip[c.clip_id].mos for c in members]
            cell = CorrelationCell(
                metric=key,
                category=category,
                pearson=_safe(pearson, x, y),
                spearman=_safe(spearman, x, y),
                rmse=_safe(rmse, x, y),
                n=len(members),
                fitted_rmse=_safe(fitted_rmse, x, y) if fit_linear else None,
            )
            if cell.pearson is None or cell.spearman is None:
                logger.warning(f"⚠️ Корреляция {metric_label(key)} / {category} не определена (n={cell.n})")
            report.cells.append(cell)
            report.scatter[f"{key}:{category}"] = [
                {
                    'clip_id': c.clip_id,
                    'objective': objective[key][c.clip_id],
                    'mos': mos_by_clip[c.clip_id].mos,
                    'ci95': mos_by_clip[c.clip_id].ci95,
                }
                for c in members
            ]

    for clip in rated:
        if clip.category is not ImpairmentCategory.COMPRESSION:
            continue
        bitrate = clip.bitrate_kbps
        if bitrate is None and bitrates and clip.qp is not None:
            bitrate = bitrates.get((clip.sequence, clip.qp))
        if bitrate is None:
            logger.warning(f"⚠️ Нет битрейта для клипа {clip.clip_id}, пропущен в серии MOS/битрейт")
            continue
        report.bitrate_series.setdefault(clip.sequence, []).append({
            'clip_id': clip.clip_id,
            'qp': clip.qp,
            'bitrate_kbps': bitrate,
            'mos': mos_by_clip[clip.clip_id].mos,
            'ci95': mos_by_clip[clip.clip_id].ci95,
        })
    for series in report.bitrate_series.values():
        series.sort(key=lambda point: point['bitrate_kbps'])

    return report


def report_table(report: CorrelationReport, fit_linear: bool = False) -> pd.DataFrame:
    """Таблица отчёта: строка на метрику, PCC/SCC/RMSE по категориям (4 знака, 'n/a')"""
    rows = []
    for key in report.metrics:
        row = {'metric': metric_label(key)}
        for category, title in CATEGORIES:
            cell = report.cell(key, category)
            row[f"{title} PCC"] = CoreUtils.format_number(cell.pearson)
            row[f"{title} SCC"] = CoreUtils.format_number(cell.spearman)
            row[f"{title} RMSE"] = CoreUtils.format_number(cell.rmse)
            if fit_linear:
                row[f"{title} RMSE (fitted)"] = CoreUtils.format_number(cell.fitted_rmse)
        rows.append(row)
    return pd.DataFrame(rows)


def _safe_name(text: str) -> str:
    return ''.join(ch if ch.isalnum() or ch in '-_' else '_' for ch in text)


def _scatter_svg(path: Path, points: List[Dict], title: str, xlabel: str):
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.errorbar(
        [p['objective'] for p in points], [p['mos'] for p in points],
        yerr=[p['ci95'] for p in points], fmt='o', capsize=3,
    )
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel('MOS')
    fig.tight_layout()
    fig.savefig(path, format='svg', metadata={'Date': None})
    plt.close(fig)


def _bitrate_svg(path: Path, series: Dict[str, List[Dict]]):
    fig, ax = plt.subplots(figsize=(5, 4))
    for sequence, points in sorted(series.items()):
        ax.errorbar(
            [p['bitrate_kbps'] for p in points], [p['mos'] for p in points],
            yerr=[p['ci95'] for p in points], marker='o', capsize=3, label=sequence,
        )
    ax.set_xlabel('Bitrate (kb/s)')
    ax.set_ylabel('MOS')
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format='svg', metadata={'Date': None})
    plt.close(fig)


def write_report(report: CorrelationReport, out_dir: Union[str, Path], fit_linear: bool = False) -> List[Path]:
    """Запись таблицы корреляций, серий и SVG диаграмм; возвращает список файлов"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    table_path = out_dir / 'correlation.csv'
    report_table(report, fit_linear).to_csv(table_path, index=False)
    written.append(table_path)

    raw_path = out_dir / 'correlation_raw.csv'
    pd.DataFrame([c.to_dict() for c in report.cells]).to_csv(raw_path, index=False, float_format='%.10g')
    written.append(raw_path)

    for series_key, points in report.scatter.items():
        if not points:
            continue
        key, category = series_key.rsplit(':', 1)
        stem = f"scatter_{_safe_name(key)}_{category}"
        csv_path = out_dir / f"{stem}.csv"
        pd.DataFrame(points).to_csv(csv_path, index=False, float_format='%.10g')
        svg_path = out_dir / f"{stem}.svg"
        _scatter_svg(svg_path, points, f"{metric_label(key)} / {category}", metric_label(key))
        written.extend([csv_path, svg_path])

    if report.bitrate_series:
        for sequence, points in sorted(report.bitrate_series.items()):
            csv_path = out_dir / f"mos_bitrate_{_safe_name(sequence)}.csv"
            pd.DataFrame(points).to_csv(csv_path, index=False, float_format='%.10g')
            written.append(csv_path)
        svg_path = out_dir / 'mos_bitrate.svg'
        _bitrate_svg(svg_path, report.bitrate_series)
        written.append(svg_path)

    logger.info(f"✅ Отчёт записан в {out_dir}: {len(written)} файлов")
    return written
