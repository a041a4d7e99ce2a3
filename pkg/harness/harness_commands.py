"""
Подкоманды hdrqa

Каждая команда получает проверенный RunConfig, пишет результаты и эхо
конфигурации в out_dir и возвращает строки сводки для stdout.
Исключения не перехватываются: коды завершения назначает main.py.

Выходы display-sim на кадр i:
    projector_{i:05d}.png  - сигнал проектора, 8 бит оттенки серого
    lcd_{i:05d}.png        - сигнал LCD, 8 бит RGB
    emitted_{i:05d}.f32    - излучаемая яркость, float32 little-endian, строки сверху вниз
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from PIL import Image

from core.core_logger import get_logger
from core.core_exceptions import ConfigurationException, ScoreSchemaException
from core.core_utils import CoreUtils
from adapters.adapters_manager import AdapterManager
from adapters.adapters_types import AdapterKind
from display.display_pipeline import DisplayPipeline
from distortion.distortion_generators import DistortionGenerator
from distortion.distortion_types import DistortionKind
from harness.harness_config import (
    AnalyzeParams,
    DisplayParams,
    DistortParams,
    ManifestParams,
    MetricParams,
    RunConfig,
    SessionParams,
    write_echo,
)
from harness.harness_pool import FramePool
from harness.harness_sequence import DERIVED_MANIFEST, load_sequence, write_hdr_sequence, write_yuv_sequence
from hdrio.hdrio_color import resolve_yuv_matrix
from hdrio.hdrio_manifest import (
    DatasetManifest,
    LineageModel,
    SequenceManifest,
    SourceFormat,
    load_manifest,
    save_manifest,
    validate_manifest,
)
from metrics.metrics_types import MetricId
from subjective.subjective_io import (
    read_clip_metadata,
    read_objective,
    read_roster,
    read_scores,
    roster_summary,
    write_objective,
    write_table,
)
from subjective.subjective_report import build_report, write_report
from subjective.subjective_screening import screen_outliers
from subjective.subjective_session import make_session_plan
from subjective.subjective_stats import mos

logger = get_logger(__name__)

SCORES_FILE = 'scores.csv'
OBJECTIVE_FILE = 'objective.csv'
SEQUENCE_ROW = 'all'


@dataclass
class CommandResult:
    """Итог выполнения подкоманды"""
    lines: List[str] = field(default_factory=list)
    files: List[Path] = field(default_factory=list)


def _pool(config: RunConfig, description: str) -> FramePool:
    return FramePool(threads=config.threads, description=description)


def cmd_distort(config: RunConfig) -> CommandResult:
    """Искажение последовательности и производный манифест с происхождением"""
    params: DistortParams = config.typed_params()
    out_dir = Path(config.out_dir)
    manifest = load_manifest(params.manifest)
    source = manifest.get(params.sequence)

    generator = DistortionGenerator()
    spec = generator.build_spec(
        params.kind,
        params.kind_parameters(),
        seed=config.seed,
    )
    if spec.kind is DistortionKind.COMPRESSION:
        # до чтения кадров: сжатие выполняется только внешним кодером
        generator.prepare([], spec)
    frames = load_sequence(params.input, source.width, source.height, matrix=params.yuv_matrix)
    context = generator.prepare(frames, spec)

    indexed = list(enumerate(frames))
    distorted = _pool(config, 'искажение').map(
        lambda item: generator.apply_frame(item[1], item[0], spec, context), indexed
    )

    summary = generator.describe(spec, frames[0].width, frames[0].height)
    name = f"{source.name}_{spec.kind.value}"
    result = CommandResult()
    parameters = dict(summary['parameters'])
    if params.output_format == 'yuv12':
        yuv_path = out_dir / f"{name}.yuv"
        parameters['yuv_matrix'] = resolve_yuv_matrix(params.yuv_matrix)
        parameters['yuv_peak'] = write_yuv_sequence(yuv_path, distorted, matrix=parameters['yuv_matrix'])
        result.files.append(yuv_path)
        relative_path, source_format = yuv_path.name, SourceFormat.YUV12
    else:
        result.files.extend(write_hdr_sequence(out_dir / 'frames', distorted))
        relative_path, source_format = 'frames', SourceFormat.RGBE

    derived = SequenceManifest(
        name=name,
        frames=len(distorted),
        fps=source.fps,
        width=frames[0].width,
        height=frames[0].height,
        environment=source.environment,
        motion=source.motion,
        source_format=source_format,
        path=relative_path,
        lineage=LineageModel(
            kind=spec.kind.value,
            parent=source.name,
            seed=spec.seed,
            parameters=parameters,
            modified_pixels_per_frame=summary.get('modified_pixels_per_frame'),
        ),
    )
    manifest_path = out_dir / DERIVED_MANIFEST
    save_manifest(DatasetManifest(name=f"{manifest.name}-derived", sequences=[derived]), manifest_path)
    result.files.append(manifest_path)
    result.files.append(write_echo(config))

    result.lines.append(f"{name}: {len(distorted)} кадров, {spec.kind.value} {CoreUtils.safe_json_dumps(spec.parameters)}")
    if derived.lineage.modified_pixels_per_frame is not None:
        result.lines.append(f"modified_pixels_per_frame: {derived.lineage.modified_pixels_per_frame}")
    logger.info(f"✅ Искажение {spec.kind.value} записано в {out_dir}")
    return result


def _metric_manager(params: MetricParams) -> AdapterManager:
    manager = AdapterManager()
    overrides = {
        'display_peak_luminance': params.peak,
        'display_contrast': params.contrast,
        'me_exposure_count': params.exposures,
        'me_gamma': params.gamma,
        'pu_table_file': params.pu_table,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if overrides:
        manager.update_settings(overrides)
    return manager


def cmd_metric(config: RunConfig) -> CommandResult:
    """Покадровые оценки и оценка последовательности для каждой пары (метрика, адаптер)"""
    params: MetricParams = config.typed_params()
    out_dir = Path(config.out_dir)
    reference = load_sequence(params.reference, params.width, params.height,
                              peak=params.reference_peak, matrix=params.yuv_matrix)
    distorted = load_sequence(params.distorted, params.width, params.height,
                              peak=params.distorted_peak, matrix=params.yuv_matrix)
    manager = _metric_manager(params)
    pool = _pool(config, 'метрика')

    rows: List[Dict] = []
    objective_rows: List[Dict] = []
    result = CommandResult()
    for adapter_name in params.adapters:
        adapter = AdapterKind(adapter_name)
        for metric_name in params.metrics:
            metric = MetricId(metric_name)
            params_hash = CoreUtils.stable_hash({'metric': metric.value, **manager.parameters(adapter)})
            scored = manager.evaluate(reference, distorted, metric, adapter, pool.map)
            for i, score in enumerate(scored.per_frame):
                rows.append({'frame': i, 'metric': metric.value, 'adapter': adapter.value,
                             'score': score, 'params_hash': params_hash})
            rows.append({'frame': SEQUENCE_ROW, 'metric': metric.value, 'adapter': adapter.value,
                         'score': scored.sequence_score, 'params_hash': params_hash})
            result.lines.append(f"{metric.value}/{adapter.value}: {CoreUtils.format_number(scored.sequence_score)}")
            if params.clip_id:
                objective_rows.append({'clip_id': params.clip_id, 'metric': metric.value,
                                       'adapter': adapter.value, 'score': scored.sequence_score})

    scores_path = out_dir / SCORES_FILE
    write_table(scores_path, rows, ['frame', 'metric', 'adapter', 'score', 'params_hash'])
    result.files.append(scores_path)
    if objective_rows:
        objective_path = out_dir / OBJECTIVE_FILE
        write_objective(objective_path, objective_rows)
        result.files.append(objective_path)
    result.files.append(write_echo(config))
    logger.info(f"✅ Метрики записаны в {scores_path} ({len(rows)} строк)")
    return result


def _to_uint8(values: np.ndarray) -> np.ndarray:
    return np.floor(np.clip(values, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def cmd_display_sim(config: RunConfig) -> CommandResult:
    """Симуляция дисплея с двойной модуляцией"""
    params: DisplayParams = config.typed_params()
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    frames = load_sequence(params.input, params.width, params.height,
                           peak=params.yuv_peak, matrix=params.yuv_matrix)

    manager = AdapterManager()
    display_overrides = {k: v for k, v in {
        'display_peak_luminance': params.peak,
        'display_contrast': params.contrast,
    }.items() if v is not None}
    if display_overrides:
        manager.update_settings(display_overrides)
    model = manager.display_model()

    pipeline = DisplayPipeline()
    overrides = {k: v for k, v in {
        'reinhard_key': params.key,
        'psf_size': params.psf_size,
        'psf_sigma': params.psf_sigma,
        'normalization_mode': params.normalization,
    }.items() if v is not None}
    if overrides:
        pipeline.update_settings(overrides)
    run = pipeline.run(frames, model, _pool(config, 'дисплей').map)

    result = CommandResult()
    for i, (signals, emitted) in enumerate(zip(run.signals, run.emitted)):
        projector_path = out_dir / f"projector_{i:05d}.png"
        Image.fromarray(_to_uint8(signals.projector), mode='L').save(projector_path)
        lcd_path = out_dir / f"lcd_{i:05d}.png"
        Image.fromarray(_to_uint8(signals.lcd), mode='RGB').save(lcd_path)
        emitted_path = out_dir / f"emitted_{i:05d}.f32"
        emitted_path.write_bytes(emitted.values.astype('<f4').tobytes())
        result.files.extend([projector_path, lcd_path, emitted_path])

    for s in run.summaries:
        result.lines.append(
            f"frame {s.frame}: clamp_fraction={s.clamp_fraction:.6f} "
            f"emitted_max={s.emitted_max:.1f} rmse={CoreUtils.format_number(s.reconstruction_rmse)}"
        )
    sequence_max = max(s.emitted_max for s in run.summaries)
    result.lines.append(f"emitted_max_sequence={sequence_max:.1f} cd/m2")

    summary_path = out_dir / 'summary.csv'
    write_table(summary_path, [s.to_dict() for s in run.summaries])
    result.files.append(summary_path)
    result.files.append(write_echo(config))
    return result


def _csv_bitrates(path: str) -> Dict[Tuple[str, int], float]:
    try:
        frame = pd.read_csv(path)
    except FileNotFoundError:
        raise ScoreSchemaException(f"Файл не найден: {path}")
    for column in ('sequence', 'qp', 'bitrate_kbps'):
        if column not in frame.columns:
            raise ScoreSchemaException(f"{Path(path).name}: отсутствует обязательный столбец", column=column)
    return {(str(r.sequence), int(r.qp)): float(r.bitrate_kbps) for r in frame.itertuples(index=False)}


def cmd_analyze(config: RunConfig) -> CommandResult:
    """Отбраковка испытуемых, MOS и отчёт о корреляции"""
    params: AnalyzeParams = config.typed_params()
    out_dir = Path(config.out_dir)
    result = CommandResult()

    clips = read_clip_metadata(params.clips)
    table = read_scores(params.scores, clips)
    objective = read_objective(params.objective)

    if params.roster:
        roster = read_roster(params.roster)
        logger.info(f"👥 {roster_summary(roster)}")
        failed = [s for s in roster.loc[~roster['prescreen_passed'], 'subject'] if s in table.subjects]
        if failed:
            logger.info(f"🔍 Не прошли предварительный отбор: {', '.join(failed)}")
            table = table.without_subjects(failed)

    screening = screen_outliers(table)
    if screening.rejected:
        table = table.without_subjects(screening.rejected)
    mos_result = mos(table)

    bitrates: Dict[Tuple[str, int], float] = {}
    if params.manifest:
        bitrates.update(load_manifest(params.manifest).bitrates())
    if params.bitrates:
        bitrates.update(_csv_bitrates(params.bitrates))

    report = build_report(mos_result, objective, clips, fit_linear=params.fit_linear, bitrates=bitrates)

    outliers_path = out_dir / 'outliers.csv'
    write_table(outliers_path, [s.to_dict() for s in screening.subjects],
                ['subject', 'P', 'Q', 'ratio', 'asymmetry', 'rejected'])
    mos_path = out_dir / 'mos.csv'
    write_table(mos_path, [c.to_dict() for c in mos_result.clips])
    result.files.extend([outliers_path, mos_path])
    result.files.extend(write_report(report, out_dir, fit_linear=params.fit_linear))
    result.files.append(write_echo(config))

    result.lines.append(f"{len(screening.rejected)} outliers")
    if screening.rejected:
        result.lines.append(f"rejected: {', '.join(screening.rejected)}")
    result.lines.append(f"{len(mos_result.clips)} clips, {table.scores.shape[0]} subjects")
    return result


def cmd_session_plan(config: RunConfig) -> CommandResult:
    """План сессии двойного стимула"""
    params: SessionParams = config.typed_params()
    out_dir = Path(config.out_dir)
    clips = read_clip_metadata(params.clips)
    known = {c.clip_id for c in clips}
    unknown = [c for c in params.training if c not in known]
    if unknown:
        raise ConfigurationException(f"Тренировочный клип отсутствует в метаданных: {unknown[0]}")

    plan = make_session_plan([c.clip_id for c in clips], params.dummy_count, config.seed, params.training)
    plan_path = out_dir / 'session_plan.csv'
    write_table(plan_path, [e.to_dict() for e in plan.events],
                ['kind', 'duration', 'clip_id', 'discard', 'training'])

    result = CommandResult(files=[plan_path, write_echo(config)])
    result.lines.append(f"{len(plan.events)} events, {plan.total_duration:.0f} s")
    return result


def cmd_manifest_validate(config: RunConfig) -> CommandResult:
    """Проверка манифеста набора данных"""
    params: ManifestParams = config.typed_params()
    lines = validate_manifest(params.path)
    return CommandResult(lines=lines + [f"OK: {len(lines)} sequences"], files=[write_echo(config)])


COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    'distort': cmd_distort,
    'metric': cmd_metric,
    'display-sim': cmd_display_sim,
    'analyze': cmd_analyze,
    'session-plan': cmd_session_plan,
    'manifest-validate': cmd_manifest_validate,
}


def run_command(config: RunConfig) -> CommandResult:
    """Запуск подкоманды по имени из конфигурации"""
    handler: Optional[Callable] = COMMANDS.get(config.command)
    if handler is None:
        raise ConfigurationException(f"Неизвестная команда: {config.command}")
    logger.info(f"🔄 Запуск {config.command} (seed={config.seed}, потоков={config.threads})")
    return handler(config)
