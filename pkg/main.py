"""
hdrqa - инструменты оценки качества HDR видео

Коды завершения: 0 - успех, 1 - ошибка использования или конфигурации,
2 - ошибка данных/схемы, 3 - численная ошибка (например, неопределённая VIF).
"""
import argparse
import sys
from typing import Any, Dict, List, Optional

from core.core_logger import get_logger, logger_instance
from core.core_exceptions import ConfigurationException, HdrqaException
from harness.harness_commands import run_command
from harness.harness_config import RunConfig, apply_echo_settings, build_config, load_echo
from hdrio.hdrio_color import YUV_MATRICES
from settings import get_setting

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1

# Флаги, не относящиеся к параметрам подкоманды
GLOBAL_KEYS = {'seed', 'threads', 'out_dir', 'log_level', 'from_echo', 'command', 'manifest_command'}


def _global_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--seed', type=int, default=argparse.SUPPRESS, help='зерно генератора (по умолчанию DEFAULT_SEED)')
    parent.add_argument('--threads', type=int, default=argparse.SUPPRESS, help='число потоков (по умолчанию HDRQA_THREADS)')
    parent.add_argument('--out-dir', default=argparse.SUPPRESS, help='каталог результатов')
    parent.add_argument('--log-level', default=argparse.SUPPRESS, choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    parent.add_argument('--from-echo', default=argparse.SUPPRESS, help='повтор запуска по run_config.yaml')
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Парсер командной строки hdrqa"""
    common = _global_flags()
    parser = argparse.ArgumentParser(prog='hdrqa', description='Оценка качества HDR видео', parents=[common])
    sub = parser.add_subparsers(dest='command')

    distort = sub.add_parser('distort', parents=[common], help='искажение последовательности')
    distort.add_argument('--input', help='каталог кадров .hdr, файл .hdr или .yuv')
    distort.add_argument('--manifest', help='манифест набора данных (YAML)')
    distort.add_argument('--sequence', help='имя исходной последовательности в манифесте')
    distort.add_argument('--kind', choices=['awgn', 'intensity_shift', 'salt_pepper', 'gaussian_lowpass', 'compression'])
    distort.add_argument('--sigma', type=float, help='СКО шума AWGN')
    distort.add_argument('--fraction', type=float, help='доля пикселей (salt_pepper) или сдвига (intensity_shift)')
    distort.add_argument('--size', type=int, help='размер ядра фильтра')
    distort.add_argument('--lpf-sigma', type=float, help='СКО ядра фильтра')
    distort.add_argument('--qp', type=int, help='QP сжатия')
    distort.add_argument('--output-format', choices=['hdr', 'yuv12'])
    distort.add_argument('--yuv-matrix', choices=list(YUV_MATRICES), help='матрица YUV (по умолчанию YUV_MATRIX)')

    metric = sub.add_parser('metric', parents=[common], help='объективные метрики')
    metric.add_argument('--reference', help='опорная последовательность')
    metric.add_argument('--distorted', help='искажённая последовательность')
    metric.add_argument('--metric', dest='metrics', action='append', choices=['psnr', 'ssim', 'vif'])
    metric.add_argument('--adapter', dest='adapters', action='append', choices=['pu', 'me'])
    metric.add_argument('--clip-id', help='идентификатор клипа для objective.csv')
    metric.add_argument('--width', type=int)
    metric.add_argument('--height', type=int)
    metric.add_argument('--peak', type=float, help='пиковая яркость дисплея, кд/м²')
    metric.add_argument('--contrast', type=float, help='контраст дисплея')
    metric.add_argument('--exposures', type=int, help='число экспозиций ME')
    metric.add_argument('--gamma', type=float, help='гамма ME')
    metric.add_argument('--pu-table', help='таблица PU (log10 L, PU)')
    metric.add_argument('--reference-peak', type=float, help='делитель peak опорного .yuv (по умолчанию из manifest.yaml)')
    metric.add_argument('--distorted-peak', type=float, help='делитель peak искажённого .yuv (по умолчанию из manifest.yaml)')
    metric.add_argument('--yuv-matrix', choices=list(YUV_MATRICES))

    display = sub.add_parser('display-sim', parents=[common], help='симуляция дисплея с двойной модуляцией')
    display.add_argument('--input', help='входная HDR последовательность')
    display.add_argument('--width', type=int)
    display.add_argument('--height', type=int)
    display.add_argument('--peak', type=float)
    display.add_argument('--contrast', type=float)
    display.add_argument('--key', type=float, help='ключ оператора Рейнхарда')
    display.add_argument('--psf-size', type=int)
    display.add_argument('--psf-sigma', type=float)
    display.add_argument('--normalization', choices=['sequence', 'frame'])
    display.add_argument('--yuv-peak', type=float, help='делитель peak входного .yuv')
    display.add_argument('--yuv-matrix', choices=list(YUV_MATRICES))

    analyze = sub.add_parser('analyze', parents=[common], help='анализ субъективных оценок')
    analyze.add_argument('--scores', help='CSV оценок испытуемых')
    analyze.add_argument('--clips', help='CSV метаданных клипов')
    analyze.add_argument('--objective', help='CSV объективных оценок')
    analyze.add_argument('--roster', help='CSV списка испытуемых')
    analyze.add_argument('--manifest', help='манифест с битрейтами')
    analyze.add_argument('--bitrates', help='CSV битрейтов (sequence, qp, bitrate_kbps)')
    analyze.add_argument('--fit-linear', action='store_true', default=None, help='добавить RMSE после линейной подгонки')

    session = sub.add_parser('session-plan', parents=[common], help='план сессии двойного стимула')
    session.add_argument('--clips', help='CSV метаданных клипов')
    session.add_argument('--dummy-count', type=int)
    session.add_argument('--training', action='append', help='тренировочный клип')

    manifest = sub.add_parser('manifest', parents=[common], help='операции с манифестом')
    manifest_sub = manifest.add_subparsers(dest='manifest_command')
    validate = manifest_sub.add_parser('validate', parents=[common], help='проверка манифеста')
    validate.add_argument('path', help='YAML манифест')

    return parser


def _command_name(args: argparse.Namespace) -> Optional[str]:
    if args.command == 'manifest':
        return 'manifest-validate' if getattr(args, 'manifest_command', None) == 'validate' else None
    return args.command


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """RunConfig из аргументов командной строки или из эха"""
    flags: Dict[str, Any] = vars(args)
    if 'from_echo' in flags:
        config = load_echo(flags['from_echo'])
        apply_echo_settings(config)
        overrides = {k: flags[k] for k in ('out_dir', 'threads', 'log_level') if k in flags}
        return config.model_copy(update=overrides) if overrides else config

    command = _command_name(args)
    if command is None:
        raise ConfigurationException("Не указана подкоманда")
    params = {k: v for k, v in flags.items() if k not in GLOBAL_KEYS}
    return build_config(
        command,
        params,
        seed=flags.get('seed', get_setting('DEFAULT_SEED', 0)),
        threads=flags.get('threads', get_setting('HDRQA_THREADS', 1)),
        out_dir=flags.get('out_dir', 'out'),
        log_level=flags.get('log_level', str(get_setting('LOG_LEVEL', 'INFO'))),
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Точка входа; возвращает код завершения"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        config = config_from_args(args)
        logger_instance.set_level(config.log_level)
        result = run_command(config)
    except HdrqaException as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return e.exit_code

    for line in result.lines:
        print(line)
    logger.info(f"✅ {config.command} завершена, файлов: {len(result.files)}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
