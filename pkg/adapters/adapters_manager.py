from typing import Callable, Dict, Optional, Sequence

from core.core_logger import get_logger
from core.core_exceptions import ConfigurationException
from adapters.adapters_exposure import derive_exposures, me_metric
from adapters.adapters_pu import PuTransfer, default_transfer, load_pu_table, pu_metric
from adapters.adapters_types import AdapterKind, DisplayModel, ExposureSet
from hdrio.hdrio_types import HdrFrame
from metrics.metrics_types import MetricId, MetricResult
from settings import get_setting

logger = get_logger(__name__)


class AdapterManager:
    """Менеджер адаптеров HDR -> LDR метрик"""

    def __init__(self):
        self.settings = {
            'display_peak_luminance': get_setting('DISPLAY_PEAK_LUMINANCE', 2700.0),
            'display_contrast': get_setting('DISPLAY_CONTRAST', 2000.0),
            'display_black_level': get_setting('DISPLAY_BLACK_LEVEL', None),
            'pu_table_file': get_setting('PU_TABLE_FILE', None),
            'me_exposure_count': get_setting('ME_EXPOSURE_COUNT', 5),
            'me_gamma': get_setting('ME_GAMMA', 2.2),
            'me_anchor_percentile': get_setting('ME_ANCHOR_PERCENTILE', 1.0),
        }
        self._transfer: Optional[PuTransfer] = None

    def display_model(self) -> DisplayModel:
        """Модель дисплея из текущих настроек"""
        black = self.settings['display_black_level']
        return DisplayModel(
            peak=float(self.settings['display_peak_luminance']),
            contrast=float(self.settings['display_contrast']),
            black_level=float(black) if black is not None else None,
        )

    def transfer(self) -> PuTransfer:
        """Таблица PU: из файла, если задан, иначе встроенная"""
        if self._transfer is None:
            table_file = self.settings['pu_table_file']
            self._transfer = load_pu_table(table_file) if table_file else default_transfer()
        return self._transfer

    def exposures(self, reference: Sequence[HdrFrame]) -> ExposureSet:
        """Набор экспозиций по опорной последовательности"""
        return derive_exposures(
            reference,
            count=int(self.settings['me_exposure_count']),
            gamma=float(self.settings['me_gamma']),
            percentile=float(self.settings['me_anchor_percentile']),
        )

    def evaluate(self, reference: Sequence[HdrFrame], distorted: Sequence[HdrFrame],
                 metric: MetricId, adapter: AdapterKind, mapper: Callable = map) -> MetricResult:
        """Вычисление пары (метрика, адаптер) на двух последовательностях"""
        if adapter is AdapterKind.PU:
            return pu_metric(reference, distorted, metric, self.display_model(), self.transfer(), mapper)
        if adapter is AdapterKind.ME:
            exposures = self.exposures(reference)
            logger.debug(f"Экспозиции: {[round(e, 3) for e in exposures.exposures]}")
            return me_metric(reference, distorted, metric, exposures, mapper)
        raise ConfigurationException(f"Неизвестный адаптер: {adapter}")

    def parameters(self, adapter: AdapterKind) -> Dict:
        """Параметры адаптера для метаданных отчёта и хэша"""
        if adapter is AdapterKind.PU:
            return {
                'adapter': adapter.value,
                'display': self.display_model().to_dict(),
                'pu_table_file': self.settings['pu_table_file'] or 'builtin',
            }
        return {
            'adapter': adapter.value,
            'count': int(self.settings['me_exposure_count']),
            'gamma': float(self.settings['me_gamma']),
            'anchor_percentile': float(self.settings['me_anchor_percentile']),
        }

    def get_settings(self) -> Dict:
        """Получить текущие настройки"""
        return self.settings.copy()

    def update_settings(self, new_settings: Dict):
        """Обновить настройки"""
        self.settings.update(new_settings)
        if 'pu_table_file' in new_settings:
            self._transfer = None
        logger.info(f"⚙️ Настройки адаптеров обновлены: {new_settings}")
