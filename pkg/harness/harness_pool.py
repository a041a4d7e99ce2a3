"""
Пул потоков для покадровой обработки

Результаты всегда возвращаются в порядке входных кадров, поэтому
выходные файлы не зависят от числа потоков.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional

from tqdm import tqdm

from core.core_logger import get_logger
from core.core_exceptions import ConfigurationException
from settings import get_setting

logger = get_logger(__name__)


class FramePool:
    """Упорядоченный map по кадрам с индикатором прогресса"""

    def __init__(self, threads: Optional[int] = None, progress: bool = True, description: str = 'кадры'):
        if threads is None:
            threads = get_setting('HDRQA_THREADS', 1)
        threads = int(threads)
        if threads < 1:
            raise ConfigurationException(f"Число потоков должно быть >= 1: {threads}")
        self.threads = threads
        self.progress = progress
        self.description = description

    def map(self, func: Callable, items: Iterable) -> List:
        """Применение func к каждому элементу; порядок результатов совпадает с порядком входа"""
        items = list(items)
        bar = tqdm(total=len(items), desc=self.description, disable=not self.progress, leave=False)
        try:
            if self.threads == 1 or len(items) < 2:
                results = []
                for item in items:
                    results.append(func(item))
                    bar.update(1)
                return results

            results: List = [None] * len(items)
            with ThreadPoolExecutor(max_workers=self.threads) as executor:
                futures = [executor.submit(func, item) for item in items]
                for index, future in enumerate(futures):
                    results[index] = future.result()
                    bar.update(1)
            return results
        finally:
            bar.close()
