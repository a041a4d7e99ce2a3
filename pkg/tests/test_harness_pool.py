import time

import pytest

from core.core_exceptions import ConfigurationException
from harness.harness_pool import FramePool


def _slow_square(value):
    # поздние элементы завершаются раньше
    time.sleep(0.002 * (5 - value))
    return value * value


@pytest.mark.parametrize('threads', [1, 4])
def test_results_keep_input_order(threads):
    pool = FramePool(threads=threads, progress=False)
    assert pool.map(_slow_square, range(5)) == [0, 1, 4, 9, 16]


def test_empty_input():
    assert FramePool(threads=3, progress=False).map(_slow_square, []) == []


def test_threads_from_settings(monkeypatch):
    monkeypatch.setenv('HDRQA_THREADS', '3')
    assert FramePool(progress=False).threads == 3


def test_invalid_thread_count():
    with pytest.raises(ConfigurationException):
        FramePool(threads=0)


def test_worker_errors_propagate():
    def fail(value):
        raise ValueError(value)

    with pytest.raises(ValueError):
        FramePool(threads=2, progress=False).map(fail, [1, 2])
