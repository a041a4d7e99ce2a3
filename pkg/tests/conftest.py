import numpy as np
import pytest

from hdrio.hdrio_types import HdrFrame


def make_frame(height: int, width: int, seed: int = 0, peak: float = 4.0) -> HdrFrame:
    """Гладкий синтетический HDR кадр с текстурой"""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width]
    base = 0.05 + peak * (0.5 + 0.5 * np.sin(xx / 5.0) * np.cos(yy / 7.0))
    rgb = np.stack([base * 1.0, base * 0.8, base * 0.6], axis=2)
    rgb *= 1.0 + 0.2 * rng.random((height, width, 1))
    return HdrFrame(rgb)


def make_sequence(count: int, height: int, width: int, seed: int = 0) -> list:
    return [make_frame(height, width, seed=seed + i) for i in range(count)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def hdr_frame():
    return make_frame(24, 32)


@pytest.fixture
def hdr_sequence():
    return make_sequence(3, 32, 32)
