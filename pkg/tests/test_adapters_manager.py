import pytest

from adapters.adapters_manager import AdapterManager
from adapters.adapters_pu import PuTransfer
from adapters.adapters_types import AdapterKind
from distortion.distortion_generators import add_awgn, gaussian_lowpass, salt_pepper
from distortion.distortion_random import frame_generator
from metrics.metrics_types import MetricId
from tests.conftest import make_frame

PAIRS = [(adapter, metric) for adapter in AdapterKind for metric in MetricId]


@pytest.fixture(scope='module')
def textured_frame():
    return make_frame(64, 64, seed=3)


def _sweep(reference, distorted, metric, adapter):
    manager = AdapterManager()
    return [manager.evaluate([reference], [d], metric, adapter).sequence_score for d in distorted]


def _non_increasing(scores):
    return all(b <= a for a, b in zip(scores, scores[1:]))


def _decreasing(scores):
    return all(b < a for a, b in zip(scores, scores[1:]))


@pytest.mark.parametrize('adapter,metric', PAIRS)
def test_noise_degrades_monotonically(textured_frame, adapter, metric):
    noisy = [add_awgn(textured_frame, sigma, frame_generator(11)) for sigma in (0.001, 0.002, 0.004, 0.008)]
    scores = _sweep(textured_frame, noisy, metric, adapter)
    assert _non_increasing(scores), scores
    if metric is MetricId.PSNR:
        assert _decreasing(scores), scores


@pytest.mark.parametrize('adapter,metric', PAIRS)
def test_blur_degrades_monotonically(textured_frame, adapter, metric):
    blurred = [gaussian_lowpass(textured_frame, 8, sigma) for sigma in (1.0, 2.0, 4.0, 8.0)]
    scores = _sweep(textured_frame, blurred, metric, adapter)
    assert _non_increasing(scores), scores
    if adapter is AdapterKind.PU and metric is MetricId.PSNR:
        assert _decreasing(scores), scores


def test_salt_pepper_lowers_me_psnr(textured_frame):
    corrupted = [salt_pepper(textured_frame, fraction, frame_generator(7)) for fraction in (0.005, 0.01, 0.02, 0.04)]
    scores = _sweep(textured_frame, corrupted, MetricId.PSNR, AdapterKind.ME)
    assert _decreasing(scores), scores


def test_manager_settings_and_parameters(tmp_path):
    manager = AdapterManager()
    manager.update_settings({'display_peak_luminance': 1000.0, 'me_exposure_count': 3})
    assert manager.display_model().peak == 1000.0
    assert manager.parameters(AdapterKind.ME)['count'] == 3
    assert manager.parameters(AdapterKind.PU)['pu_table_file'] == 'builtin'

    path = tmp_path / 'pu.txt'
    path.write_text('-5 0\n8 1000\n', encoding='utf-8')
    manager.update_settings({'pu_table_file': str(path)})
    assert isinstance(manager.transfer(), PuTransfer)
    assert manager.transfer().values[-1] == 1000.0
