import numpy as np
import pytest

from core.core_exceptions import ValidationException
from adapters.adapters_types import DisplayModel
from display.display_pipeline import (
    DisplayPipeline,
    emitted_relative,
    reconstruction_rmse,
    reinhard_tonemap,
    simulate_emitted,
    split_signal,
)
from hdrio.hdrio_color import luminance
from hdrio.hdrio_types import HdrFrame, LumaUnits
from tests.conftest import make_frame, make_sequence


def test_projector_is_square_root_of_luma(hdr_frame):
    signals = split_signal(hdr_frame)
    np.testing.assert_allclose(signals.projector ** 2, signals.luma, rtol=1e-15, atol=0)


def test_quarter_luma_drives_projector_at_half():
    frame = HdrFrame.filled(4, 4, (1.0, 1.0, 1.0))
    signals = split_signal(frame, scale=4.0)
    assert signals.luma[0, 0] == pytest.approx(0.25)
    assert signals.projector[0, 0] == pytest.approx(0.5)


def test_lcd_times_lightfield_reproduces_tonemap(hdr_frame):
    signals = split_signal(hdr_frame)
    unclamped = ~signals.clamped
    product = signals.lcd * signals.lightfield[..., None]
    np.testing.assert_allclose(product[unclamped], signals.rgb_lcd[unclamped], atol=1e-6)


def test_constant_gray_has_no_clamping():
    signals = split_signal(HdrFrame.filled(16, 16, (0.4, 0.4, 0.4)))
    assert signals.clamp_fraction == 0.0


def test_black_pixels_are_not_clamped():
    data = np.zeros((32, 32, 3))
    data[:4, :4] = 1.0
    signals = split_signal(HdrFrame(data))
    assert not signals.clamped[-1, -1].any()


def test_tonemap_range(hdr_frame):
    mapped = reinhard_tonemap(hdr_frame)
    assert mapped.min() >= 0.0 and mapped.max() <= 1.0
    assert np.all(reinhard_tonemap(HdrFrame.filled(2, 2, (0, 0, 0))) == 0)


def test_emitted_peak_and_black_level():
    model = DisplayModel()
    signals = [split_signal(f) for f in make_sequence(2, 16, 16)]
    emitted = simulate_emitted(signals, model)
    assert max(e.values.max() for e in emitted) == pytest.approx(2700.0, rel=1e-12)
    assert min(e.values.min() for e in emitted) >= model.black_level
    assert emitted[0].units is LumaUnits.ABSOLUTE


def test_emitted_black_sequence():
    model = DisplayModel()
    data = np.zeros((16, 16, 3))
    data[0, 0] = 1.0
    signals = split_signal(HdrFrame(data))
    signals.lcd[...] = 0.0
    emitted = simulate_emitted([signals], model)
    assert np.all(emitted[0].values == model.black_level)


def test_reconstruction_error_is_finite(hdr_frame):
    model = DisplayModel()
    signals = split_signal(hdr_frame)
    emitted = simulate_emitted([signals], model)[0]
    assert emitted_relative(signals).shape == signals.shape
    assert reconstruction_rmse(signals, emitted, model) >= 0.0


def test_black_frame_without_scale():
    with pytest.raises(ValidationException):
        split_signal(HdrFrame.filled(4, 4, (0, 0, 0)))


def test_pipeline_run(hdr_sequence):
    run = DisplayPipeline().run(hdr_sequence, DisplayModel())
    assert len(run.summaries) == len(hdr_sequence)
    assert max(s.emitted_max for s in run.summaries) == pytest.approx(2700.0, rel=1e-12)
    assert all(0.0 <= s.clamp_fraction <= 1.0 for s in run.summaries)


def test_pipeline_is_deterministic(hdr_sequence):
    first = DisplayPipeline().run(hdr_sequence, DisplayModel())
    second = DisplayPipeline().run(hdr_sequence, DisplayModel())
    for a, b in zip(first.emitted, second.emitted):
        np.testing.assert_array_equal(a.values, b.values)


def test_sequence_normalization_keeps_relative_levels():
    frames = [HdrFrame.filled(16, 16, (1.0, 1.0, 1.0)), HdrFrame.filled(16, 16, (0.25, 0.25, 0.25))]
    run = DisplayPipeline().run(frames, DisplayModel())
    assert run.signals[1].luma.max() == pytest.approx(0.25)

    pipeline = DisplayPipeline()
    pipeline.update_settings({'normalization_mode': 'frame'})
    per_frame = pipeline.run(frames, DisplayModel())
    assert per_frame.signals[1].luma.max() == pytest.approx(1.0)


def test_pipeline_rejects_unknown_mode(hdr_sequence):
    pipeline = DisplayPipeline()
    pipeline.update_settings({'normalization_mode': 'scene'})
    with pytest.raises(ValidationException):
        pipeline.run(hdr_sequence, DisplayModel())


def _horizontal_gradient(height=16, width=64, low=1.0, high=4.0):
    ramp = np.linspace(low, high, width)
    return HdrFrame(np.repeat(np.tile(ramp, (height, 1))[..., None], 3, axis=2))


def test_unit_psf_emits_tonemapped_luminance():
    signals = split_signal(make_frame(32, 32), psf_size=1)
    np.testing.assert_array_equal(signals.lightfield, signals.projector)

    unclamped = ~signals.clamped.any(axis=2)
    assert unclamped.any()
    target = luminance(signals.rgb_lcd)
    np.testing.assert_allclose(emitted_relative(signals)[unclamped], target[unclamped], rtol=1e-12)

    model = DisplayModel()
    emitted = simulate_emitted([signals], model)[0].values
    lit = unclamped & (emitted > model.black_level)
    ratio = emitted[lit] / target[lit]
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-9)


def test_tonemap_is_monotone_in_luminance():
    ramp = np.geomspace(1e-3, 1e3, 256)
    frame = HdrFrame(ramp[None, :, None] * np.array([1.0, 0.9, 0.7]))
    mapped = luminance(reinhard_tonemap(frame))[0]
    assert np.all(np.diff(mapped) > 0)


def test_smooth_gradient_has_no_clamping_with_unit_psf():
    signals = split_signal(_horizontal_gradient(), psf_size=1)
    assert signals.clamp_fraction == 0.0


def test_wide_psf_clamps_only_at_the_white_point():
    # Рейнхард переводит максимум сцены в 1, а размытая подсветка там ниже 1
    signals = split_signal(_horizontal_gradient())
    clamped_pixels = signals.clamped.any(axis=2)
    assert clamped_pixels.any()
    assert np.all(signals.luma[clamped_pixels] > 0.9)
