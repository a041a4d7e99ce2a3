import numpy as np
import pytest

from core.core_exceptions import ConfigurationException, DimensionMismatchException, ValidationException
from hdrio.hdrio_color import (
    downsample_chroma,
    normalize,
    resolve_yuv_matrix,
    rgb_to_luminance,
    rgb_to_yuv,
    upsample_chroma,
    yuv_to_rgb,
)
from hdrio.hdrio_types import HdrFrame, LumaPlane, LumaUnits


def test_luminance_weights():
    frame = HdrFrame.filled(2, 2, (1.0, 1.0, 1.0))
    plane = rgb_to_luminance(frame)
    assert plane.units is LumaUnits.RELATIVE
    np.testing.assert_allclose(plane.values, 1.0, atol=1e-15)
    red = rgb_to_luminance(HdrFrame.filled(1, 1, (1.0, 0.0, 0.0)))
    assert red.values[0, 0] == pytest.approx(0.2126)


def test_normalize_by_own_max():
    plane = LumaPlane(np.array([[0.0, 2.0], [4.0, 1.0]]))
    normalized, record = normalize(plane)
    assert normalized.units is LumaUnits.NORMALIZED
    assert normalized.values.max() == 1.0
    assert record.scale == 4.0 and record.per_frame


def test_normalize_rejects_black_plane():
    with pytest.raises(ValidationException):
        normalize(LumaPlane(np.zeros((2, 2))))


def test_normalize_rejects_small_scale():
    with pytest.raises(ValidationException):
        normalize(LumaPlane(np.array([[2.0]])), scale=1.0)


def test_chroma_resampling():
    plane = np.arange(4.0).reshape(2, 2)
    up = upsample_chroma(plane)
    assert up.shape == (4, 4)
    np.testing.assert_array_equal(downsample_chroma(up), plane)
    with pytest.raises(DimensionMismatchException):
        downsample_chroma(np.zeros((3, 2)))


def test_gray_maps_to_neutral_chroma():
    yuv = rgb_to_yuv(HdrFrame.filled(4, 2, (0.25, 0.25, 0.25)))
    assert np.all(yuv.u == 2048) and np.all(yuv.v == 2048)
    assert np.all(yuv.y == 1024)


def test_yuv_rgb_round_trip_on_flat_color():
    frame = HdrFrame.filled(4, 4, (0.8, 0.4, 0.2))
    restored = yuv_to_rgb(rgb_to_yuv(frame))
    np.testing.assert_allclose(restored.data, frame.data, atol=2e-3)


def test_peak_scaling():
    frame = HdrFrame.filled(2, 2, (50.0, 50.0, 50.0))
    yuv = rgb_to_yuv(frame, peak=200.0)
    assert np.all(yuv.y == 1024)
    with pytest.raises(ValidationException):
        rgb_to_yuv(frame, peak=0.0)


def test_odd_geometry_rejected():
    with pytest.raises(ValidationException):
        rgb_to_yuv(HdrFrame.filled(3, 2, (0.1, 0.1, 0.1)))


def test_bt2020_round_trip_differs_from_bt709():
    frame = HdrFrame.filled(4, 4, (0.8, 0.4, 0.2))
    bt2020 = rgb_to_yuv(frame, matrix='bt2020')
    bt709 = rgb_to_yuv(frame, matrix='bt709')
    assert not np.array_equal(bt2020.y, bt709.y)
    np.testing.assert_allclose(yuv_to_rgb(bt2020, matrix='bt2020').data, frame.data, atol=2e-3)


def test_matrix_setting(monkeypatch):
    monkeypatch.setenv('YUV_MATRIX', 'BT2020')
    assert resolve_yuv_matrix() == 'bt2020'
    frame = HdrFrame.filled(2, 2, (0.8, 0.4, 0.2))
    np.testing.assert_array_equal(rgb_to_yuv(frame).y, rgb_to_yuv(frame, matrix='bt2020').y)
    assert resolve_yuv_matrix('bt709') == 'bt709'


def test_unknown_matrix():
    with pytest.raises(ConfigurationException):
        resolve_yuv_matrix('smpte240m')
