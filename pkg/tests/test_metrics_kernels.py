import numpy as np
import pytest

from core.core_exceptions import DimensionMismatchException, UndefinedMetricException, ValidationException
from distortion.distortion_kernels import gaussian_kernel_1d
from hdrio.hdrio_types import CodeKind, CodePlane
from metrics.metrics_kernels import (
    aggregate,
    compute,
    psnr,
    ssim,
    ssim_map,
    vif,
    vif_min_size,
    vif_window,
)
from metrics.metrics_types import MetricId, MetricResult, PSNR_CAP_DB


def _texture(size: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size]
    return 100.0 + 60.0 * np.sin(xx / 3.0) * np.cos(yy / 4.0) + 20.0 * rng.random((size, size))


def _windows(plane: np.ndarray, size: int):
    for i in range(plane.shape[0] - size + 1):
        for j in range(plane.shape[1] - size + 1):
            yield i, j, plane[i:i + size, j:j + size]


def _ssim_oracle(a, b, dynamic_range):
    g = gaussian_kernel_1d(11, 1.5)
    w = np.outer(g, g)
    c1 = (0.01 * dynamic_range) ** 2
    c2 = (0.03 * dynamic_range) ** 2
    values = []
    for (_, _, x), (_, _, y) in zip(_windows(a, 11), _windows(b, 11)):
        mx = np.sum(w * x)
        my = np.sum(w * y)
        vx = np.sum(w * x * x) - mx * mx
        vy = np.sum(w * y * y) - my * my
        cxy = np.sum(w * x * y) - mx * my
        values.append(((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2)))
    return float(np.mean(values))


def _smooth_edge(plane, kernel):
    half = kernel.size // 2
    padded = np.pad(plane, half, mode='edge')
    out = np.zeros_like(plane)
    w = np.outer(kernel, kernel)
    for i in range(plane.shape[0]):
        for j in range(plane.shape[1]):
            out[i, j] = np.sum(w * padded[i:i + kernel.size, j:j + kernel.size])
    return out


def _vif_oracle(a, b):
    num = den = 0.0
    for scale in range(1, 5):
        g = vif_window(scale)
        if scale > 1:
            a = _smooth_edge(a, g)[::2, ::2]
            b = _smooth_edge(b, g)[::2, ::2]
        w = np.outer(g, g)
        for (_, _, x), (_, _, y) in zip(_windows(a, g.size), _windows(b, g.size)):
            mx, my = np.sum(w * x), np.sum(w * y)
            s1 = max(np.sum(w * x * x) - mx * mx, 0.0)
            s2 = max(np.sum(w * y * y) - my * my, 0.0)
            s12 = np.sum(w * x * y) - mx * my
            gain = s12 / (s1 + 1e-10)
            sv = s2 - gain * s12
            if s1 < 1e-10:
                gain, sv, s1 = 0.0, s2, 0.0
            if s2 < 1e-10:
                gain, sv = 0.0, 0.0
            if gain < 0:
                sv, gain = s2, 0.0
            sv = max(sv, 0.0)
            num += np.log2(1.0 + gain * gain * s1 / (sv + 2.0))
            den += np.log2(1.0 + s1 / 2.0)
    return num / den


def test_psnr_known_value():
    ref = np.zeros((4, 4))
    dist = np.ones((4, 4))
    assert psnr(ref, dist, 255.0) == pytest.approx(48.1308, abs=1e-4)


def test_psnr_identity_cap():
    plane = _texture(16, 0)
    assert psnr(plane, plane, 255.0) == PSNR_CAP_DB


def test_ssim_identity():
    plane = _texture(32, 1)
    assert ssim(plane, plane, 255.0) == pytest.approx(1.0, abs=1e-9)


def test_ssim_matches_window_oracle():
    a = _texture(16, 2)
    b = a + np.random.default_rng(3).normal(0, 5, a.shape)
    assert ssim(a, b, 255.0) == pytest.approx(_ssim_oracle(a, b, 255.0), abs=1e-9)
    assert ssim_map(a, b, 255.0).shape == (6, 6)


def test_ssim_rejects_small_plane():
    with pytest.raises(ValidationException):
        ssim(np.zeros((10, 20)), np.zeros((10, 20)), 1.0)


def test_vif_identity():
    plane = _texture(64, 4)
    assert vif(plane, plane) == pytest.approx(1.0, abs=1e-6)


def test_vif_matches_brute_force():
    a = _texture(64, 5)
    b = a + np.random.default_rng(6).normal(0, 10, a.shape)
    assert vif(a, b) == pytest.approx(_vif_oracle(a, b), abs=1e-6)


def test_vif_decreases_with_noise():
    a = _texture(64, 7)
    rng = np.random.default_rng(8)
    noise = rng.normal(0, 1, a.shape)
    assert vif(a, a + 5 * noise) > vif(a, a + 20 * noise)


def test_vif_windows():
    assert [vif_window(s).size for s in range(1, 5)] == [17, 9, 5, 3]
    assert vif_min_size() == 17


def test_vif_constant_reference_is_undefined():
    flat = np.full((32, 32), 3.0)
    with pytest.raises(UndefinedMetricException):
        vif(flat, flat + np.random.default_rng(0).random((32, 32)))


def test_vif_rejects_small_plane():
    with pytest.raises(ValidationException):
        vif(np.zeros((16, 16)), np.zeros((16, 16)))


def test_shape_mismatch():
    with pytest.raises(DimensionMismatchException):
        psnr(np.zeros((4, 4)), np.zeros((4, 5)), 1.0)


def test_code_planes_accepted():
    values = _texture(16, 9)
    plane = CodePlane(values, CodeKind.LDR8)
    assert compute(MetricId.PSNR, plane, plane, 255.0) == PSNR_CAP_DB


def test_aggregate_mean():
    assert aggregate([1.0, 2.0, 4.0]) == pytest.approx(7.0 / 3.0)
    with pytest.raises(ValidationException):
        aggregate([])


def test_metric_result_dict():
    result = MetricResult(MetricId.SSIM, 'pu', [0.9, 0.8], 0.85, 255.0)
    assert MetricResult.from_dict(result.to_dict()) == result
