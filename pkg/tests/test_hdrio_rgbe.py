import numpy as np
import pytest

from core.core_exceptions import (
    FormatException,
    MalformedHeaderException,
    TruncatedDataException,
    UnsupportedOrientationException,
)
from hdrio.hdrio_rgbe import (
    decode_pixels,
    encode_pixels,
    read_rgbe,
    read_rgbe_file,
    rgbe_decode_pixel,
    write_rgbe,
    write_rgbe_file,
)
from hdrio.hdrio_types import HdrFrame


def _header(resolution: bytes = b'-Y 2 +X 3', fmt: bytes = b'32-bit_rle_rgbe') -> bytes:
    return b'#?RADIANCE\nFORMAT=' + fmt + b'\n\n' + resolution + b'\n'


def test_decode_known_pixels():
    assert rgbe_decode_pixel((128, 64, 32, 129)) == (1.0, 0.5, 0.25)
    assert rgbe_decode_pixel((200, 100, 50, 0)) == (0.0, 0.0, 0.0)


def test_vectorized_decode_matches_scalar():
    quads = np.array([[128, 64, 32, 129], [1, 2, 3, 0], [255, 0, 17, 140]], dtype=np.uint8)
    decoded = decode_pixels(quads)
    for quad, rgb in zip(quads, decoded):
        assert tuple(rgb) == pytest.approx(rgbe_decode_pixel(quad), abs=0)


def test_encode_zero_and_tiny_pixels():
    quads = encode_pixels(np.array([[0.0, 0.0, 0.0], [1e-50, 1e-50, 1e-50]]))
    assert quads.tolist() == [[0, 0, 0, 0], [0, 0, 0, 0]]


def test_round_trip_error_bounded_by_largest_channel():
    rng = np.random.default_rng(1)
    for _ in range(100):
        rgb = rng.random((6, 9, 3)) * 10.0 ** rng.uniform(-3, 4)
        frame = HdrFrame(rgb)
        decoded = read_rgbe(write_rgbe(frame)).data
        bound = rgb.max(axis=2, keepdims=True) / 256.0
        assert np.all(np.abs(decoded - rgb) <= bound + 1e-12)


def test_rle_round_trip_wide_frame_is_exact_after_first_pass():
    rng = np.random.default_rng(2)
    rgb = np.repeat(rng.random((4, 1, 3)), 40, axis=1)
    rgb[:, 10:13] = rng.random((4, 3, 3))
    once = read_rgbe(write_rgbe(HdrFrame(rgb)))
    twice = read_rgbe(write_rgbe(once))
    np.testing.assert_array_equal(once.data, twice.data)


def test_top_row_is_first_scanline():
    rgb = np.zeros((2, 3, 3))
    rgb[0] = 1.0
    frame = read_rgbe(write_rgbe(HdrFrame(rgb)))
    assert frame.data[0, 0, 0] == 1.0
    assert frame.data[1, 0, 0] == 0.0


def test_flat_scanlines_and_old_rle():
    pixel = bytes([128, 64, 32, 129])
    data = _header(b'-Y 1 +X 3') + pixel + bytes([1, 1, 1, 2])
    frame = read_rgbe(data)
    assert frame.data.shape == (1, 3, 3)
    np.testing.assert_array_equal(frame.data[0, 2], [1.0, 0.5, 0.25])


def test_rgbe_signature_accepted():
    data = b'#?RGBE\n\n-Y 1 +X 1\n' + bytes([128, 128, 128, 129])
    assert read_rgbe(data).data[0, 0, 0] == 1.0


def test_missing_signature():
    with pytest.raises(MalformedHeaderException):
        read_rgbe(b'P6\n\n-Y 1 +X 1\n' + bytes(4))


def test_wrong_pixel_format():
    with pytest.raises(MalformedHeaderException):
        read_rgbe(_header(fmt=b'32-bit_rle_xyze') + bytes(24))


def test_malformed_resolution_line():
    with pytest.raises(MalformedHeaderException):
        read_rgbe(_header(b'-Y two +X 3') + bytes(24))


def test_unsupported_orientation():
    with pytest.raises(UnsupportedOrientationException):
        read_rgbe(_header(b'+Y 2 +X 3') + bytes(24))


def test_truncated_flat_data():
    with pytest.raises(TruncatedDataException):
        read_rgbe(_header() + bytes(12))


def test_truncated_rle_data():
    data = write_rgbe(HdrFrame(np.ones((2, 16, 3))))
    with pytest.raises(TruncatedDataException):
        read_rgbe(data[:-3])


def test_rle_width_mismatch():
    data = _header(b'-Y 1 +X 8') + bytes([2, 2, 0, 9]) + bytes(40)
    with pytest.raises(FormatException):
        read_rgbe(data)


def test_file_round_trip(tmp_path, hdr_frame):
    path = tmp_path / 'frame.hdr'
    write_rgbe_file(path, hdr_frame)
    assert path.read_bytes().startswith(b'#?RADIANCE\n')
    restored = read_rgbe_file(path)
    assert restored.data.shape == hdr_frame.data.shape


def test_missing_file(tmp_path):
    with pytest.raises(FormatException):
        read_rgbe_file(tmp_path / 'absent.hdr')
