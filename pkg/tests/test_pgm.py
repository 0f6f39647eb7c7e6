import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from permbreak.pgm import read_pgm, write_pgm


@given(
    arrays(
        dtype=np.uint8,
        shape=st.tuples(st.integers(1, 12), st.integers(1, 12)),
        elements=st.integers(0, 255),
    )
)
def test_write_read_round_trip(tmp_path_factory, img):
    path = tmp_path_factory.mktemp("pgm") / "img.pgm"
    write_pgm(path, img)
    assert np.array_equal(read_pgm(path), img)


def test_header_layout(tmp_path):
    path = tmp_path / "img.pgm"
    write_pgm(path, np.zeros((2, 3), dtype=np.uint8))
    assert path.read_bytes() == b"P5\n3 2\n255\n" + b"\x00" * 6


def test_reads_comments_and_loose_whitespace(tmp_path):
    path = tmp_path / "img.pgm"
    path.write_bytes(b"P5 # magic\n# a comment line\n  2\t1 # dims\n255\n\x07\x09")
    assert read_pgm(path).tolist() == [[7, 9]]


def test_rejects_wrong_magic(tmp_path):
    path = tmp_path / "img.pgm"
    path.write_bytes(b"P2\n1 1\n255\n0")
    with pytest.raises(ValueError, match="P5"):
        read_pgm(path)


def test_rejects_wide_maxval(tmp_path):
    path = tmp_path / "img.pgm"
    path.write_bytes(b"P5\n1 1\n65535\n\x00\x00")
    with pytest.raises(ValueError, match="maxval"):
        read_pgm(path)


def test_rejects_truncated_raster(tmp_path):
    path = tmp_path / "img.pgm"
    path.write_bytes(b"P5\n2 2\n255\n\x00\x00")
    with pytest.raises(ValueError, match="raster"):
        read_pgm(path)


def test_rejects_non_uint8_write(tmp_path):
    with pytest.raises(ValueError):
        write_pgm(tmp_path / "img.pgm", np.zeros((2, 2), dtype=np.int32))
