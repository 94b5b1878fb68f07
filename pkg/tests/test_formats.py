import numpy as np
import pytest

from fibgeom.errors import DomainError
from fibgeom.formats import field_to_gray, parse_number_list, pgm_bytes, read_pgm, read_xy_csv, rows_to_csv
from fibgeom.ifs import RasterField


def test_pgm_layout():
    grid = np.zeros((8, 8))
    grid[7, 0] = 2.0  # top-left in image space: highest y row, lowest x
    grid[0, 7] = 1.0
    data = pgm_bytes(RasterField(grid, (0.0, 0.0, 2.0, 4.0)))
    head, _, rest = data.partition(b"\n8 8\n65535\n")
    assert head.startswith(b"P5\n# fibgeom box=0.0,0.0,2.0,4.0 max=2.0")
    samples = np.frombuffer(rest, dtype=">u2").reshape(8, 8)
    assert samples[0, 0] == 65535 and samples[7, 7] == 32768
    assert np.count_nonzero(samples) == 2


def test_pgm_roundtrip():
    rng = np.random.default_rng(0)
    grid = rng.random((16, 16))
    back = read_pgm(pgm_bytes(RasterField(grid, (-1.0, -2.0, 3.0, 4.0))))
    assert back.box == (-1.0, -2.0, 3.0, 4.0)
    assert np.max(np.abs(back.grid - grid)) <= grid.max() / 65535


def test_pgm_zero_field():
    back = read_pgm(pgm_bytes(RasterField(np.zeros((8, 8)))))
    assert not back.grid.any()


def test_pgm_rejects_negative():
    with pytest.raises(DomainError):
        pgm_bytes(RasterField(-np.ones((8, 8))))


def test_luminance():
    rgb = np.zeros((8, 8, 3))
    rgb[..., 1] = 1.0
    assert np.allclose(field_to_gray(RasterField(rgb)), 0.7152)


def test_csv_helpers():
    assert rows_to_csv([(1, 2)], ["a", "b"]) == "a,b\n1,2\n"
    assert rows_to_csv([{"a": 1, "b": None}]) == "a,b\n1,\n"
    assert read_xy_csv("x,I\n0,1\n1,0.5\n") == [(0.0, 1.0), (1.0, 0.5)]
    with pytest.raises(DomainError):
        read_xy_csv("0,1\nfoo,bar\n")
    assert parse_number_list("0, 1,2.5\n3") == [0, 1, 2.5, 3]
    with pytest.raises(DomainError):
        parse_number_list("1,x")
