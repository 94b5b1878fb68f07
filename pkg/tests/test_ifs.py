import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fibgeom.errors import DomainError, ValidationError
from fibgeom.ifs import (
    AffineMap2,
    IfsSystem,
    PointCloud,
    RasterField,
    chaos_game,
    deterministic_attractor,
    invariance_residual,
    moran_bisection,
    moran_dimension,
    rasterize_measure,
    sierpinski_system,
    spectral_norm_2x2,
)

UNIT_BOX = (0.0, 0.0, 1.0, 1.0)


def half_map_system():
    return IfsSystem((AffineMap2(np.eye(2) / 2, [0.0, 0.0]),))


@pytest.mark.parametrize(
    "ratios, expected",
    [((0.5, 0.5), 1.0), ((1 / 3, 1 / 3), math.log(2) / math.log(3)), ((0.5, 0.5, 0.5), math.log(3) / math.log(2))],
)
def test_moran_examples(ratios, expected):
    assert moran_dimension(ratios) == pytest.approx(expected, abs=1e-10)


def test_moran_closed_form_grid():
    for n in range(1, 9):
        for r in (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8):
            d, iters = moran_bisection([r] * n)
            assert abs(d - math.log(n) / math.log(1 / r)) < 1e-10
            assert iters < 200


def test_moran_unequal_ratios():
    # 0.5^d + 0.25^d = 1 gives x + x^2 = 1 with x = 0.5^d, so x = 1/phi
    phi = (1 + 5**0.5) / 2
    assert moran_dimension([0.5, 0.25]) == pytest.approx(math.log(phi) / math.log(2), abs=1e-10)


@pytest.mark.parametrize("ratios", [(), (0.0,), (1.0,), (0.5, 1.2), (-0.1,), (float("nan"),)])
def test_moran_domain(ratios):
    with pytest.raises(DomainError):
        moran_dimension(ratios)


@settings(max_examples=100)
@given(st.lists(st.floats(min_value=0.01, max_value=0.99), min_size=1, max_size=12))
def test_moran_solves_equation(ratios):
    d, iters = moran_bisection(ratios)
    assert d >= 0 and iters < 200
    # the root is bracketed to 1e-12, so the sum crosses 1 across that bracket
    lo, hi = max(d - 1e-12, 0.0), d + 1e-12
    f = lambda x: math.fsum(r**x for r in ratios) - 1
    assert f(lo) >= -1e-9 and f(hi) <= 1e-9


@settings(max_examples=100)
@given(st.lists(st.floats(min_value=-3, max_value=3), min_size=4, max_size=4))
def test_spectral_norm_matches_svd(vals):
    A = np.array(vals).reshape(2, 2)
    assert spectral_norm_2x2(A) == pytest.approx(np.linalg.svd(A, compute_uv=False)[0], rel=1e-9, abs=1e-12)


def test_non_contractive_map_rejected():
    with pytest.raises(ValidationError):
        IfsSystem((AffineMap2(np.eye(2), [0, 0]),))
    with pytest.raises(ValidationError):
        IfsSystem((AffineMap2([[0.5, 0.9], [0.0, 0.5]], [0, 0]),))


def test_probability_validation():
    m = AffineMap2(np.eye(2) / 2, [0, 0])
    with pytest.raises(ValidationError):
        IfsSystem((m, m), (0.5,))
    with pytest.raises(ValidationError):
        IfsSystem((m, m), (0.7, 0.7))
    with pytest.raises(ValidationError):
        IfsSystem((m, m), (1.0, 0.0))


def test_json_roundtrip():
    text = json.dumps({"maps": [[0.5, 0, 0, 0.5, 0, 0], [0.5, 0, 0, 0.5, 0.5, 0]], "probabilities": [0.25, 0.75]})
    sys = IfsSystem.from_json(text)
    assert sys.probabilities == (0.25, 0.75)
    assert sys.maps[1].offset.tolist() == [0.5, 0.0]
    again = IfsSystem.from_json(sys.to_json())
    assert [m.to_row() for m in again.maps] == [m.to_row() for m in sys.maps]
    assert IfsSystem.from_json('{"maps": [[0.5, 0, 0, 0.5, 0, 0]]}').probabilities == (1.0,)


@pytest.mark.parametrize("text", ['{"maps": [[0.5, 0, 0]]}', '{"foo": 1}', "[1, 2]"])
def test_json_malformed(text):
    with pytest.raises((ValidationError, DomainError)):
        IfsSystem.from_json(text)


def test_single_map_converges_to_fixed_point():
    for seed in (0, 1, 99):
        cloud = chaos_game(half_map_system(), 100, seed=seed, burn_in=20)
        assert np.all(np.abs(cloud.points) <= 2.0**-20)
    # the origin is a fixed point, so iterates started there never leave
    assert np.all(chaos_game(half_map_system(), 10, burn_in=0).points == 0)


def test_single_map_offset_fixed_point():
    sys = IfsSystem((AffineMap2(np.eye(2) / 2, [1.0, 2.0]),))
    fp = sys.maps[0].fixed_point()
    assert fp.tolist() == [2.0, 4.0]
    pts = chaos_game(sys, 50, burn_in=40).points
    assert np.max(np.abs(pts - fp)) <= 2.0**-40 * np.hypot(*fp) * 2


def test_sierpinski_confined_to_triangle():
    pts = chaos_game(sierpinski_system(), 10**5, seed=3).points
    x, y = pts[:, 0], pts[:, 1]
    assert np.all(x >= -1e-9) and np.all(y >= -1e-9) and np.all(x + y <= 1 + 1e-9)


def test_confinement_radius():
    sys = IfsSystem.from_json(
        {"maps": [[0.6, -0.2, 0.1, 0.5, 1, 0], [0.3, 0.4, -0.4, 0.3, -1, 2], [0.5, 0, 0, -0.5, 0, -3]]}
    )
    R = sys.bounding_radius()
    pts = chaos_game(sys, 20000, seed=5).points
    assert np.all(np.hypot(pts[:, 0], pts[:, 1]) <= R + 1e-9)


def test_determinism():
    a = chaos_game(sierpinski_system(), 5000, seed=11)
    b = chaos_game(sierpinski_system(), 5000, seed=11)
    assert a.points.tobytes() == b.points.tobytes()
    c = chaos_game(sierpinski_system(), 5000, seed=12)
    assert a.points.tobytes() != c.points.tobytes()


def test_worker_count_independent():
    sys = sierpinski_system()
    ref = chaos_game(sys, 10001, seed=4, n_chains=5, workers=1).points
    for workers in (2, 3, 8):
        out = chaos_game(sys, 10001, seed=4, n_chains=5, workers=workers).points
        assert out.tobytes() == ref.tobytes()
    assert ref.shape == (10001, 2)


def test_cloud_metadata():
    cloud = chaos_game(sierpinski_system(), 10, seed=7, burn_in=5)
    assert isinstance(cloud, PointCloud)
    assert (cloud.seed, cloud.burn_in) == (7, 5)
    assert "PCG64" in cloud.rng


@pytest.mark.parametrize(
    "kwargs", [dict(n_points=0), dict(n_points=10, burn_in=-1), dict(n_points=10, seed=-1), dict(n_points=2, n_chains=3)]
)
def test_chaos_game_domain(kwargs):
    with pytest.raises(DomainError):
        chaos_game(sierpinski_system(), **kwargs)


def test_deterministic_attractor_cross_check():
    pts = deterministic_attractor(sierpinski_system(), 6)
    assert len(pts) == 3**6
    x, y = pts[:, 0], pts[:, 1]
    assert np.all(x >= 0) and np.all(y >= 0) and np.all(x + y <= 1)
    with pytest.raises(DomainError):
        deterministic_attractor(sierpinski_system(), 9)


def test_raster_one_point():
    f = rasterize_measure(np.array([[0.3, 0.7]]), UNIT_BOX, 8)
    assert f.grid.sum() == 1.0 and np.count_nonzero(f.grid) == 1
    # row index follows y, column follows x
    assert f.grid[5, 2] == 1.0


def test_raster_uniform_grid():
    g = 16
    c = (np.arange(g) + 0.5) / g
    xx, yy = np.meshgrid(c, c)
    f = rasterize_measure(np.column_stack([xx.ravel(), yy.ravel()]), UNIT_BOX, g)
    assert np.all(f.grid == 1 / g**2)


def test_raster_sierpinski_hole():
    cloud = chaos_game(sierpinski_system(), 10**5, seed=1)
    f = rasterize_measure(cloud, UNIT_BOX, 64)
    c = (np.arange(64) + 0.5) / 64
    X, Y = np.meshgrid(c, c)
    # interior of the central removed triangle (0.5,0),(0,0.5),(0.5,0.5), shrunk by two cells
    m = 2 / 64
    hole = (X + Y > 0.5 + m) & (X < 0.5 - m) & (Y < 0.5 - m)
    assert f.grid[hole].sum() < 0.01


def test_raster_outside_points():
    pts = np.array([[0.5, 0.5]] * 999 + [[2.0, 2.0]])
    f = rasterize_measure(pts, UNIT_BOX, 8)
    assert f.outside == 1 and f.grid.sum() == pytest.approx(1.0)
    with pytest.raises(DomainError):
        rasterize_measure(np.array([[0.5, 0.5]] * 99 + [[2.0, 2.0]]), UNIT_BOX, 8)


@pytest.mark.parametrize("g, box", [(7, UNIT_BOX), (8, (0, 0, 0, 1)), (8, (1, 0, 0, 1))])
def test_raster_domain(g, box):
    with pytest.raises(DomainError):
        rasterize_measure(np.array([[0.5, 0.5]]), box, g)


def test_residual_point_mass_at_fixed_point():
    g = 32
    grid = np.zeros((g, g))
    grid[0, 0] = 1.0
    field = RasterField(grid, UNIT_BOX)
    assert invariance_residual(field, half_map_system()) < 2 / g


def test_residual_uniform_under_near_isometry():
    g = 32
    sys = IfsSystem((AffineMap2(np.eye(2) * (1 - 1e-9), [0.0, 0.0]),))
    field = RasterField(np.full((g, g), 1 / g**2), UNIT_BOX)
    assert invariance_residual(field, sys) < 1e-12


def test_residual_shape_check():
    with pytest.raises(DomainError):
        invariance_residual(RasterField(np.zeros((4, 5)), UNIT_BOX), sierpinski_system())


def test_residual_decreases_with_points():
    sys = sierpinski_system()
    small = invariance_residual(rasterize_measure(chaos_game(sys, 10**4, seed=0), UNIT_BOX, 64), sys)
    large = invariance_residual(rasterize_measure(chaos_game(sys, 10**6, seed=0), UNIT_BOX, 64), sys)
    assert large < small
    assert large < 0.05
