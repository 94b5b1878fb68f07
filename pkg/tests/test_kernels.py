import numpy as np
import pytest

from fibgeom import kernels
from fibgeom.ifs import sierpinski_system


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    assert "python" in kernels.available_backends()


def test_chaos_iterate_contract(backend):
    A = np.array([[[0.5, 0.0], [0.0, 0.5]]])
    b = np.array([[1.0, 0.0]])
    idx = np.zeros(13, dtype=np.int64)
    out = backend.chaos_iterate(A, b, idx, 0.0, 0.0, 3)
    assert out.shape == (10, 2)
    # x_k = 2 - 2^(1-k) from x_0 = 0
    expected = [2 - 2.0 ** (1 - k) for k in range(4, 14)]
    assert np.allclose(out[:, 0], expected, rtol=0, atol=1e-15)
    with pytest.raises(ValueError):
        backend.chaos_iterate(A, b, idx[:2], 0.0, 0.0, 3)


def test_histogram_edges(backend):
    pts = np.array([[0.0, 0.0], [1.0, 1.0], [0.5, 0.25], [1.5, 0.0], [-0.1, 0.5]])
    counts, outside = backend.histogram2d(pts, 0.0, 0.0, 1.0, 1.0, 8)
    assert outside == 2
    assert counts[0, 0] == 1 and counts[7, 7] == 1 and counts[2, 4] == 1
    assert counts.sum() == 3


def test_count_no_adjacent(backend):
    assert [backend.count_no_adjacent_ones(m) for m in range(6)] == [1, 2, 3, 5, 8, 13]


@pytest.mark.skipif("cython" not in kernels.available_backends(), reason="compiled kernels not built")
def test_backends_bit_identical():
    py = kernels.available_backends()["python"]
    cy = kernels.available_backends()["cython"]
    rng = np.random.default_rng(7)
    A = rng.uniform(-0.5, 0.5, (4, 2, 2))
    b = rng.uniform(-1, 1, (4, 2))
    idx = rng.integers(0, 4, 20000)
    p1 = py.chaos_iterate(A, b, idx, 0.3, -0.2, 17)
    p2 = cy.chaos_iterate(A, b, idx, 0.3, -0.2, 17)
    assert np.array_equal(p1, p2)
    h1, o1 = py.histogram2d(p1, -2, -2, 2, 2, 32)
    h2, o2 = cy.histogram2d(p1, -2, -2, 2, 2, 32)
    assert np.array_equal(h1, h2) and o1 == o2
    m = h1 / h1.sum()
    probs = np.array([0.1, 0.2, 0.3, 0.4])
    q1, l1 = py.pushforward(m, A, b, probs, -2, -2, 2, 2)
    q2, l2 = cy.pushforward(m, A, b, probs, -2, -2, 2, 2)
    assert np.array_equal(q1, q2) and l1 == l2
    assert py.count_no_adjacent_ones(18) == cy.count_no_adjacent_ones(18)


def test_pushforward_conserves_mass(backend):
    s = sierpinski_system()
    A = np.stack([m.linear for m in s.maps])
    b = np.stack([m.offset for m in s.maps])
    mass = np.full((16, 16), 1 / 256)
    out, lost = backend.pushforward(mass, A, b, np.array(s.probabilities), 0, 0, 1, 1)
    assert abs(out.sum() + lost - 1) < 1e-12
