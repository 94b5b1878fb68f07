"""Pure-Python/numpy implementations of the hot kernels.

Every function here mirrors a function in ``_ckernels.pyx`` with the same
signature and the same floating-point operation order, so both backends
produce bit-identical results.
"""
import numpy as np

_CHUNK = 1 << 20


def chaos_iterate(A, b, idx, x0, y0, burn_in):
    """Apply ``x <- A[i] x + b[i]`` for each ``i`` in ``idx``; keep points after ``burn_in``."""
    coeffs = [
        (m[0][0], m[0][1], m[1][0], m[1][1], o[0], o[1])
        for m, o in zip(np.asarray(A, dtype=np.float64).tolist(), np.asarray(b, dtype=np.float64).tolist())
    ]
    seq = np.asarray(idx, dtype=np.int64).tolist()
    n = len(seq) - burn_in
    if n < 0:
        raise ValueError("index sequence shorter than burn-in")
    xs = [0.0] * n
    ys = [0.0] * n
    x = float(x0)
    y = float(y0)
    k = -burn_in
    for i in seq:
        a11, a12, a21, a22, b1, b2 = coeffs[i]
        x, y = a11 * x + a12 * y + b1, a21 * x + a22 * y + b2
        if k >= 0:
            xs[k] = x
            ys[k] = y
        k += 1
    out = np.empty((n, 2), dtype=np.float64)
    out[:, 0] = xs
    out[:, 1] = ys
    return out


def _cell_index(v, lo, width, g):
    f = (v - lo) / width * g
    i = np.floor(f).astype(np.int64)
    i[i == g] = g - 1
    return i


def histogram2d(points, xmin, ymin, xmax, ymax, g):
    """Count points per cell of a ``g x g`` grid; returns ``(counts[iy, ix], n_outside)``."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    wx = xmax - xmin
    wy = ymax - ymin
    x = pts[:, 0]
    y = pts[:, 1]
    inside = (x >= xmin) & (x <= xmax) & (y >= ymin) & (y <= ymax)
    ix = _cell_index(x[inside], xmin, wx, g)
    iy = _cell_index(y[inside], ymin, wy, g)
    counts = np.zeros((g, g), dtype=np.int64)
    np.add.at(counts, (iy, ix), 1)
    return counts, int(pts.shape[0] - np.count_nonzero(inside))


def pushforward(mass, A, b, p, xmin, ymin, xmax, ymax):
    """Push a cell-mass grid through ``sum_i p_i T_i`` by mapping cell centres.

    Returns ``(pushed, lost)`` where ``lost`` is mass sent outside the box.
    """
    m = np.asarray(mass, dtype=np.float64)
    g = m.shape[0]
    wx = xmax - xmin
    wy = ymax - ymin
    iy0, ix0 = np.nonzero(m)
    w = m[iy0, ix0]
    cx = xmin + (ix0 + 0.5) * wx / g
    cy = ymin + (iy0 + 0.5) * wy / g
    out = np.zeros((g, g), dtype=np.float64)
    lost = 0.0
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    for i in range(A.shape[0]):
        tx = A[i, 0, 0] * cx + A[i, 0, 1] * cy + b[i, 0]
        ty = A[i, 1, 0] * cx + A[i, 1, 1] * cy + b[i, 1]
        inside = (tx >= xmin) & (tx <= xmax) & (ty >= ymin) & (ty <= ymax)
        jx = _cell_index(tx[inside], xmin, wx, g)
        jy = _cell_index(ty[inside], ymin, wy, g)
        np.add.at(out, (jy, jx), p[i] * w[inside])
        for v in (p[i] * w[~inside]).tolist():
            lost += v
    return out, lost


def count_no_adjacent_ones(m):
    """Enumerate all ``2**m`` bit strings and count those without ``11``."""
    total = 0
    size = 1 << m
    for start in range(0, size, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
        total += int(np.count_nonzero((masks & (masks >> 1)) == 0))
    return total

