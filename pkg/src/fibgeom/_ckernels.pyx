# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Semantics and operation order match ``_pykernels``."""
import numpy as np

from libc.math cimport floor


cdef inline Py_ssize_t _cell(double v, double lo, double width, Py_ssize_t g) noexcept nogil:
    cdef Py_ssize_t i = <Py_ssize_t>floor((v - lo) / width * g)
    if i == g:
        i = g - 1
    return i


def chaos_iterate(A, b, idx, double x0, double y0, Py_ssize_t burn_in):
    cdef double[:, :, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[:, ::1] off = np.ascontiguousarray(b, dtype=np.float64)
    cdef long long[::1] seq = np.ascontiguousarray(idx, dtype=np.int64)
    cdef Py_ssize_t total = seq.shape[0]
    cdef Py_ssize_t n = total - burn_in
    if n < 0:
        raise ValueError("index sequence shorter than burn-in")
    out_arr = np.empty((n, 2), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double x = x0, y = y0, nx
    cdef Py_ssize_t k, i
    with nogil:
        for k in range(total):
            i = seq[k]
            nx = a[i, 0, 0] * x + a[i, 0, 1] * y + off[i, 0]
            y = a[i, 1, 0] * x + a[i, 1, 1] * y + off[i, 1]
            x = nx
            if k >= burn_in:
                out[k - burn_in, 0] = x
                out[k - burn_in, 1] = y
    return out_arr


def histogram2d(points, double xmin, double ymin, double xmax, double ymax, Py_ssize_t g):
    cdef double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 2)
    counts_arr = np.zeros((g, g), dtype=np.int64)
    cdef long long[:, ::1] counts = counts_arr
    cdef double wx = xmax - xmin, wy = ymax - ymin, x, y
    cdef Py_ssize_t k, outside = 0
    with nogil:
        for k in range(pts.shape[0]):
            x = pts[k, 0]
            y = pts[k, 1]
            if x >= xmin and x <= xmax and y >= ymin and y <= ymax:
                counts[_cell(y, ymin, wy, g), _cell(x, xmin, wx, g)] += 1
            else:
                outside += 1
    return counts_arr, outside


def pushforward(mass, A, b, p, double xmin, double ymin, double xmax, double ymax):
    cdef double[:, ::1] m = np.ascontiguousarray(mass, dtype=np.float64)
    cdef double[:, :, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[:, ::1] off = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] prob = np.ascontiguousarray(p, dtype=np.float64)
    cdef Py_ssize_t g = m.shape[0]
    out_arr = np.zeros((g, g), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double wx = xmax - xmin, wy = ymax - ymin
    cdef double cx, cy, tx, ty, w, lost = 0.0
    cdef Py_ssize_t i, ix, iy
    with nogil:
        for i in range(a.shape[0]):
            for iy in range(g):
                for ix in range(g):
                    w = m[iy, ix]
                    if w == 0.0:
                        continue
                    cx = xmin + (ix + 0.5) * wx / g
                    cy = ymin + (iy + 0.5) * wy / g
                    tx = a[i, 0, 0] * cx + a[i, 0, 1] * cy + off[i, 0]
                    ty = a[i, 1, 0] * cx + a[i, 1, 1] * cy + off[i, 1]
                    if tx >= xmin and tx <= xmax and ty >= ymin and ty <= ymax:
                        out[_cell(ty, ymin, wy, g), _cell(tx, xmin, wx, g)] += prob[i] * w
                    else:
                        lost += prob[i] * w
    return out_arr, lost


def count_no_adjacent_ones(int m):
    cdef unsigned long long mask, size = 1ULL << m, total = 0
    with nogil:
        for mask in range(size):
            if (mask & (mask >> 1)) == 0:
                total += 1
    return int(total)
