"""Backend selection for the hot kernels.

The compiled Cython module is used when it was built; otherwise the
pure-Python implementation is imported. Set ``FIBGEOM_PURE_PYTHON=1`` to
force the fallback.
"""
import os

if os.environ.get("FIBGEOM_PURE_PYTHON"):
    from fibgeom import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from fibgeom import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        from fibgeom import _pykernels as _impl

        BACKEND = "python"

chaos_iterate = _impl.chaos_iterate
histogram2d = _impl.histogram2d
pushforward = _impl.pushforward
count_no_adjacent_ones = _impl.count_no_adjacent_ones


def available_backends():
    """Return ``{name: module}`` for every backend importable in this process."""
    from fibgeom import _pykernels

    found = {"python": _pykernels}
    try:
        from fibgeom import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
