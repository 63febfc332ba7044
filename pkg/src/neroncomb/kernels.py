"""Hot-loop dispatch.

The compiled extension ``neroncomb._kernels`` is used when it was built and the
input fits in 64-bit arithmetic; otherwise the pure-Python twin in
``neroncomb._kernels_py`` runs.  Both return identical lists.
"""

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

HAVE_COMPILED = _compiled is not None
BACKEND = "cython" if HAVE_COMPILED else "python"

_LIMIT = 1 << 60


def _fits_int64(lo, hi, total, constraints, scale):
    width = sum(max(abs(a), abs(b)) for a, b in zip(lo, hi)) + abs(total)
    if abs(scale) * width >= _LIMIT:
        return False
    return all(abs(lower) < _LIMIT and abs(upper) < _LIMIT for _, lower, upper in constraints)


def enumerate_points(lo, hi, total, constraints, scale, backend=None):
    """See :func:`neroncomb._kernels_py.enumerate_points`.

    ``backend`` forces ``"python"`` or ``"cython"``; the default picks the
    compiled kernel whenever it is available and safe.
    """
    lo = [int(v) for v in lo]
    hi = [int(v) for v in hi]
    if backend == "python" or (backend is None and not HAVE_COMPILED):
        return _kernels_py.enumerate_points(lo, hi, total, constraints, scale)
    if backend == "cython" and not HAVE_COMPILED:
        raise RuntimeError("compiled kernels are not built")
    if not _fits_int64(lo, hi, total, constraints, scale):
        if backend == "cython":
            raise OverflowError("input does not fit the compiled kernel")
        return _kernels_py.enumerate_points(lo, hi, total, constraints, scale)
    return _compiled.enumerate_points(lo, hi, total, constraints, scale)


def coset_keys(key_rows, vectors, backend=None):
    """Batch coset keys; ``key_rows`` is ``Lattice.key_rows``."""
    rows = [r for r, _ in key_rows]
    moduli = [m for _, m in key_rows]
    vectors = [tuple(int(x) for x in v) for v in vectors]
    if backend == "python" or (backend is None and not HAVE_COMPILED):
        return _kernels_py.coset_keys(rows, moduli, vectors)
    if backend == "cython" and not HAVE_COMPILED:
        raise RuntimeError("compiled kernels are not built")
    biggest_row = max((sum(abs(a) for a in r) for r in rows), default=0)
    biggest_v = max((max(map(abs, v), default=0) for v in vectors), default=0)
    fits = biggest_row * biggest_v < _LIMIT and all(abs(m) < _LIMIT for m in moduli)
    if not fits:
        if backend == "cython":
            raise OverflowError("input does not fit the compiled kernel")
        return _kernels_py.coset_keys(rows, moduli, vectors)
    return _compiled.coset_keys(rows, moduli, vectors)
