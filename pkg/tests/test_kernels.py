import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neroncomb import _kernels_py, kernels

needs_compiled = pytest.mark.skipif(not kernels.HAVE_COMPILED, reason="compiled kernels not built")


@st.composite
def problems(draw):
    n = draw(st.integers(1, 5))
    lo = draw(st.lists(st.integers(-4, 2), min_size=n, max_size=n))
    hi = [a + draw(st.integers(0, 5)) for a in lo]
    total = draw(st.integers(sum(lo) - 1, sum(hi) + 1))
    scale = draw(st.integers(1, 6))
    cons = []
    for _ in range(draw(st.integers(0, 6))):
        members = tuple(sorted(draw(st.sets(st.integers(0, n - 1), min_size=1))))
        lower = draw(st.integers(-20, 10))
        cons.append((members, lower, lower + draw(st.integers(0, 30))))
    return lo, hi, total, cons, scale


def brute(lo, hi, total, cons, scale):
    from itertools import product

    out = []
    for x in product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        if sum(x) != total:
            continue
        if all(lower <= scale * sum(x[i] for i in m) <= upper for m, lower, upper in cons):
            out.append(x)
    return out


@settings(max_examples=300, deadline=None)
@given(problems())
def test_python_kernel_matches_brute_force(p):
    assert _kernels_py.enumerate_points(*p) == brute(*p)


@needs_compiled
@settings(max_examples=300, deadline=None)
@given(problems())
def test_backends_agree(p):
    assert kernels.enumerate_points(*p, backend="cython") == kernels.enumerate_points(*p, backend="python")


@needs_compiled
@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.tuples(st.lists(st.integers(-50, 50), min_size=3, max_size=3), st.integers(0, 12)), max_size=3),
    st.lists(st.lists(st.integers(-100, 100), min_size=3, max_size=3), max_size=5),
)
def test_coset_key_backends_agree(key_rows, vectors):
    rows = [(tuple(r), m) for r, m in key_rows]
    assert kernels.coset_keys(rows, vectors, backend="cython") == kernels.coset_keys(rows, vectors, backend="python")


def test_empty_problem():
    assert kernels.enumerate_points([], [], 0, [], 1) == [()]
    assert kernels.enumerate_points([], [], 1, [], 1) == []


@needs_compiled
def test_overflow_falls_back_to_python():
    big = 1 << 62
    assert kernels.enumerate_points([0, 0], [1, 1], 1, [((0,), -big * 4, big * 4)], 1) == [(0, 1), (1, 0)]
    with pytest.raises(OverflowError):
        kernels.enumerate_points([0], [1], 1, [((0,), -big * 4, big * 4)], 1, backend="cython")
    assert kernels.coset_keys([((big, big), 0)], [(big, 1)]) == [(big * big + big,)]
    with pytest.raises(OverflowError):
        kernels.coset_keys([((big, big), 0)], [(big, 1)], backend="cython")


def test_forced_compiled_backend_without_extension(monkeypatch):
    monkeypatch.setattr(kernels, "HAVE_COMPILED", False)
    with pytest.raises(RuntimeError):
        kernels.enumerate_points([0], [1], 1, [], 1, backend="cython")
    assert kernels.enumerate_points([0], [1], 1, [], 1) == [(1,)]
