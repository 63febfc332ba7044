from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neroncomb import lattice
from neroncomb.errors import DimensionMismatch


def matrices(max_rows=4, max_cols=4, bound=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def test_snf_diag_2_3():
    snf = lattice.smith_normal_form([[2, 0], [0, 3]])
    assert snf.diagonal == [1, 6]


def test_snf_laplacian_of_triple_edge():
    snf = lattice.smith_normal_form([[3, -3], [-3, 3]])
    assert snf.diagonal == [3, 0]
    assert lattice.cokernel([[3, -3], [-3, 3]]) == lattice.FiniteAbelianGroup((3,), 1)


def test_snf_empty_shapes():
    snf = lattice.smith_normal_form([], 0, 3)
    assert snf.diagonal == [] and snf.rank == 0
    assert lattice.cokernel([[], []], 2, 0) == lattice.FiniteAbelianGroup((), 2)


def test_ragged_matrix_rejected():
    with pytest.raises(DimensionMismatch):
        lattice.smith_normal_form([[1, 2], [3]])


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_snf_decomposition(a):
    rows, cols = len(a), len(a[0])
    snf = lattice.smith_normal_form(a)
    assert lattice.matmul(lattice.matmul(snf.U, a), snf.V) == snf.D
    assert abs(lattice.determinant(snf.U)) == 1
    assert abs(lattice.determinant(snf.V)) == 1
    assert lattice.matmul(snf.U, snf.U_inv) == lattice.identity(rows)
    diag = snf.diagonal
    for i in range(rows):
        for j in range(cols):
            if i != j:
                assert snf.D[i][j] == 0
    nonzero = [x for x in diag if x]
    assert all(x > 0 for x in nonzero)
    assert diag[: len(nonzero)] == nonzero
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


@settings(max_examples=100, deadline=None)
@given(matrices(3, 3, 4))
def test_determinant_matches_cofactor_expansion(a):
    n = min(len(a), len(a[0]))
    sq = [row[:n] for row in a[:n]]

    def cofactor(m):
        if len(m) == 1:
            return m[0][0]
        return sum((-1) ** j * m[0][j] * cofactor([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(len(m)))

    assert lattice.determinant(sq) == cofactor(sq)


def test_group_validation_and_str():
    assert str(lattice.FiniteAbelianGroup((2, 4), 1)) == "Z/2 x Z/4 x Z"
    assert str(lattice.FiniteAbelianGroup()) == "0"
    assert str(lattice.FiniteAbelianGroup((), 2)) == "Z^2"
    with pytest.raises(ValueError):
        lattice.FiniteAbelianGroup((4, 2))
    with pytest.raises(ValueError):
        lattice.FiniteAbelianGroup((1,))
    with pytest.raises(ValueError):
        lattice.FiniteAbelianGroup((3,), 1).order
    assert lattice.FiniteAbelianGroup((3,), 1).torsion().order == 3


small_gens = st.integers(1, 4).flatmap(
    lambda dim: st.lists(
        st.lists(st.integers(-3, 3), min_size=dim, max_size=dim).map(tuple), min_size=1, max_size=3
    ).map(lambda gens: (dim, gens))
)


def _brute_span(gens, dim, coeff_bound, box):
    """Lattice points within ``box`` reachable with bounded coefficients."""
    out = set()
    for cs in product(range(-coeff_bound, coeff_bound + 1), repeat=len(gens)):
        v = tuple(sum(c * g[i] for c, g in zip(cs, gens)) for i in range(dim))
        if all(abs(x) <= box for x in v):
            out.add(v)
    return out


@settings(max_examples=60, deadline=None)
@given(small_gens)
def test_contains_matches_bounded_search(data):
    dim, gens = data
    lat = lattice.Lattice.from_generators(gens, dim)
    box = 2
    reach = _brute_span(gens, dim, 6, box)
    for v in product(range(-box, box + 1), repeat=dim):
        if v in reach:
            assert lat.contains(v)
        elif lat.contains(v):
            # in the lattice but needs larger coefficients: confirm via a wider search
            assert v in _brute_span(gens, dim, 12, box)


@settings(max_examples=100, deadline=None)
@given(small_gens, st.lists(st.integers(-9, 9), min_size=4, max_size=4), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_reduce_idempotent_and_coset_constant(data, vec, coeffs):
    dim, gens = data
    lat = lattice.Lattice.from_generators(gens, dim)
    v = vec[:dim]
    r = lat.reduce(v)
    assert lat.reduce(r) == r
    assert lat.contains([a - b for a, b in zip(v, r)])
    moved = [x + sum(c * g[i] for c, g in zip(coeffs, gens)) for i, x in enumerate(v)]
    assert lat.reduce(moved) == r
    assert lat.coset_key(moved) == lat.coset_key(v)
    assert lat.coset_keys([v, moved]) == [lat.coset_key(v)] * 2


@settings(max_examples=100, deadline=None)
@given(small_gens, st.lists(st.integers(-9, 9), min_size=4, max_size=4), st.lists(st.integers(-9, 9), min_size=4, max_size=4))
def test_coset_key_separates_cosets(data, a, b):
    dim, gens = data
    lat = lattice.Lattice.from_generators(gens, dim)
    a, b = a[:dim], b[:dim]
    same = lat.contains([x - y for x, y in zip(a, b)])
    assert (lat.coset_key(a) == lat.coset_key(b)) == same
    assert (lat.reduce(a) == lat.reduce(b)) == same


def test_quotient_and_dimension_checks():
    lat = lattice.Lattice.from_generators([(2, 0), (0, 3)])
    assert lat.quotient() == lattice.FiniteAbelianGroup((6,), 0)
    with pytest.raises(DimensionMismatch):
        lat.contains((1, 2, 3))
    with pytest.raises(DimensionMismatch):
        lattice.Lattice.from_generators([(1, 2), (1,)])
    assert lattice.contains(lat, (4, 3)) and not lattice.contains(lat, (1, 0))
    assert lattice.reduce(lat, (7, 7)) == lat.reduce((7, 7))


def test_examples_on_the_triple_edge_vine():
    lam = lattice.Lattice.from_generators([(-3, 3), (3, -3)])
    assert lam.contains((0, 0)) and lam.contains((-3, 3))
    assert not lam.contains((1, -1))
    assert lam.reduce((1, -1)) == lam.reduce((-2, 2))
    assert lam.reduce((1, -1)) != lam.reduce((0, 0))
    assert lam.reduce((6, -6)) == lam.reduce((0, 0))


def test_identity_and_zero_matrices():
    assert lattice.smith_normal_form(lattice.identity(2)).D == lattice.identity(2)
    assert lattice.smith_normal_form([[0, 0], [0, 0]]).D == [[0, 0], [0, 0]]
    assert lattice.cokernel(lattice.identity(3)) == lattice.FiniteAbelianGroup()
    assert lattice.cokernel([[3]]) == lattice.FiniteAbelianGroup((3,))
