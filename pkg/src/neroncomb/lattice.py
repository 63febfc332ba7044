"""Exact integer linear algebra.

Matrices are plain lists of lists of Python ints, so entries never overflow.
The Smith normal form routine returns unimodular transforms ``U`` and ``V``
with ``U @ A @ V == D``; everything else in this module (cokernels, lattice
membership, coset reduction) is read off from that decomposition.

Canonical coset reduction
-------------------------
For a lattice ``L`` spanned by the columns of ``A`` with ``U A V = D`` and
nonzero diagonal ``d_1 | d_2 | ... | d_r``, a vector ``v`` is sent to
``w = U v``.  In ``w``-coordinates ``L`` is exactly
``d_1 Z + ... + d_r Z + 0 + ... + 0``, so replacing ``w_i`` by ``w_i mod d_i``
(least non-negative residue) for ``i < r`` and leaving the remaining coordinates
alone picks one point per coset.  :func:`reduce` returns ``U^{-1}`` of that
point.  ``U`` is a deterministic function of ``A``, hence so are the labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod

from .errors import DimensionMismatch

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    if any(len(row) != inner for row in a):
        raise DimensionMismatch("inner dimensions differ")
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def matvec(a: Matrix, v) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Matrix, rows: int | None = None, cols: int | None = None) -> Matrix:
    if rows is None:
        rows = len(a)
    if cols is None:
        cols = len(a[0]) if a else 0
    return [[a[i][j] for i in range(rows)] for j in range(cols)]


def determinant(a: Matrix) -> int:
    """Bareiss fraction-free elimination; exact for integer input."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    U: Matrix
    D: Matrix
    V: Matrix
    U_inv: Matrix
    rows: int
    cols: int

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(self.rows, self.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def smith_normal_form(a: Matrix, rows: int | None = None, cols: int | None = None) -> SmithForm:
    """Smith normal form ``U A V = D`` with non-negative divisibility-chain diagonal.

    ``rows``/``cols`` only matter for matrices with a zero dimension, where the
    shape cannot be read off the nested lists.
    """
    if rows is None:
        rows = len(a)
    if cols is None:
        cols = len(a[0]) if rows else 0
    if any(len(r) != cols for r in a):
        raise DimensionMismatch("ragged matrix")
    d = [list(map(int, r)) for r in a]
    u = identity(rows)
    u_inv = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        if i != j:
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]
            for r in u_inv:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i != j:
            for r in d:
                r[i], r[j] = r[j], r[i]
            for r in v:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        if c:
            rd, rs = d[dst], d[src]
            for k in range(cols):
                rd[k] += c * rs[k]
            ud, us = u[dst], u[src]
            for k in range(rows):
                ud[k] += c * us[k]
            for r in u_inv:
                r[src] -= c * r[dst]

    def add_col(dst, src, c):
        if c:
            for r in d:
                r[dst] += c * r[src]
            for r in v:
                r[dst] += c * r[src]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = d[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = d[t][t]
            clean = True
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    if d[i][t]:
                        clean = False
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    if d[t][j]:
                        clean = False
            if not clean:
                # move the smallest leftover in row/column t onto the pivot
                cand = [(abs(d[i][t]), 0, i) for i in range(t + 1, rows) if d[i][t]]
                cand += [(abs(d[t][j]), 1, j) for j in range(t + 1, cols) if d[t][j]]
                _, kind, idx = min(cand)
                if kind == 0:
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
            for r in u_inv:
                r[t] = -r[t]
        t += 1
    return SmithForm(U=u, D=d, V=v, U_inv=u_inv, rows=rows, cols=cols)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """``Z^free_rank`` times ``Z/f_1 x ... x Z/f_k`` with ``f_1 | ... | f_k``, ``f_i >= 2``."""

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        fs = self.invariant_factors
        if any(f < 2 for f in fs) or any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError(f"not a divisibility chain of factors >= 2: {fs}")

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def torsion_order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def order(self) -> int:
        if self.free_rank:
            raise ValueError("infinite group has no finite order")
        return self.torsion_order

    def torsion(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(self.invariant_factors, 0)

    def __str__(self):
        parts = [f"Z/{f}" for f in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "0"


def cokernel(a: Matrix, rows: int | None = None, cols: int | None = None) -> FiniteAbelianGroup:
    """Structure of ``Z^rows / (column span of a)``."""
    snf = smith_normal_form(a, rows, cols)
    diag = snf.diagonal
    factors = tuple(x for x in diag if x > 1)
    return FiniteAbelianGroup(factors, snf.rows - snf.rank)


@dataclass(frozen=True)
class Lattice:
    """Sublattice of ``Z^dim`` spanned by the given generators."""

    dim: int
    generators: tuple[tuple[int, ...], ...]
    snf: SmithForm = field(repr=False, compare=False)

    @classmethod
    def from_generators(cls, generators, dim: int | None = None) -> Lattice:
        gens = tuple(tuple(int(x) for x in g) for g in generators)
        if dim is None:
            if not gens:
                raise ValueError("dimension needed for an empty generator list")
            dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise DimensionMismatch("generators have inconsistent length")
        mat = [[g[i] for g in gens] for i in range(dim)]
        return cls(dim, gens, smith_normal_form(mat, dim, len(gens)))

    @property
    def rank(self) -> int:
        return self.snf.rank

    def _check(self, v):
        if len(v) != self.dim:
            raise DimensionMismatch(f"vector of length {len(v)} in a lattice of dimension {self.dim}")

    def quotient(self) -> FiniteAbelianGroup:
        """``Z^dim / L``."""
        diag = self.snf.diagonal
        return FiniteAbelianGroup(tuple(x for x in diag if x > 1), self.dim - self.rank)

    def coordinates(self, v) -> list[int]:
        """``U v``: the coordinates in which the lattice is diagonal."""
        self._check(v)
        return matvec(self.snf.U, v)

    def contains(self, v) -> bool:
        w = self.coordinates(v)
        diag = self.snf.diagonal
        for i, x in enumerate(w):
            di = diag[i] if i < len(diag) else 0
            if di == 0:
                if x != 0:
                    return False
            elif x % di:
                return False
        return True

    @cached_property
    def key_rows(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        """``(row of U, modulus)`` for the coordinates that survive reduction.

        Rows with diagonal entry 1 always reduce to 0 and are dropped; modulus 0
        marks a free coordinate.
        """
        diag = self.snf.diagonal
        out = []
        for i, row in enumerate(self.snf.U):
            m = diag[i] if i < len(diag) else 0
            if m != 1:
                out.append((tuple(row), m))
        return tuple(out)

    def coset_key(self, v) -> tuple[int, ...]:
        """Compact canonical label of ``v + L``: the non-trivial reduced ``U v`` coordinates."""
        self._check(v)
        out = []
        for row, m in self.key_rows:
            x = sum(a * b for a, b in zip(row, v))
            out.append(x % m if m else x)
        return tuple(out)

    def coset_keys(self, vectors) -> list[tuple[int, ...]]:
        """:meth:`coset_key` for many vectors at once (compiled when available)."""
        from .kernels import coset_keys

        return coset_keys(self.key_rows, vectors)

    def reduce(self, v) -> tuple[int, ...]:
        """Canonical representative of ``v + L``; see the module docstring."""
        self._check(v)
        w = matvec(self.snf.U, v)
        diag = self.snf.diagonal
        w = [(x % diag[i]) if i < len(diag) and diag[i] else x for i, x in enumerate(w)]
        return tuple(matvec(self.snf.U_inv, w))


def contains(lat: Lattice, v) -> bool:
    return lat.contains(v)


def reduce(lat: Lattice, v) -> tuple[int, ...]:
    return lat.reduce(v)
