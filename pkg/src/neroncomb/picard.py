"""Twisters, degree class groups and balanced multidegrees.

Bounds of the Basic Inequality are exact: internally every bound is multiplied
by ``2(2g - 2)`` so that ``m_Z(d) <= d_Z <= M_Z(d)`` becomes an inequality
between integers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor, gcd
from typing import Iterable, Sequence

from . import graph, kernels, lattice
from .errors import (
    CurveMismatch,
    DimensionMismatch,
    DisconnectedNormalization,
    EmptyResult,
    GenusTooSmall,
    NonZeroSumGenerator,
    NotDGeneral,
    NotQuasistableCurve,
    NotSemibalanced,
    NotSemistableCurve,
    NotStableCurve,
    TotalMismatch,
)
from .graph import BlowUpContext, DualGraph

NOT_SEMIBALANCED = "not_semibalanced"
SEMIBALANCED = "semibalanced"
BALANCED = "balanced"
STABLY_BALANCED = "stably_balanced"
LEVELS = (NOT_SEMIBALANCED, SEMIBALANCED, BALANCED, STABLY_BALANCED)


@dataclass(frozen=True)
class Multidegree:
    values: tuple[int, ...]
    curve: DualGraph | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))
        if self.curve is not None and len(self.values) != self.curve.vertex_count:
            raise DimensionMismatch(
                f"{len(self.values)} entries for a curve with {self.curve.vertex_count} components"
            )

    @property
    def total(self) -> int:
        return sum(self.values)

    def restrict(self, z: Iterable[int]) -> int:
        return sum(self.values[i] for i in z)

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __str__(self):
        return "(" + ",".join(map(str, self.values)) + ")"


def _values(d) -> tuple[int, ...]:
    return d.values if isinstance(d, Multidegree) else tuple(int(x) for x in d)


# ---------------------------------------------------------------- twisters


def intersection_matrix(curve: DualGraph) -> lattice.Matrix:
    """``k_ij`` = nodes joining ``C_i`` and ``C_j``; diagonal makes every row sum to zero."""
    curve.require_connected()
    return [[-x for x in row] for row in graph.laplacian(curve)]


def twister_multidegree(curve: DualGraph, coeffs: Sequence[int]) -> Multidegree:
    if len(coeffs) != curve.vertex_count:
        raise DimensionMismatch(f"{len(coeffs)} coefficients for {curve.vertex_count} components")
    return Multidegree(tuple(lattice.matvec(intersection_matrix(curve), coeffs)), curve)


@dataclass(frozen=True, eq=False)
class DegreeClassGroup:
    """Zero-sum multidegrees modulo the twister lattice.

    Classes of total degree ``d`` are identified with the group by translation
    by ``(d, 0, ..., 0)``; :meth:`label` is the lattice-reduced vector of that
    translate.
    """

    curve: DualGraph
    lattice: lattice.Lattice
    group: lattice.FiniteAbelianGroup
    custom: bool = False

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.group.invariant_factors

    def _vec(self, d) -> tuple[int, ...]:
        if isinstance(d, Multidegree) and d.curve is not None and d.curve != self.curve:
            raise CurveMismatch("multidegree belongs to a different curve")
        v = _values(d)
        if len(v) != self.curve.vertex_count:
            raise DimensionMismatch(f"{len(v)} entries for {self.curve.vertex_count} components")
        return v

    def base(self, total: int) -> tuple[int, ...]:
        return (total,) + (0,) * (self.curve.vertex_count - 1)

    def label(self, d) -> tuple[int, ...]:
        v = self._vec(d)
        base = self.base(sum(v))
        return self.lattice.reduce([a - b for a, b in zip(v, base)])

    def key(self, d) -> tuple[int, ...]:
        """Cheap canonical key; equal iff same class (for equal totals)."""
        return self.lattice.coset_key(self._vec(d))

    def keys(self, points) -> list[tuple[int, ...]]:
        """:meth:`key` for many multidegrees, through the compiled kernel when built."""
        return self.lattice.coset_keys([self._vec(p) for p in points])

    def from_label(self, label, total: int) -> tuple[int, ...]:
        """A multidegree of the given total in the class with this label."""
        return tuple(a + b for a, b in zip(label, self.base(total)))

    def contains(self, t) -> bool:
        return self.lattice.contains(self._vec(t))

    def are_equivalent(self, d1, d2) -> bool:
        v1, v2 = self._vec(d1), self._vec(d2)
        if sum(v1) != sum(v2):
            raise TotalMismatch(f"totals {sum(v1)} and {sum(v2)} differ")
        return self.lattice.contains([a - b for a, b in zip(v1, v2)])


def degree_class_group(curve: DualGraph, generators=None) -> DegreeClassGroup:
    curve.require_connected()
    n = curve.vertex_count
    if generators is None:
        mat = intersection_matrix(curve)
        gens = [tuple(mat[i][j] for i in range(n)) for j in range(n)]
        custom = False
    else:
        gens = [tuple(int(x) for x in g) for g in generators]
        for g in gens:
            if len(g) != n:
                raise DimensionMismatch(f"generator {g} has {len(g)} entries, curve has {n} components")
            if sum(g):
                raise NonZeroSumGenerator(f"generator {g} sums to {sum(g)}")
        custom = True
    lat = lattice.Lattice.from_generators(gens, n)
    quot = lat.quotient()
    # Z^n / L = Z (total degree) + Z0 / L because every generator has zero sum
    group = lattice.FiniteAbelianGroup(quot.invariant_factors, quot.free_rank - 1)
    return DegreeClassGroup(curve, lat, group, custom)


def are_equivalent(dcg: DegreeClassGroup, d1, d2) -> bool:
    return dcg.are_equivalent(d1, d2)


@lru_cache(maxsize=4096)
def _dcg_cached(curve: DualGraph) -> DegreeClassGroup:
    return degree_class_group(curve)


# ---------------------------------------------------------- basic inequality


@lru_cache(maxsize=4096)
def _subsets(curve: DualGraph):
    """``(members, k_Z, w_Z, connected)`` for every proper non-empty subcurve, by bitmask."""
    n = curve.vertex_count
    w_v = curve.canonical_degrees
    val = curve.valence
    mult = [[0] * n for _ in range(n)]
    nbr = [0] * n
    for u, v in curve.edges:
        if u != v:
            mult[u][v] += 1
            mult[v][u] += 1
            nbr[u] |= 1 << v
            nbr[v] |= 1 << u
    size = 1 << n
    k = [0] * size
    w = [0] * size
    out = []
    for mask in range(1, size):
        low = mask & -mask
        v = low.bit_length() - 1
        prev = mask ^ low
        inner = sum(mult[v][u] for u in range(n) if prev >> u & 1) if prev & nbr[v] else 0
        k[mask] = k[prev] + val[v] - 2 * inner
        w[mask] = w[prev] + w_v[v]
        if mask == size - 1:
            break
        # connectivity by flood fill inside the mask
        reach = low
        while True:
            grow = reach
            rest = reach
            while rest:
                b = rest & -rest
                grow |= nbr[b.bit_length() - 1] & mask
                rest ^= b
            if grow == reach:
                break
            reach = grow
        members = tuple(i for i in range(n) if mask >> i & 1)
        out.append((members, k[mask], w[mask], reach == mask))
    return tuple(out)


def _require_genus(curve: DualGraph) -> int:
    g = graph.genus(curve)
    if g < 2:
        raise GenusTooSmall(f"genus {g} < 2")
    return g


def _scaled(g: int, d: int, k: int, w: int) -> tuple[int, int, int]:
    """``(lower, upper, scale)`` with ``m = lower/scale`` and ``M = upper/scale``."""
    return 2 * d * w - (2 * g - 2) * k, 2 * d * w + (2 * g - 2) * k, 4 * g - 4


def basic_bounds(curve: DualGraph, d: int, z: Iterable[int]) -> tuple[Fraction, Fraction]:
    g = _require_genus(curve)
    st = graph.subcurve_stats(curve, z)
    m = Fraction(d * st.w, 2 * g - 2) - Fraction(st.k, 2)
    return m, m + st.k


@dataclass(frozen=True)
class BalancedReport:
    multidegree: Multidegree
    level: str
    #: subcurve witnessing the first failed level, as vertex indices
    witness: tuple[int, ...] | None = None
    #: (m_Z(d), d_Z, M_Z(d)) for the witness
    bounds: tuple[Fraction, int, Fraction] | None = None
    reason: str = ""

    def at_least(self, level: str) -> bool:
        return LEVELS.index(self.level) >= LEVELS.index(level)


def _require_semistable(curve: DualGraph) -> graph.Classification:
    cls = graph.classify_curve(curve)
    if not cls.is_semistable:
        raise NotSemistableCurve(f"curve is {cls.kind}, not semistable of genus >= 2")
    return cls


def classify_multidegree(curve: DualGraph, d) -> BalancedReport:
    cls = _require_semistable(curve)
    g = cls.genus
    vals = _values(d)
    if len(vals) != curve.vertex_count:
        raise DimensionMismatch(f"{len(vals)} entries for {curve.vertex_count} components")
    md = Multidegree(vals, curve)
    total = md.total
    exc = set(cls.exceptional)

    def bounds(k, w):
        lower, upper, scale = _scaled(g, total, k, w)
        return Fraction(lower, scale), Fraction(upper, scale)

    tight = None
    for members, k, w, _ in _subsets(curve):
        dz = md.restrict(members)
        lower, upper, scale = _scaled(g, total, k, w)
        if not lower <= scale * dz <= upper:
            m, mm = bounds(k, w)
            return BalancedReport(md, NOT_SEMIBALANCED, members, (m, dz, mm), "basic inequality fails")
        if tight is None and scale * dz == lower and not set(range(curve.vertex_count)) - set(members) <= exc:
            tight = (members, bounds(k, w), dz)
    for e in cls.exceptional:
        if not 0 <= vals[e] <= 1:
            return BalancedReport(
                md, NOT_SEMIBALANCED, (e,), (Fraction(0), vals[e], Fraction(1)),
                "exceptional component of degree outside [0, 1]",
            )
    for e in cls.exceptional:
        if vals[e] != 1:
            return BalancedReport(
                md, SEMIBALANCED, (e,), (Fraction(0), vals[e], Fraction(1)),
                "exceptional component of degree 0",
            )
    if tight is not None:
        members, (m, mm), dz = tight
        return BalancedReport(
            md, BALANCED, members, (m, dz, mm),
            "lower bound attained on a subcurve whose complement is not exceptional",
        )
    return BalancedReport(md, STABLY_BALANCED)


def _bfs_order(curve: DualGraph) -> list[int]:
    seen = [False] * curve.vertex_count
    order = []
    adj = [[] for _ in range(curve.vertex_count)]
    for u, v in curve.edges:
        if u != v:
            adj[u].append(v)
            adj[v].append(u)
    for start in range(curve.vertex_count):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in sorted(adj[x]):
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
    return order


@lru_cache(maxsize=4096)
def _domain_setup(curve: DualGraph, all_subcurves: bool):
    """Degree-independent part of :func:`basic_domain_points`."""
    cls = _require_semistable(curve)
    n = curve.vertex_count
    order = _bfs_order(curve)
    pos = {v: i for i, v in enumerate(order)}
    full = set(range(n))
    wanted = set()
    for members, k, w, connected in _subsets(curve):
        if all_subcurves or connected:
            wanted.add(members)
            wanted.add(tuple(sorted(full - set(members))))
    subs = tuple(
        (tuple(pos[v] for v in members), k, w)
        for members, k, w, _ in _subsets(curve)
        if members in wanted
    )
    return cls.genus, frozenset(cls.exceptional), order, pos, subs


def basic_domain_points(
    curve: DualGraph,
    d: int,
    level: str = BALANCED,
    all_subcurves: bool = False,
    backend: str | None = None,
) -> list[tuple[int, ...]]:
    """Integer points of the translated basic polytope at ``level`` (lexicographic).

    The box comes from the single-component inequalities, then the search is
    cut by every connected subcurve and its complement, or by every subcurve
    when ``all_subcurves`` is set.  ``stably_balanced`` filters the balanced
    points afterwards against all subcurves.
    """
    if level not in (SEMIBALANCED, BALANCED, STABLY_BALANCED):
        raise ValueError(f"unknown level {level!r}")
    g, exc, order, pos, subs = _domain_setup(curve, all_subcurves)
    n = curve.vertex_count
    w_v = curve.canonical_degrees
    lo, hi = [], []
    for v in range(n):
        if v in exc:
            lo.append(0 if level == SEMIBALANCED else 1)
            hi.append(1)
        else:
            lower, upper, scale = _scaled(g, d, curve.valence[v], w_v[v])
            lo.append(-((-lower) // scale))
            hi.append(upper // scale)
    two_d = 2 * d
    c = 2 * g - 2
    cons = [(members, two_d * w - c * k, two_d * w + c * k) for members, k, w in subs]
    scale = 4 * g - 4
    pts = kernels.enumerate_points(
        [lo[v] for v in order], [hi[v] for v in order], d, cons, scale, backend=backend
    )
    out = sorted(tuple(p[pos[v]] for v in range(n)) for p in pts)
    if level == STABLY_BALANCED:
        out = [p for p in out if classify_multidegree(curve, p).level == STABLY_BALANCED]
    return out


def enumerate_balanced(curve: DualGraph, d: int, level: str = BALANCED, all_subcurves: bool = False) -> list[Multidegree]:
    if level == "stable":
        level = STABLY_BALANCED
    return [Multidegree(p, curve) for p in basic_domain_points(curve, d, level, all_subcurves)]


def semibalanced_representative(curve: DualGraph, seed) -> list[Multidegree]:
    """All semibalanced multidegrees equivalent to ``seed`` (never empty on a quasistable curve)."""
    cls = graph.classify_curve(curve)
    if not cls.is_quasistable:
        raise NotQuasistableCurve(f"curve is {cls.kind}, not quasistable")
    seed = _values(seed)
    dcg = _dcg_cached(curve)
    key = dcg.key(seed)
    pts = basic_domain_points(curve, sum(seed), SEMIBALANCED)
    out = [Multidegree(p, curve) for p, kp in zip(pts, dcg.keys(pts)) if kp == key]
    if not out:
        raise EmptyResult(f"no semibalanced representative for {seed}")
    return out


# ------------------------------------------------------------ d-generality


def coprimality(d: int, g: int) -> bool:
    if g < 2:
        raise GenusTooSmall(f"genus {g} < 2")
    return gcd(d - g + 1, 2 * g - 2) == 1


def _require_stable(curve: DualGraph) -> graph.Classification:
    cls = graph.classify_curve(curve)
    if not cls.is_stable:
        raise NotStableCurve(f"curve is {cls.kind}, not stable")
    return cls


@dataclass(frozen=True)
class DGenerality:
    general: bool
    degree: int
    balanced: tuple[Multidegree, ...]
    class_count: int
    group_order: int
    #: two equivalent balanced multidegrees, when the map to classes is not injective
    witness_pair: tuple[Multidegree, Multidegree] | None = None
    #: a balanced multidegree that is not stably balanced, with its report
    witness_unstable: BalancedReport | None = None

    def __bool__(self):
        return self.general


def is_d_general(curve: DualGraph, d: int) -> DGenerality:
    """Whether balanced multidegrees of total ``d`` biject onto the degree-``d`` classes."""
    _require_stable(curve)
    dcg = _dcg_cached(curve)
    pts = basic_domain_points(curve, d, BALANCED)
    seen: dict[tuple, tuple] = {}
    pair = None
    for p, key in zip(pts, dcg.keys(pts)):
        if key in seen and pair is None:
            pair = (Multidegree(seen[key], curve), Multidegree(p, curve))
        seen.setdefault(key, p)
    unstable = None
    for p in pts:
        rep = classify_multidegree(curve, p)
        if rep.level != STABLY_BALANCED:
            unstable = rep
            break
    general = len(pts) == dcg.order == len(seen)
    return DGenerality(
        general=general,
        degree=d,
        balanced=tuple(Multidegree(p, curve) for p in pts),
        class_count=len(seen),
        group_order=dcg.order,
        witness_pair=pair,
        witness_unstable=unstable,
    )


# -------------------------------------------------------- blow-up bijections


@dataclass(frozen=True)
class RhoPair:
    blown_rep: tuple[int, ...]
    blown_label: tuple[int, ...]
    normalized_rep: tuple[int, ...]
    normalized_label: tuple[int, ...]


@dataclass(frozen=True)
class RhoTable:
    node_set: tuple[int, ...]
    degree: int
    pairs: tuple[RhoPair, ...]
    normalized_order: int

    @property
    def bijective(self) -> bool:
        n = len(self.pairs)
        return (
            n == self.normalized_order
            and len({p.blown_label for p in self.pairs}) == n
            and len({p.normalized_label for p in self.pairs}) == n
        )

    def forward(self) -> dict:
        return {p.blown_label: p.normalized_label for p in self.pairs}

    def inverse(self) -> dict:
        return {p.normalized_label: p.blown_label for p in self.pairs}


def require_d_general(curve: DualGraph, d: int) -> DGenerality:
    res = is_d_general(curve, d)
    if not res.general:
        raise NotDGeneral(f"curve is not {d}-general")
    return res


def rho_map(ctx: BlowUpContext, d: int, check_general: bool = True) -> RhoTable:
    """Restriction of balanced representatives on ``Y_S`` to ``X_S^nu``, as a table of classes."""
    _require_stable(ctx.base)
    if check_general:
        require_d_general(ctx.base, d)
    if not ctx.normalized.is_connected:
        raise DisconnectedNormalization(f"normalization at {list(ctx.node_set)} is disconnected")
    gamma = ctx.base.vertex_count
    dcg_y = _dcg_cached(ctx.blown)
    dcg_x = _dcg_cached(ctx.normalized)
    pairs = []
    for p in basic_domain_points(ctx.blown, d, BALANCED):
        q = p[:gamma]
        pairs.append(RhoPair(p, dcg_y.label(p), q, dcg_x.label(q)))
    return RhoTable(ctx.node_set, d, tuple(pairs), dcg_x.order)


@dataclass(frozen=True)
class SupportPartition:
    degree: int
    blocks: dict  # node set -> tuple of semibalanced multidegrees on the full blow-up
    class_count: int
    group_order: int

    @property
    def sizes(self) -> dict:
        return {s: len(v) for s, v in self.blocks.items()}


def partition_by_support(curve: DualGraph, d: int, check_general: bool = True) -> SupportPartition:
    """Group the classes of the blow-up at all nodes by where their semibalanced representative has degree 1."""
    _require_stable(curve)
    if check_general:
        require_d_general(curve, d)
    full = graph.blow_up(curve, range(curve.edge_count))
    y = full.blown
    dcg = _dcg_cached(y)
    gamma = curve.vertex_count
    pts = basic_domain_points(y, d, SEMIBALANCED)
    blocks: dict = {}
    for p in pts:
        s = tuple(e for i, e in enumerate(full.node_set) if p[gamma + i] == 1)
        blocks.setdefault(s, []).append(p)
    ordered = {s: tuple(blocks[s]) for s in sorted(blocks, key=lambda s: (len(s), s))}
    return SupportPartition(d, ordered, len(set(dcg.keys(pts))), dcg.order)


def balanced_model(curve: DualGraph, d) -> tuple[DualGraph, Multidegree]:
    """Contract the exceptional components where ``d`` has degree 0."""
    cls = graph.classify_curve(curve)
    if not cls.is_quasistable:
        raise NotQuasistableCurve(f"curve is {cls.kind}, not quasistable")
    vals = _values(d)
    report = classify_multidegree(curve, vals)
    if not report.at_least(SEMIBALANCED):
        raise NotSemibalanced(f"{vals} is not semibalanced")
    zero = [e for e in cls.exceptional if vals[e] == 0]
    if not zero:
        return curve, Multidegree(vals, curve)
    contracted = graph.contract_exceptional(curve, zero)
    keep = [v for v in range(curve.vertex_count) if v not in set(zero)]
    md = Multidegree(tuple(vals[v] for v in keep), contracted)
    return contracted, md


# --------------------------------------------------------------- counting


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def count_picard_models(g: int) -> tuple[int, list[int]]:
    """Isomorphism classes of degree-d compactified Picard varieties with coprime ``d``.

    Degrees ``d`` and ``d'`` give the same model iff ``d +- d'`` is a multiple of
    ``2g - 2``.  The count is enumerated; the closed formula is only asserted.
    """
    if g < 3:
        raise GenusTooSmall(f"genus {g} < 3")
    period = 2 * g - 2
    reps = []
    seen = set()
    for d in range(period):
        if not coprimality(d, g) or d in seen:
            continue
        orbit = {d % period, (-d) % period}
        seen |= orbit
        reps.append(min(orbit))
    expected = euler_phi(g - 1) if g % 2 else euler_phi(g - 1) // 2
    assert len(reps) == expected, (g, reps, expected)
    return len(reps), sorted(reps)
