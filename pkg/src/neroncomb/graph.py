"""Dual graphs of nodal curves.

A curve is a connected multigraph: one vertex per irreducible component,
labelled by its geometric genus, and one edge per node.  Loops are nodes lying
on a single component.  Subcurves are given as iterables of vertex indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from . import lattice
from .errors import (
    BadEdgeIndex,
    DisconnectedGraph,
    DuplicateVertexId,
    EmptySubcurve,
)

STABLE = "stable"
QUASISTABLE = "quasistable"
SEMISTABLE = "semistable"
NODAL_ONLY = "nodal_only"


@dataclass(frozen=True, eq=False)
class DualGraph:
    """Genus-labelled multigraph.  Vertex order fixes multidegree coordinates.

    Connectivity is *not* enforced here so that partial normalizations can be
    represented; :func:`build_curve` and every curve-valued constructor except
    :func:`partial_normalization` insist on it.
    """

    ids: tuple[str, ...]
    genera: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    exceptional_flags: tuple[bool, ...] = None

    def __post_init__(self):
        if len(self.ids) != len(self.genera):
            raise ValueError("ids and genera differ in length")
        if not self.ids:
            raise ValueError("a curve needs at least one component")
        if len(set(self.ids)) != len(self.ids):
            seen = set()
            dup = next(i for i in self.ids if i in seen or seen.add(i))
            raise DuplicateVertexId(f"duplicate vertex id {dup!r}")
        if any(g < 0 for g in self.genera):
            raise ValueError("geometric genus must be non-negative")
        n = len(self.ids)
        for idx, (u, v) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise BadEdgeIndex(f"edge {idx} = ({u}, {v}) with {n} vertices")
        if self.exceptional_flags is None:
            object.__setattr__(self, "exceptional_flags", (False,) * n)
        elif len(self.exceptional_flags) != n:
            raise ValueError("exceptional_flags has the wrong length")

    def _key(self):
        return (self.ids, self.genera, self.edges, self.exceptional_flags)

    def __eq__(self, other):
        return isinstance(other, DualGraph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"DualGraph(ids={self.ids}, genera={self.genera}, edges={self.edges})"

    @property
    def vertex_count(self) -> int:
        return len(self.ids)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def vertices(self):
        return list(zip(self.ids, self.genera))

    @cached_property
    def components(self) -> list[list[int]]:
        """Connected components of the graph, each sorted, in order of smallest vertex."""
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        groups: dict[int, list[int]] = {}
        for x in range(self.vertex_count):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values())

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1

    @cached_property
    def loops(self) -> tuple[int, ...]:
        """Number of loops at each vertex."""
        out = [0] * self.vertex_count
        for u, v in self.edges:
            if u == v:
                out[u] += 1
        return tuple(out)

    @cached_property
    def valence(self) -> tuple[int, ...]:
        """Non-loop edge endpoints at each vertex (``k`` of the single component)."""
        out = [0] * self.vertex_count
        for u, v in self.edges:
            if u != v:
                out[u] += 1
                out[v] += 1
        return tuple(out)

    @cached_property
    def canonical_degrees(self) -> tuple[int, ...]:
        """Degree of the dualizing sheaf on each component: ``2 g_v - 2 + 2 loops + valence``."""
        return tuple(
            2 * g - 2 + 2 * lp + k for g, lp, k in zip(self.genera, self.loops, self.valence)
        )

    def vertex_index(self, vid: str) -> int:
        try:
            return self.ids.index(vid)
        except ValueError:
            raise BadEdgeIndex(f"unknown vertex id {vid!r}") from None

    def require_connected(self):
        if not self.is_connected:
            raise DisconnectedGraph(
                f"curve has {len(self.components)} connected components"
            )


def build_curve(vertices: Sequence[tuple[str, int]], edges: Iterable[tuple[int, int]]) -> DualGraph:
    if not vertices:
        raise ValueError("at least one vertex is required")
    curve = DualGraph(
        ids=tuple(str(v[0]) for v in vertices),
        genera=tuple(int(v[1]) for v in vertices),
        edges=tuple((int(u), int(v)) for u, v in edges),
    )
    curve.require_connected()
    return curve


def vine(k: int, genera: tuple[int, int] = (0, 0)) -> DualGraph:
    """Two components meeting in ``k`` nodes."""
    return build_curve([("C1", genera[0]), ("C2", genera[1])], [(0, 1)] * k)


def betti(curve: DualGraph) -> int:
    return curve.edge_count - curve.vertex_count + len(curve.components)


def genus(curve: DualGraph) -> int:
    """Arithmetic genus ``sum g_v + b_1``."""
    curve.require_connected()
    return sum(curve.genera) + betti(curve)


def is_compact_type(curve: DualGraph) -> bool:
    curve.require_connected()
    return betti(curve) == 0


@dataclass(frozen=True)
class SubcurveStats:
    k: int
    g: int
    w: int
    connected: bool


def _as_subcurve(curve: DualGraph, z) -> frozenset[int]:
    zs = frozenset(int(i) for i in z)
    if not zs:
        raise EmptySubcurve("subcurve must contain at least one component")
    if any(not 0 <= i < curve.vertex_count for i in zs):
        raise BadEdgeIndex(f"subcurve {sorted(zs)} has invalid vertex indices")
    return zs


def subcurve_stats(curve: DualGraph, z: Iterable[int]) -> SubcurveStats:
    """``k_Z`` (nodes meeting the complement), arithmetic genus ``g_Z`` and ``w_Z = 2 g_Z - 2 + k_Z``.

    ``g_Z = 1 - chi(Z)``, i.e. ``sum g_v + (internal edges) - |Z| + 1``; for a
    disconnected ``Z`` this makes ``w_Z`` additive over its pieces.
    """
    zs = _as_subcurve(curve, z)
    k = internal = 0
    parent = {v: v for v in zs}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in curve.edges:
        a, b = u in zs, v in zs
        if a and b:
            internal += 1
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        elif a != b:
            k += 1
    g = sum(curve.genera[v] for v in zs) + internal - len(zs) + 1
    ncomp = len({find(v) for v in zs})
    return SubcurveStats(k=k, g=g, w=2 * g - 2 + k, connected=ncomp == 1)


def exceptional_components(curve: DualGraph) -> list[int]:
    """Smooth rational components meeting the rest of the curve in exactly two points."""
    return [
        v
        for v in range(curve.vertex_count)
        if curve.genera[v] == 0 and curve.loops[v] == 0 and curve.valence[v] == 2
    ]


@dataclass(frozen=True)
class Classification:
    kind: str
    exceptional: tuple[int, ...]
    genus: int

    @property
    def is_stable(self):
        return self.kind == STABLE

    @property
    def is_quasistable(self):
        return self.kind in (STABLE, QUASISTABLE)

    @property
    def is_semistable(self):
        return self.kind != NODAL_ONLY


def classify_curve(curve: DualGraph) -> Classification:
    """Strongest of stable / quasistable / semistable that applies, else ``nodal_only``."""
    g = genus(curve)
    exc = tuple(exceptional_components(curve))
    w = curve.canonical_degrees
    if g < 2 or min(w) < 0:
        kind = NODAL_ONLY
    elif min(w) > 0:
        kind = STABLE
    else:
        exc_set = set(exc)
        touching = any(u != v and u in exc_set and v in exc_set for u, v in curve.edges)
        kind = SEMISTABLE if touching else QUASISTABLE
    return Classification(kind, exc, g)


def _check_edges(curve: DualGraph, s) -> tuple[int, ...]:
    out = tuple(sorted({int(e) for e in s}))
    if any(not 0 <= e < curve.edge_count for e in out):
        raise BadEdgeIndex(f"node set {list(out)} has invalid edge indices")
    return out


def partial_normalization(curve: DualGraph, s: Iterable[int]) -> DualGraph:
    """Delete the edges in ``s``.  The result may be disconnected (see ``is_connected``)."""
    ss = set(_check_edges(curve, s))
    return DualGraph(
        ids=curve.ids,
        genera=curve.genera,
        edges=tuple(e for i, e in enumerate(curve.edges) if i not in ss),
    )


def _fresh_id(taken: set[str], base: str) -> str:
    vid = base
    while vid in taken:
        vid += "'"
    taken.add(vid)
    return vid


@dataclass(frozen=True, eq=False)
class BlowUpContext:
    """A curve ``X``, a node set ``S``, the blow-up ``Y_S`` and the normalization ``X_S^nu``.

    In ``Y_S`` the components of ``X`` keep their indices and the exceptional
    component over the ``i``-th node of ``S`` (in increasing edge order) gets
    index ``gamma + i``.  Edge ``e in S`` becomes ``(u, E)`` at its old position
    plus ``(E, v)`` appended at the end.
    """

    base: DualGraph
    node_set: tuple[int, ...]
    blown: DualGraph
    normalized: DualGraph
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def s(self) -> int:
        return len(self.node_set)

    @property
    def exceptional_vertices(self) -> tuple[int, ...]:
        g = self.base.vertex_count
        return tuple(range(g, g + self.s))

    def exceptional_contacts(self, z) -> int:
        """``e_Z``: points where ``Z`` (components of ``X``) meets exceptional components."""
        zs = frozenset(z)
        key = ("e", zs)
        if key not in self._cache:
            edges = self.base.edges
            self._cache[key] = sum(
                (edges[e][0] in zs) + (edges[e][1] in zs) for e in self.node_set
            )
        return self._cache[key]

    def normalized_k(self, z) -> int:
        """``k_Z^S``: nodes of ``X_S^nu`` joining ``Z`` to the rest of ``X_S^nu``."""
        zs = frozenset(z)
        key = ("kS", zs)
        if key not in self._cache:
            self._cache[key] = subcurve_stats(self.normalized, zs).k
        return self._cache[key]

    def t(self, z) -> int:
        """``t_Z`` for the lift of ``Z`` to the blow-up at all nodes.

        Counts nodes outside ``S`` with both branches on ``Z``; for such a lift
        ``k`` in the full blow-up equals ``k`` in ``Y_S`` plus ``2 t_Z``.
        """
        zs = frozenset(z) & frozenset(range(self.base.vertex_count))
        key = ("t", zs)
        if key not in self._cache:
            ss = set(self.node_set)
            self._cache[key] = sum(
                1
                for i, (u, v) in enumerate(self.base.edges)
                if i not in ss and u in zs and v in zs
            )
        return self._cache[key]


def blow_up(curve: DualGraph, s: Iterable[int]) -> BlowUpContext:
    ss = _check_edges(curve, s)
    curve.require_connected()
    gamma = curve.vertex_count
    taken = set(curve.ids)
    ids = list(curve.ids)
    genera = list(curve.genera)
    edges = list(curve.edges)
    tail = []
    for i, e in enumerate(ss):
        u, v = curve.edges[e]
        ids.append(_fresh_id(taken, f"E{e}"))
        genera.append(0)
        edges[e] = (u, gamma + i)
        tail.append((gamma + i, v))
    blown = DualGraph(
        ids=tuple(ids),
        genera=tuple(genera),
        edges=tuple(edges + tail),
        exceptional_flags=tuple(curve.exceptional_flags) + (True,) * len(ss),
    )
    return BlowUpContext(
        base=curve,
        node_set=ss,
        blown=blown,
        normalized=partial_normalization(curve, ss),
    )


def contract_exceptional(curve: DualGraph, vertices: Iterable[int]) -> DualGraph:
    """Contract the given exceptional components, merging the two nodes on each.

    The merged node takes the position of the first edge incident to the
    contracted component; the second edge is dropped.  This inverts
    :func:`blow_up` exactly.
    """
    drop = sorted(set(vertices))
    exc = set(exceptional_components(curve))
    for x in drop:
        if x not in exc:
            raise ValueError(f"vertex {x} is not an exceptional component")
    edges: list[tuple[int, int] | None] = list(curve.edges)
    for x in drop:
        inc = [i for i, e in enumerate(edges) if e is not None and x in e]
        first, second = inc
        a = edges[first][0] if edges[first][1] == x else edges[first][1]
        b = edges[second][0] if edges[second][1] == x else edges[second][1]
        edges[first] = (a, b)
        edges[second] = None
    keep = [v for v in range(curve.vertex_count) if v not in set(drop)]
    newidx = {v: i for i, v in enumerate(keep)}
    out = DualGraph(
        ids=tuple(curve.ids[v] for v in keep),
        genera=tuple(curve.genera[v] for v in keep),
        edges=tuple((newidx[u], newidx[v]) for e in edges if e is not None for u, v in [e]),
        exceptional_flags=tuple(curve.exceptional_flags[v] for v in keep),
    )
    out.require_connected()
    return out


def nondisconnecting_sets(curve: DualGraph) -> list[tuple[int, ...]]:
    """All node sets whose normalization stays connected, size-then-lexicographic."""
    curve.require_connected()
    out = [()]
    frontier = [()]
    size = 0
    # connectivity is monotone under removing fewer edges, so grow from survivors
    while frontier:
        size += 1
        survivors = set(frontier)
        nxt = []
        for s in combinations(range(curve.edge_count), size):
            if all(s[:i] + s[i + 1:] in survivors for i in range(size)):
                if partial_normalization(curve, s).is_connected:
                    nxt.append(s)
        out.extend(nxt)
        frontier = nxt
    return out


def laplacian(curve: DualGraph) -> lattice.Matrix:
    """Combinatorial Laplacian (degree minus adjacency), loops ignored."""
    n = curve.vertex_count
    m = [[0] * n for _ in range(n)]
    for u, v in curve.edges:
        if u != v:
            m[u][u] += 1
            m[v][v] += 1
            m[u][v] -= 1
            m[v][u] -= 1
    return m


def spanning_tree_count(curve: DualGraph) -> int:
    """Complexity of the graph via the matrix-tree theorem (exact Bareiss determinant)."""
    curve.require_connected()
    lap = laplacian(curve)
    return lattice.determinant([row[1:] for row in lap[1:]])


def boundary_matrix(curve: DualGraph) -> lattice.Matrix:
    """Matrix of ``e -> v - w`` for each edge oriented as declared (vertex x edge)."""
    n = curve.vertex_count
    cols = []
    for u, v in curve.edges:
        col = [0] * n
        col[u] += 1
        col[v] -= 1
        cols.append(col)
    return [[c[i] for c in cols] for i in range(n)]


def homology_complexity_group(curve: DualGraph) -> lattice.FiniteAbelianGroup:
    """``im(boundary) / im(boundary o coboundary)`` computed through Smith forms."""
    curve.require_connected()
    n, m = curve.vertex_count, curve.edge_count
    bd = boundary_matrix(curve)
    cobd = lattice.transpose(bd, n, m)  # C_0 -> C_1
    image = lattice.matmul(bd, cobd) if m else [[0] * n for _ in range(n)]
    snf = lattice.smith_normal_form(bd, n, m)
    diag = snf.diagonal
    r = snf.rank
    # basis of im(bd): columns d_i * U^{-1} e_i, i < r
    coords = []
    for col in lattice.transpose(image, n, n):
        w = lattice.matvec(snf.U, col)
        if any(w[i] for i in range(r, n)):
            raise AssertionError("coboundary image escapes the boundary image")
        if any(w[i] % diag[i] for i in range(r)):
            raise AssertionError("coboundary image not integral in the boundary basis")
        coords.append([w[i] // diag[i] for i in range(r)])
    return lattice.cokernel(lattice.transpose(coords, len(coords), r), r, n)
