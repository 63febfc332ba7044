"""Exhaustive small-curve corpus used by the test suite and the benchmark."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product

from .graph import DualGraph, build_curve, classify_curve


def _relabellings(n, edges):
    """``(perm, relabelled sorted edges)`` for every vertex permutation."""
    out = []
    for perm in permutations(range(n)):
        inv = [0] * n
        for new, old in enumerate(perm):
            inv[old] = new
        e = tuple(sorted((min(inv[u], inv[v]), max(inv[u], inv[v])) for u, v in edges))
        out.append((perm, e))
    return out


def canonical_form(genera, edges, relabellings=None):
    """Lexicographically least relabelling of (genera, sorted edge multiset)."""
    if relabellings is None:
        relabellings = _relabellings(len(genera), edges)
    return min((tuple(genera[i] for i in perm), e) for perm, e in relabellings)


def _connected(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(x) for x in range(n)}) == 1


@lru_cache(maxsize=None)
def stable_corpus(max_vertices=4, max_edges=7, max_genus=2, min_g=3, max_g=8) -> tuple[DualGraph, ...]:
    """All stable curves up to isomorphism with the given size limits, canonically ordered."""
    forms = set()
    for n in range(1, max_vertices + 1):
        pair_types = [(i, j) for i in range(n) for j in range(i, n)]
        for m in range(n - 1, max_edges + 1):
            b1 = m - n + 1
            for edges in combinations_with_replacement(pair_types, m):
                if not _connected(n, edges):
                    continue
                loops = [0] * n
                val = [0] * n
                for u, v in edges:
                    if u == v:
                        loops[u] += 1
                    else:
                        val[u] += 1
                        val[v] += 1
                rel = None
                for genera in product(range(max_genus + 1), repeat=n):
                    g = sum(genera) + b1
                    if not min_g <= g <= max_g:
                        continue
                    if any(2 * gv - 2 + 2 * lp + k <= 0 for gv, lp, k in zip(genera, loops, val)):
                        continue
                    if rel is None:
                        rel = _relabellings(n, edges)
                    forms.add(canonical_form(genera, edges, rel))
    out = []
    for genera, edges in sorted(forms, key=lambda f: (len(f[0]), len(f[1]), f)):
        curve = build_curve([(f"C{i + 1}", g) for i, g in enumerate(genera)], edges)
        assert classify_curve(curve).is_stable
        out.append(curve)
    return tuple(out)
