"""Stratification of the compactified Neron model of a d-general stable curve.

One stratum per node set ``S`` whose normalization ``X_S^nu`` is connected.
Its irreducible components are indexed by the degree ``d - |S|`` classes of
``X_S^nu``, realised through the balanced multidegrees on the blow-up ``Y_S``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import graph, picard
from .errors import MixedStratifications
from .graph import BlowUpContext, DualGraph


@dataclass(frozen=True, eq=False)
class Stratum:
    node_set: tuple[int, ...]
    blowup: BlowUpContext = field(repr=False)
    dimension: int
    component_classes: tuple[tuple[int, ...], ...]
    balanced_reps_on_blowup: tuple[tuple[int, ...], ...]
    normalized_order: int
    owner: object = field(default=None, repr=False)

    @property
    def codimension(self) -> int:
        return len(self.node_set)

    @property
    def torus_fiber_dim(self) -> int:
        return len(self.node_set)

    @property
    def irreducible(self) -> bool:
        return len(self.component_classes) == 1

    @property
    def component_count(self) -> int:
        return len(self.component_classes)


@dataclass(frozen=True, eq=False)
class Stratification:
    curve: DualGraph
    degree: int
    genus: int
    strata: tuple[Stratum, ...]

    def __getitem__(self, node_set) -> Stratum:
        key = tuple(sorted(node_set))
        for s in self.strata:
            if s.node_set == key:
                return s
        raise KeyError(key)

    def keys(self):
        return [s.node_set for s in self.strata]

    def __iter__(self):
        return iter(self.strata)

    def __len__(self):
        return len(self.strata)


def stratification(curve: DualGraph, d: int) -> Stratification:
    picard._require_stable(curve)
    picard.require_d_general(curve, d)
    g = graph.genus(curve)
    strata = []
    token = object()
    for s in graph.nondisconnecting_sets(curve):
        ctx = graph.blow_up(curve, s)
        table = picard.rho_map(ctx, d, check_general=False)
        strata.append(
            Stratum(
                node_set=ctx.node_set,
                blowup=ctx,
                dimension=g - len(s),
                component_classes=tuple(p.normalized_label for p in table.pairs),
                balanced_reps_on_blowup=tuple(p.blown_rep for p in table.pairs),
                normalized_order=table.normalized_order,
                owner=token,
            )
        )
    return Stratification(curve, d, g, tuple(strata))


def closure_order(a: Stratum, b: Stratum) -> bool:
    """Whether ``a`` lies in the closure of ``b``."""
    if a.owner is not b.owner:
        raise MixedStratifications("strata come from different stratifications")
    return set(b.node_set) <= set(a.node_set)


@dataclass(frozen=True)
class MinimalStrataReport:
    strata: tuple[Stratum, ...]
    minimal_dimension: int
    count_matches_complexity: bool
    count_matches_class_group: bool
    all_irreducible_compact_type: bool
    dimension_lower_bound_holds: bool
    #: dim Q_S = sum g_i exactly when X_S^nu is of compact type
    dimension_iff_compact_type: bool
    #: Q_S irreducible exactly when X_S^nu is of compact type.  Self-nodes do not
    #: change the class group, so this fails once X_S^nu keeps a loop; it is
    #: reported but not part of :attr:`ok`.
    irreducible_iff_compact_type: bool

    @property
    def ok(self) -> bool:
        return (
            self.count_matches_complexity
            and self.count_matches_class_group
            and self.all_irreducible_compact_type
            and self.dimension_lower_bound_holds
            and self.dimension_iff_compact_type
        )


def minimal_strata(strat: Stratification) -> MinimalStrataReport:
    curve = strat.curve
    floor_dim = sum(curve.genera)
    minimal = tuple(s for s in strat if s.dimension == floor_dim)
    complexity = graph.spanning_tree_count(curve)
    order = picard._dcg_cached(curve).order
    compact = {s.node_set: graph.is_compact_type(s.blowup.normalized) for s in strat}
    return MinimalStrataReport(
        strata=minimal,
        minimal_dimension=floor_dim,
        count_matches_complexity=len(minimal) == complexity,
        count_matches_class_group=len(minimal) == order,
        all_irreducible_compact_type=all(s.irreducible and compact[s.node_set] for s in minimal),
        dimension_lower_bound_holds=all(s.dimension >= floor_dim for s in strat),
        dimension_iff_compact_type=all((s.dimension == floor_dim) == compact[s.node_set] for s in strat),
        irreducible_iff_compact_type=all(s.irreducible == compact[s.node_set] for s in strat),
    )


def total_component_count(strat: Stratification) -> int:
    return sum(s.component_count for s in strat)
