"""Combinatorics of Neron models and compactified Picard schemes of nodal curves."""

from .errors import NeronCombError, PreconditionError
from .graph import (
    BlowUpContext,
    DualGraph,
    blow_up,
    build_curve,
    classify_curve,
    contract_exceptional,
    genus,
    homology_complexity_group,
    nondisconnecting_sets,
    spanning_tree_count,
    subcurve_stats,
    vine,
)
from .lattice import FiniteAbelianGroup, Lattice, smith_normal_form
from .picard import (
    DegreeClassGroup,
    Multidegree,
    are_equivalent,
    balanced_model,
    classify_multidegree,
    count_picard_models,
    degree_class_group,
    enumerate_balanced,
    intersection_matrix,
    is_d_general,
    partition_by_support,
    rho_map,
    semibalanced_representative,
    twister_multidegree,
)
from .strata import closure_order, minimal_strata, stratification
from .curvefile import parse_curve, read_curve, serialize_curve

__version__ = "0.1.0"
