"""Strongly regular graphs, monodromy coverings and Prym data."""
from __future__ import annotations

__version__ = "0.1.0"

from .errors import BudgetExceeded, PrymlabError, SpecError, ValidationError
from .permgroups import Perm, PermGroup, compose, format_cycles, inverse, parse_cycles
from .graphs import (
    PrymCertificate,
    PrymGraph,
    QuadSurd,
    Spectrum,
    SrgParams,
    certify_prym,
    classify_binary_prym,
    complement_params,
    complete_graph_union,
    displacing_automorphism,
    latin_square_graph,
    lattice_complement,
    lattice_graph,
    paley_graph,
    repeat_matrix,
    schlaefli_graph,
    spectrum_of,
    validate_srg,
)
from .coverings import BranchPoint, CoveringData, count_hurwitz_classes, galois_closure, genus, quotient_covering, validate_covering
from .prym import (
    PrymTriple,
    build_triple,
    check_quadratic_identity,
    complement_dual,
    dimensions,
    double_coset_weights,
    fiber_matrix,
    fixed_point_analysis,
)
from .splitting import (
    TowerSpec,
    analyze_type_l1l2,
    canonical_split,
    convert_type_l,
    from_tower,
    is_simple_split,
    lrr_build,
    lrr_recover,
    usual_prym_dims,
    xi_isomorphism,
)

__all__ = [name for name in dir() if not name.startswith("_")]
