"""Exact computation of Leray homomorphisms for coverings of finite simplicial complexes.

Everything is rational and exact: matrices hold :class:`fractions.Fraction`
entries and every comparison is an equality, never a tolerance.
"""

from .bicomplex import (
    DoubleComplex,
    DoubleComplexMorphism,
    ExactnessError,
    compare_totals,
    edge_iso_matrix,
    edge_iso_matrix_homological,
    edge_lift_cycle,
    edge_reduce_cocycle,
)
from .coverings import (
    Covering,
    CoveringMorphism,
    NotFineError,
    SetFamily,
    is_barycentric_refinement,
    is_combinatorial_refinement,
    is_star_refinement,
    nerve,
    nerve_map,
    star,
    support,
)
from .exactla import RatMatrix, kernel_basis, quotient_data, rank, solve_particular
from .io import load_complex, load_covering
from .leray import (
    choice_independence_check,
    contracting_homotopy,
    covering_double_complex,
    factorization_check,
    homology_covering_complex,
    homology_factorization_check,
    homology_leray_map,
    is_acyclic,
    lambda_map,
    leray_map,
    leray_transformation_check,
    realization_check,
    star_covering,
    tau_map,
    vanishing_check,
)
from .lp import LPProblem, lp_solve
from .norms import duality_check, l1_seminorm, linf_seminorm, pairing
from .simplicial import (
    SimplicialComplex,
    SimplicialMap,
    barycentric_subdivision,
    closure,
    cohomology_basis,
    homology_basis,
)
from .systems import FULL, ExplicitSystem, TruncatedSystem, parse_system

__version__ = "0.1.0"

__all__ = [
    "DoubleComplex",
    "DoubleComplexMorphism",
    "ExactnessError",
    "compare_totals",
    "edge_iso_matrix",
    "edge_iso_matrix_homological",
    "edge_lift_cycle",
    "edge_reduce_cocycle",
    "Covering",
    "CoveringMorphism",
    "NotFineError",
    "SetFamily",
    "is_barycentric_refinement",
    "is_combinatorial_refinement",
    "is_star_refinement",
    "nerve",
    "nerve_map",
    "star",
    "support",
    "RatMatrix",
    "kernel_basis",
    "quotient_data",
    "rank",
    "solve_particular",
    "load_complex",
    "load_covering",
    "choice_independence_check",
    "contracting_homotopy",
    "covering_double_complex",
    "factorization_check",
    "homology_covering_complex",
    "homology_factorization_check",
    "homology_leray_map",
    "is_acyclic",
    "lambda_map",
    "leray_map",
    "leray_transformation_check",
    "realization_check",
    "star_covering",
    "tau_map",
    "vanishing_check",
    "LPProblem",
    "lp_solve",
    "duality_check",
    "l1_seminorm",
    "linf_seminorm",
    "pairing",
    "SimplicialComplex",
    "SimplicialMap",
    "barycentric_subdivision",
    "closure",
    "cohomology_basis",
    "homology_basis",
    "FULL",
    "ExplicitSystem",
    "TruncatedSystem",
    "parse_system",
]
