"""Cluster algebra bases from triangulated surfaces."""

__version__ = "0.1.0"

from .bases import (
    BasisBound,
    BasisElement,
    CheckResult,
    bracelet_word,
    chebyshev_T,
    enumerate_basis_elements,
    monomial_to_chebyshev,
    verify_bracelet_chebyshev,
    verify_g_injectivity,
    verify_good_count_inequality,
    verify_ptolemy,
)
from .cluster import (
    Seed,
    initial_seed,
    mutate_matrix,
    mutate_seed,
    principal_seed,
    separation_specialize,
    variable_by_mutation_path,
)
from .expansion import ExpansionResult, expand_arc, expand_loop, f_polynomial, g_vector
from .families import Annulus, Polygon, catalog_arcs, parse_family
from .laurent import LaurentPoly, VarContext
from .snakegraph import (
    build_band_graph,
    build_poset,
    build_snake_graph,
    good_matchings,
    matching_lattice,
)
from .surface import (
    CurveWord,
    Triangulation,
    build_triangulation,
    flip,
    load_fixture,
    load_triangulation,
    realizing_flips,
    signed_adjacency,
)

__all__ = [
    "Annulus",
    "BasisBound",
    "BasisElement",
    "CheckResult",
    "CurveWord",
    "ExpansionResult",
    "LaurentPoly",
    "Polygon",
    "Seed",
    "Triangulation",
    "VarContext",
    "bracelet_word",
    "build_band_graph",
    "build_poset",
    "build_snake_graph",
    "build_triangulation",
    "catalog_arcs",
    "chebyshev_T",
    "enumerate_basis_elements",
    "expand_arc",
    "expand_loop",
    "f_polynomial",
    "flip",
    "g_vector",
    "good_matchings",
    "initial_seed",
    "load_fixture",
    "load_triangulation",
    "matching_lattice",
    "monomial_to_chebyshev",
    "mutate_matrix",
    "mutate_seed",
    "parse_family",
    "principal_seed",
    "realizing_flips",
    "separation_specialize",
    "signed_adjacency",
    "variable_by_mutation_path",
    "verify_bracelet_chebyshev",
    "verify_g_injectivity",
    "verify_good_count_inequality",
    "verify_ptolemy",
    "__version__",
]
