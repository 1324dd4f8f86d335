"""Polynomial-method tools: exact polynomials, Markov bounds, query algorithms."""

from .markov import DegreeBound, FloorCheck, degree_lower_bound, derivative_floor_check, direct_product_bound, markov_bounds
from .poly import (
    Poly,
    chebyshev,
    chebyshev_derivative_at_one,
    chebyshev_tools,
    isolate_roots,
    rescaled_chebyshev,
    sturm_sequence,
    sup_norm,
)
from .query import (
    AcceptancePolynomial,
    FindAllReport,
    QueryAlgorithm,
    QueryError,
    acceptance_polynomial,
    constructed_algorithms,
    exact_find_all,
    grover_algorithm,
    grover_find_all,
    optimal_schedule,
)

__all__ = [
    "AcceptancePolynomial",
    "DegreeBound",
    "FindAllReport",
    "FloorCheck",
    "Poly",
    "QueryAlgorithm",
    "QueryError",
    "acceptance_polynomial",
    "chebyshev",
    "chebyshev_derivative_at_one",
    "chebyshev_tools",
    "constructed_algorithms",
    "degree_lower_bound",
    "derivative_floor_check",
    "direct_product_bound",
    "exact_find_all",
    "grover_algorithm",
    "grover_find_all",
    "isolate_roots",
    "markov_bounds",
    "optimal_schedule",
    "rescaled_chebyshev",
    "sturm_sequence",
    "sup_norm",
]
