"""Exact verification toolkit for the three-coloring model with domain-wall
boundary conditions in its nontrivial trigonometric limit."""

from .detform import (
    abc_coefficients,
    det_PQ,
    exponent_sets,
    formula_vs_bruteforce,
    recursion_check,
    schur_jacobi_trudi,
    script_PQ,
    zprime,
    zprime_closed_form,
)
from .exactalg import A, AlgebraContext, AlgebraElement, CycScalar, UniPoly, det_exact, sigma
from .lattice import ColorGrid, EvaluationPoint, classify_vertex, enumerate_states, partial_partition
from .sampling import sample_point

__version__ = "0.1.0"
