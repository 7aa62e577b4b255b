"""Exact symbolic toolkit for cluster varieties.

Seeds and mutations, exact Laurent-fraction arithmetic, the chart atlas with
its divisor calculus, principal-coefficient gradings and universal-torsor
checks, and order-truncated scattering diagrams with broken-line theta
functions.  All arithmetic is exact (integers and rationals); results are
deterministic.
"""

__version__ = "0.1.0"

from .lattice import (
    FinAbPresentation,
    IntMatrix,
    cokernel,
    kernel_basis,
    lattice_intersection,
    smith_normal_form,
    solve_integer,
)
from .laurent import KERNEL_BACKEND, LaurentPoly, RationalFn, TorusPoint, mutation_pullback
from .seeds import Seed, derive_maps, is_skew, mutate_seed, principal_seed, validate_seed

__all__ = [
    "FinAbPresentation",
    "IntMatrix",
    "KERNEL_BACKEND",
    "LaurentPoly",
    "RationalFn",
    "Seed",
    "TorusPoint",
    "cokernel",
    "derive_maps",
    "is_skew",
    "kernel_basis",
    "lattice_intersection",
    "mutate_seed",
    "mutation_pullback",
    "principal_seed",
    "smith_normal_form",
    "solve_integer",
    "validate_seed",
]
