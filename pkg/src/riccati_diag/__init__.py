"""Riccati diagonalization of Hermitian matrices.

Grassmann-chart unitaries ``U(Z)`` block-diagonalize a Hermitian matrix
whenever ``Z`` solves a matrix Riccati equation.  Peeling one coordinate at
a time turns this into a full eigen-decomposition; a Jacobi/characteristic
polynomial oracle checks the results independently.
"""

from .core import (
    BlockPartition,
    HermitianMatrix,
    UnitaryFactor,
    block_split,
    build_unitary,
    conjugate,
    grassmann_projector,
    inv_sqrt_gram,
    validate_hermitian,
)
from .cubic3 import eigenvalues_3x3
from .oracle import char_poly, jacobi_eigensolve, poly_roots, sylvester_bruteforce
from .reduction import DiagonalizationResult, rank_one_inv_sqrt, riccati_diagonalize
from .riccati import (
    RiccatiSolution,
    approx_ii,
    newton_refine,
    reduced_hamiltonians,
    riccati_residual,
    solve_2x2,
    spectral_gap_check,
    sylvester_integral,
)

__version__ = "0.1.0"

__all__ = [
    "BlockPartition",
    "DiagonalizationResult",
    "HermitianMatrix",
    "RiccatiSolution",
    "UnitaryFactor",
    "approx_ii",
    "block_split",
    "build_unitary",
    "char_poly",
    "conjugate",
    "eigenvalues_3x3",
    "grassmann_projector",
    "inv_sqrt_gram",
    "jacobi_eigensolve",
    "newton_refine",
    "poly_roots",
    "rank_one_inv_sqrt",
    "reduced_hamiltonians",
    "riccati_diagonalize",
    "riccati_residual",
    "solve_2x2",
    "spectral_gap_check",
    "sylvester_bruteforce",
    "sylvester_integral",
    "validate_hermitian",
]
