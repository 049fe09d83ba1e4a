"""Classical baseline: characteristic polynomial, its roots, Jacobi, brute-force Sylvester.

Nothing here calls into the Riccati modules, so agreement between the two
is evidence rather than tautology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import BlockPartition, dagger, hermitian, max_norm
from .errors import NoConvergence, SingularOperator, TooLarge

CHAR_POLY_MAX_N = 12


@dataclass(frozen=True)
class CharPoly:
    """Monic coefficients in descending degree: ``[1, c_{n-1}, ..., c_0]``."""

    coefficients: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        return np.polyval(self.coefficients, x)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    rotations: np.ndarray | None = None
    n_rotations: int = 0


def char_poly(h) -> CharPoly:
    """``det(lambda E - H)`` by the Faddeev-LeVerrier trace recursion."""
    a = hermitian(h).data
    n = a.shape[0]
    if n > CHAR_POLY_MAX_N:
        raise TooLarge(f"char_poly is limited to n <= {CHAR_POLY_MAX_N}, got {n}")
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    m = np.zeros_like(a)
    eye = np.eye(n)
    for k in range(1, n + 1):
        m = a @ m + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(a @ m) / k
    return CharPoly(coeffs)


def poly_roots(p: CharPoly | np.ndarray, polish_steps: int = 2) -> np.ndarray:
    """All roots of a monic polynomial, sorted by real part.

    Eigenvalues of the companion matrix (LAPACK Hessenberg QR) followed by
    Newton polishing on the polynomial itself.
    """
    c = np.asarray(p.coefficients if isinstance(p, CharPoly) else p, dtype=np.complex128)
    if c.size < 2:
        raise ValueError("polynomial must have degree >= 1")
    c = c / c[0]
    n = c.size - 1
    comp = np.zeros((n, n), dtype=np.complex128)
    comp[0, :] = -c[1:]
    comp[1:, :-1] = np.eye(n - 1)
    roots = np.linalg.eigvals(comp)
    if not np.all(np.isfinite(roots)):
        raise NoConvergence("companion eigenvalue iteration failed")
    dc = np.polyder(c)
    for _ in range(polish_steps):
        d = np.polyval(dc, roots)
        safe = np.abs(d) > 0
        roots = np.where(safe, roots - np.polyval(c, roots) / np.where(safe, d, 1), roots)
    return roots[np.argsort(roots.real, kind="stable")]


def jacobi_eigensolve(h, tol: float = 1e-14) -> Spectrum:
    """Eigen-decomposition by largest-pivot complex Jacobi rotations.

    Stops when ``||offdiag||_max <= tol * ||H||_max``; gives up after
    ``50 n^2`` rotations.
    """
    a = hermitian(h).data
    d, v, rot, off, ok = _kernels.jacobi_eigh(a, tol)
    if not ok:
        raise NoConvergence(f"Jacobi did not converge in {rot} rotations (offdiag {off:.3e})")
    order = np.argsort(d, kind="stable")
    return Spectrum(d[order], v[:, order], int(rot))


def sylvester_bruteforce(part: BlockPartition) -> np.ndarray:
    """Solve ``Z H+ - H- Z = V`` on vec(Z) by Gaussian elimination with partial pivoting."""
    m, k = part.v.shape
    op = np.kron(part.h_plus.T, np.eye(m)) - np.kron(np.eye(k), part.h_minus)
    x, ok = _kernels.gauss_solve(op, part.v.reshape(-1, order="F"))
    if not ok:
        raise SingularOperator("H+ and H- share an eigenvalue")
    return x.reshape((m, k), order="F")


def conjugation_residual(h, spectrum: Spectrum) -> float:
    a = hermitian(h).data
    u = spectrum.rotations
    return max_norm(dagger(u) @ a @ u - np.diag(spectrum.eigenvalues))
