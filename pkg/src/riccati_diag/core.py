"""Dense complex matrix helpers, Hermitian validation and Grassmann unitaries.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  The
few composite values (a validated Hermitian matrix, a block partition, a
unitary with its measured defect) are frozen dataclasses whose arrays are
marked read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import BadSplitIndex, NonFinite, NotHermitian, NotSquare, NotUnitary, ShapeMismatch

DEFAULT_HERMITICITY_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.flags.writeable = False
    return a


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a 2-D complex128 array and reject NaN/Inf."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got array of shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix has non-finite entries")
    return a


def max_norm(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


@dataclass(frozen=True)
class HermitianMatrix:
    """A square matrix that passed the hermiticity gate.

    ``data`` is the symmetrized matrix (exactly Hermitian, real diagonal),
    ``defect`` the max-norm of ``H - H^dagger`` measured on the raw input.
    """

    data: np.ndarray
    defect: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "data", _frozen(self.data))

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def scale(self) -> float:
        """``max(1, ||H||_max)``, the reference magnitude for tolerances."""
        return max(1.0, max_norm(self.data))

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)


def _symmetrize(a: np.ndarray) -> np.ndarray:
    s = 0.5 * (a + dagger(a))
    np.fill_diagonal(s, s.diagonal().real)
    return s


def validate_hermitian(m, tol: float = DEFAULT_HERMITICITY_TOL) -> HermitianMatrix:
    """Check ``m`` is Hermitian and return its symmetrized copy.

    ``tol`` is relative: the accepted defect ``||m - m^dagger||_max`` is
    ``tol * max(1, ||m||_max)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"matrix of shape {a.shape} is not square")
    defect = max_norm(a - dagger(a))
    limit = tol * max(1.0, max_norm(a))
    if defect > limit:
        raise NotHermitian(defect, limit)
    return HermitianMatrix(_symmetrize(a), defect)


def hermitian(h) -> HermitianMatrix:
    """Accept a :class:`HermitianMatrix` or anything :func:`validate_hermitian` takes."""
    if isinstance(h, HermitianMatrix):
        return h
    return validate_hermitian(h)


def hermitian_eigh(a: np.ndarray, tol: float = 1e-15) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and unitary eigenvectors of a Hermitian array (Jacobi)."""
    d, v, _, _, _ = _kernels.jacobi_eigh(a, tol)
    order = np.argsort(d, kind="stable")
    return d[order], v[:, order]


@dataclass(frozen=True)
class BlockPartition:
    """``H = [[h_plus, v^dagger], [v, h_minus]]`` with ``h_plus`` of size k."""

    k: int
    h_plus: np.ndarray
    h_minus: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        for name in ("h_plus", "h_minus", "v"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        m = self.h_minus.shape[0]
        if self.h_plus.shape != (self.k, self.k) or self.h_minus.shape != (m, m) or self.v.shape != (m, self.k):
            raise ShapeMismatch("inconsistent block shapes")

    @property
    def n(self) -> int:
        return self.k + self.h_minus.shape[0]

    @property
    def scale(self) -> float:
        return max(1.0, max_norm(self.h_plus), max_norm(self.h_minus), max_norm(self.v))

    def assemble(self) -> np.ndarray:
        return np.block([[self.h_plus, dagger(self.v)], [self.v, self.h_minus]])

    def check_z(self, z: np.ndarray) -> np.ndarray:
        z = as_matrix(z)
        if z.shape != self.v.shape:
            raise ShapeMismatch(f"Z has shape {z.shape}, partition needs {self.v.shape}")
        return z


def block_split(h, k: int) -> BlockPartition:
    h = hermitian(h)
    n = h.n
    if not 1 <= k <= n - 1:
        raise BadSplitIndex(f"split index {k} outside 1..{n - 1}")
    a = h.data
    return BlockPartition(k, a[:k, :k], a[k:, k:], a[k:, :k])


def inv_sqrt_gram(z) -> tuple[np.ndarray, np.ndarray]:
    """``(1_k + Z^dagger Z)^{-1/2}`` and ``(1_{n-k} + Z Z^dagger)^{-1/2}``.

    Both come from a Jacobi eigendecomposition of the Gram matrix with the
    eigenvalue map ``lam -> lam**-0.5``.
    """
    z = as_matrix(z)
    m, k = z.shape
    return _pd_inv_sqrt(np.eye(k) + dagger(z) @ z), _pd_inv_sqrt(np.eye(m) + z @ dagger(z))


def _pd_inv_sqrt(g: np.ndarray) -> np.ndarray:
    lam, q = hermitian_eigh(g)
    a = (q * lam ** -0.5) @ dagger(q)
    return 0.5 * (a + dagger(a))


@dataclass(frozen=True)
class UnitaryFactor:
    u: np.ndarray
    unitarity_defect: float = field(init=False)

    def __post_init__(self):
        u = _frozen(self.u)
        object.__setattr__(self, "u", u)
        n = u.shape[0]
        defect = max_norm(dagger(u) @ u - np.eye(n))
        object.__setattr__(self, "unitarity_defect", defect)
        if defect > 1e-10 * n:
            raise NotUnitary(f"unitarity defect {defect:.3e} exceeds {1e-10 * n:.1e}")

    @property
    def n(self) -> int:
        return self.u.shape[0]


def grassmann_frame(z: np.ndarray) -> np.ndarray:
    """``U_M = [[1_k, -Z^dagger], [Z, 1_{n-k}]]``."""
    m, k = z.shape
    return np.block([[np.eye(k), -dagger(z)], [z, np.eye(m)]])


def build_unitary(z, part: BlockPartition | None = None) -> UnitaryFactor:
    """``U(Z) = U_M U_D`` for a Grassmann coordinate ``Z`` of shape (n-k, k)."""
    z = part.check_z(z) if part is not None else as_matrix(z)
    a, b = inv_sqrt_gram(z)
    m, k = z.shape
    ud = np.zeros((m + k, m + k), dtype=np.complex128)
    ud[:k, :k] = a
    ud[k:, k:] = b
    return UnitaryFactor(grassmann_frame(z) @ ud)


def grassmann_projector(z) -> np.ndarray:
    """Rank-k orthogonal projector ``U(Z) P0 U(Z)^dagger``."""
    z = as_matrix(z)
    k = z.shape[1]
    u = build_unitary(z).u
    p = u[:, :k] @ dagger(u[:, :k])
    return 0.5 * (p + dagger(p))


def conjugate(h, u: UnitaryFactor | np.ndarray) -> HermitianMatrix:
    """``U^dagger H U``, re-symmetrized."""
    h = hermitian(h)
    uu = u.u if isinstance(u, UnitaryFactor) else as_matrix(u)
    if uu.shape != h.data.shape:
        raise ShapeMismatch(f"unitary {uu.shape} vs matrix {h.data.shape}")
    return HermitianMatrix(_symmetrize(dagger(uu) @ h.data @ uu))
