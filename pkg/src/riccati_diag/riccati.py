"""The matrix Riccati equation ``Z V^dagger Z + Z H+ - H- Z - V = 0``.

A root ``Z`` makes ``U(Z)^dagger H U(Z)`` block diagonal.  This module
evaluates the residual and offers four ways to get at roots: the scalar
closed form, the Sylvester solution obtained by dropping the quadratic term,
one step of the square-block recursive relation, and Newton refinement.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BlockPartition,
    HermitianMatrix,
    _symmetrize,
    dagger,
    hermitian_eigh,
    inv_sqrt_gram,
    max_norm,
)
from .errors import (
    NoConvergence,
    NoSpectralGap,
    SingularLinearization,
    SingularShift,
    SingularV,
)

COND_LIMIT = 1e14


class Method(str, enum.Enum):
    CLOSED_2X2 = "Closed2x2"
    SYLVESTER_INIT = "SylvesterInit"
    APPROX_II = "ApproxII"
    NEWTON = "Newton"


def riccati_residual(z, part: BlockPartition) -> np.ndarray:
    z = part.check_z(z)
    return z @ dagger(part.v) @ z + z @ part.h_plus - part.h_minus @ z - part.v


@dataclass(frozen=True)
class RiccatiSolution:
    z: np.ndarray
    residual_norm: float
    method: Method
    iterations: int = 0

    @classmethod
    def from_z(cls, z, part: BlockPartition, method: Method, iterations: int = 0) -> "RiccatiSolution":
        z = np.array(z, dtype=np.complex128)
        z.flags.writeable = False
        return cls(z, max_norm(riccati_residual(z, part)), method, iterations)


@dataclass(frozen=True)
class EigenvaluePair:
    lambda1: float
    lambda2: float


def _realify(x: complex, scale: float) -> float:
    if abs(x.imag) > 1e-12 * scale:
        raise ValueError(f"expected a real value, imaginary part {x.imag:.3e}")
    return x.real


def two_by_two_eigenvalues(h1: float, h2: float, alpha: complex, z: complex) -> EigenvaluePair:
    """Diagonal entries of ``U(z)^dagger H U(z)`` for the 2x2 Hermitian matrix."""
    az = alpha.conjugate() * z
    w = abs(z) ** 2
    scale = max(1.0, abs(h1), abs(h2), abs(alpha)) * (1.0 + w)
    l1 = (h1 + az + az.conjugate() + h2 * w) / (1.0 + w)
    l2 = (h2 - az - az.conjugate() + h1 * w) / (1.0 + w)
    return EigenvaluePair(_realify(complex(l1), scale), _realify(complex(l2), scale))


def solve_2x2(h1: float, h2: float, alpha: complex) -> list[tuple[RiccatiSolution, EigenvaluePair]]:
    """Both roots of ``conj(alpha) z^2 + (h1 - h2) z - alpha = 0`` and their eigenvalues.

    Candidates are ordered by ``|z|`` ascending.  When ``alpha == 0`` the
    matrix is already diagonal and the single candidate is ``z = 0``.
    """
    h1, h2, alpha = float(h1), float(h2), complex(alpha)
    part = BlockPartition(1, [[h1]], [[h2]], [[alpha]])
    if alpha == 0:
        sol = RiccatiSolution.from_z([[0.0]], part, Method.CLOSED_2X2)
        return [(sol, EigenvaluePair(h1, h2))]
    d = h1 - h2
    s = math.sqrt(d * d + 4.0 * abs(alpha) ** 2)
    # q = -(d + sign(d) s) / 2 avoids cancellation; roots q/conj(alpha), -alpha/q
    q = -0.5 * (d + math.copysign(s, d)) if d != 0 else -0.5 * s
    roots = sorted([q / alpha.conjugate(), -alpha / q], key=abs)
    out = []
    for z in roots:
        sol = RiccatiSolution.from_z([[z]], part, Method.CLOSED_2X2)
        out.append((sol, two_by_two_eigenvalues(h1, h2, alpha, z)))
    return out


def spectral_gap_check(part: BlockPartition) -> bool:
    """True iff ``max eig(H-) < min eig(H+)``."""
    mu, _ = hermitian_eigh(part.h_minus)
    nu, _ = hermitian_eigh(part.h_plus)
    return bool(mu[-1] < nu[0])


def sylvester_integral(part: BlockPartition) -> RiccatiSolution:
    """Solve ``Z H+ - H- Z = V``, i.e. ``Z = int_0^inf e^{t H-} V e^{-t H+} dt``.

    The integral is evaluated exactly in the eigenbases of ``H+`` and
    ``H-``: the transformed entries are ``V~_ij / (nu_j - mu_i)``.
    """
    nu, qp = hermitian_eigh(part.h_plus)
    mu, qm = hermitian_eigh(part.h_minus)
    gaps = nu[None, :] - mu[:, None]
    if np.any(gaps <= 0):
        raise NoSpectralGap(f"max eig(H-) = {mu[-1]:.6g} >= min eig(H+) = {nu[0]:.6g}")
    vt = dagger(qm) @ part.v @ qp
    z = qm @ (vt / gaps) @ dagger(qp)
    return RiccatiSolution.from_z(z, part, Method.SYLVESTER_INIT)


def approx_ii(part: BlockPartition, z0) -> RiccatiSolution:
    """One application of the recursive relation for square blocks.

    ``Z = H- W + (V - H- W H+) (Z0 + W H+)^{-1} W`` with ``W = (V^dagger)^{-1}``.
    Requires ``n = 2m``, ``k = m`` and an invertible ``V``.
    """
    z0 = part.check_z(z0)
    m = part.k
    if part.h_minus.shape[0] != m:
        raise ValueError("the recursive relation needs equal block sizes (n = 2k)")
    vh = dagger(part.v)
    if np.linalg.cond(vh) > COND_LIMIT:
        raise SingularV("V is numerically singular")
    w = np.linalg.inv(vh)
    shift = z0 + w @ part.h_plus
    if np.linalg.cond(shift) > COND_LIMIT:
        raise SingularShift("Z0 + (V^dagger)^{-1} H+ is numerically singular")
    hm = part.h_minus
    z = hm @ w + (part.v - hm @ w @ part.h_plus) @ np.linalg.solve(shift, w)
    return RiccatiSolution.from_z(z, part, Method.APPROX_II, 1)


def frechet_operator(z: np.ndarray, part: BlockPartition) -> np.ndarray:
    """Matrix of ``D -> D (V^dagger Z + H+) - (H- - Z V^dagger) D`` on column-major vec(D)."""
    m, k = z.shape
    vh = dagger(part.v)
    right = vh @ z + part.h_plus
    left = part.h_minus - z @ vh
    return np.kron(right.T, np.eye(m)) - np.kron(np.eye(k), left)


def newton_refine(
    part: BlockPartition,
    z0,
    tol: float = 1e-10,
    max_iter: int = 50,
    *,
    damped: bool = True,
    history: list | None = None,
) -> RiccatiSolution:
    """Newton's method on the Riccati residual.

    Each step solves the Frechet linearization, a Sylvester equation, as a
    dense ``k(n-k)``-dimensional linear system.  With ``damped`` the step is
    halved (up to 30 times) until the residual decreases; a full step is
    always tried first so the quadratic rate near a root is unaffected.
    Stops when the max-norm residual is at most ``tol * part.scale``.
    If ``history`` is a list, the residual of every iterate is appended.
    """
    z = np.array(part.check_z(z0), dtype=np.complex128)
    m, k = z.shape
    target = tol * part.scale
    r = riccati_residual(z, part)
    res = max_norm(r)
    best_z, best_res = z.copy(), res
    if history is not None:
        history.append(res)
    it = 0
    while res > target:
        if it >= max_iter:
            raise NoConvergence(
                f"Newton did not reach {target:.3e} in {max_iter} iterations (best {best_res:.3e})",
                best=best_z,
                residual=best_res,
            )
        op = frechet_operator(z, part)
        try:
            if np.linalg.cond(op) > 1e15:
                raise np.linalg.LinAlgError
            step = np.linalg.solve(op, -r.reshape(-1, order="F")).reshape((m, k), order="F")
        except np.linalg.LinAlgError:
            raise SingularLinearization("Frechet linearization is singular") from None
        t = 1.0
        z_new = z + step
        r_new = riccati_residual(z_new, part)
        if damped:
            fro = np.linalg.norm(r)
            for _ in range(30):
                if np.linalg.norm(r_new) < fro:
                    break
                t *= 0.5
                z_new = z + t * step
                r_new = riccati_residual(z_new, part)
        z, r = z_new, r_new
        res = max_norm(r)
        it += 1
        if history is not None:
            history.append(res)
        if not np.all(np.isfinite(z)):
            raise NoConvergence("Newton iterate diverged", best=best_z, residual=best_res)
        if res < best_res:
            best_z, best_res = z.copy(), res
    return RiccatiSolution.from_z(z, part, Method.NEWTON, it)


def reduced_hamiltonians(part: BlockPartition, z) -> tuple[HermitianMatrix, HermitianMatrix]:
    """``H+ + Z^dagger V + V^dagger Z + Z^dagger H- Z`` and ``H- - Z V^dagger - V Z^dagger + Z H+ Z^dagger``."""
    z = part.check_z(z)
    zh, v = dagger(z), part.v
    hp = part.h_plus + zh @ v + dagger(v) @ z + zh @ part.h_minus @ z
    hm = part.h_minus - z @ dagger(v) - v @ zh + z @ part.h_plus @ zh
    return HermitianMatrix(_symmetrize(hp)), HermitianMatrix(_symmetrize(hm))


def scaled_blocks(part: BlockPartition, z) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal blocks of ``U(Z)^dagger H U(Z)`` assuming ``Z`` is a root."""
    z = part.check_z(z)
    hp, hm = reduced_hamiltonians(part, z)
    a, b = inv_sqrt_gram(z)
    return _symmetrize(a @ hp.data @ a), _symmetrize(b @ hm.data @ b)
