"""Peel one eigenvalue per step until the problem is 2x2.

At every step the last coordinate is split off: ``H = [[H+, V^dagger], [V, h_n]]``
with ``V`` a row.  A row-vector root ``Z`` of the Riccati equation decouples
the last row and column, the split-off eigenvalue is
``h~_n / (1 + |Z|^2)`` and the remaining problem is
``(1 + Z^dagger Z)^{-1/2} H~+ (1 + Z^dagger Z)^{-1/2}``.  For a row vector
that inverse square root has a closed form, see :func:`rank_one_inv_sqrt`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .core import (
    HermitianMatrix,
    UnitaryFactor,
    _symmetrize,
    as_matrix,
    block_split,
    dagger,
    grassmann_frame,
    hermitian,
    max_norm,
)
from .errors import NoConvergence, SingularLinearization, ZeroVector
from .riccati import newton_refine, riccati_residual, solve_2x2, spectral_gap_check, sylvester_integral

DEFAULT_TOL = 1e-10
N_RANDOM_SEEDS = 8


def seed_from_env() -> int:
    """Generator seed for the random part of the seed ladder (``RICCATI_DIAG_SEED``)."""
    return int(os.environ.get("RICCATI_DIAG_SEED", "0"))


@dataclass(frozen=True)
class ReductionStep:
    step_index: int
    z: np.ndarray
    eigenvalue: float
    unitary: UnitaryFactor
    residual_norm: float
    seed: str = ""


@dataclass(frozen=True)
class DiagonalizationResult:
    eigenvalues: np.ndarray
    unitary: UnitaryFactor
    max_offdiag: float
    steps: tuple[ReductionStep, ...] = field(default_factory=tuple)
    column_eigenvalues: np.ndarray | None = None


def _seed_ladder(part, n_random: int, rng_seed: int):
    m, k = part.v.shape
    try:
        if spectral_gap_check(part):
            yield "sylvester", sylvester_integral(part).z
    except Exception:  # noqa: BLE001 - a failed seed just moves to the next rung
        pass
    yield "zero", np.zeros((m, k), dtype=np.complex128)
    denom = float(np.mean(part.h_plus.diagonal().real)) - float(part.h_minus[0, 0].real)
    if denom != 0.0:
        yield "last-row", part.v / denom
    rng = np.random.default_rng(rng_seed)
    for i in range(n_random):
        z = (rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))) / math.sqrt(2)
        yield f"random-{i}", z


def vector_riccati_solve(h, tol: float = DEFAULT_TOL, *, rng_seed: int | None = None, max_iter: int = 60):
    """Row vector ``Z`` solving the n-1 coupled quadratics of the last-row split.

    Newton refinement is run from each rung of a deterministic seed ladder.
    The first converged root with ``||Z||_2 <= sqrt(n)`` is returned at once;
    otherwise the smallest converged root found over the whole ladder wins
    (large ``Z`` amplifies rounding in the reduced matrix).

    Returns ``(z, residual, seed_name)``.
    """
    h = hermitian(h)
    part = block_split(h, h.n - 1)
    m, k = part.v.shape
    if not np.any(part.v):
        return np.zeros((m, k), dtype=np.complex128), 0.0, "decoupled"
    if rng_seed is None:
        rng_seed = seed_from_env()
    small = math.sqrt(h.n)
    best = None
    best_res = math.inf
    for name, z0 in _seed_ladder(part, N_RANDOM_SEEDS, rng_seed):
        try:
            sol = newton_refine(part, z0, tol, max_iter)
        except NoConvergence as exc:
            best_res = min(best_res, exc.residual)
            continue
        except SingularLinearization:
            continue
        norm = float(np.linalg.norm(sol.z))
        if norm <= small:
            return sol.z, sol.residual_norm, name
        if best is None or norm < best[0]:
            best = (norm, sol, name)
    if best is not None:
        return best[1].z, best[1].residual_norm, best[2]
    raise NoConvergence(f"seed ladder exhausted (best residual {best_res:.3e})", residual=best_res)


def rank_one_inv_sqrt(z) -> np.ndarray:
    """Closed-form ``(1_{n-1} + Z^dagger Z)^{-1/2}`` for a nonzero row vector ``Z``.

    Writes ``Z = z_p (1, W)`` about the largest-modulus entry ``z_p`` and
    uses ``M diag(1 / ((1 + W W^dagger) sqrt(1 + |Z|^2)), 1 - W^dagger W / (1 + W W^dagger)) M^dagger``
    with ``M = [[1, -W], [W^dagger, 1]]``, so no nested inverse square root
    is ever formed.
    """
    z = as_matrix(z)
    if z.shape[0] != 1:
        raise ValueError("expected a row vector")
    row = z[0]
    d = row.size
    p = int(np.argmax(np.abs(row)))
    if row[p] == 0:
        raise ZeroVector("Z is the zero vector; the inverse square root is the identity")
    perm = np.arange(d)
    perm[[0, p]] = perm[[p, 0]]
    zp = row[perm]
    w = (zp[1:] / zp[0]).reshape(1, -1)
    total = float(np.sum(np.abs(row) ** 2))
    ww = float(np.sum(np.abs(w) ** 2))
    mid = np.zeros((d, d), dtype=np.complex128)
    mid[0, 0] = 1.0 / ((1.0 + ww) * math.sqrt(1.0 + total))
    mid[1:, 1:] = np.eye(d - 1) - dagger(w) @ w / (1.0 + ww)
    frame = np.eye(d, dtype=np.complex128)
    frame[0, 1:] = -w[0]
    frame[1:, 0] = np.conj(w[0])
    a = frame @ mid @ dagger(frame)
    out = np.empty_like(a)
    out[np.ix_(perm, perm)] = a
    return _symmetrize(out)


def direct_inv_sqrt_2(z1: complex, z2: complex) -> np.ndarray:
    """The two-component special case of :func:`rank_one_inv_sqrt`, written out entrywise."""
    a1, a2 = abs(z1) ** 2, abs(z2) ** 2
    s = math.sqrt(1.0 + a1 + a2)
    c = np.conj(z1) * z2
    m = np.array([[a1 / s + a2, c / s - c], [np.conj(c) / s - np.conj(c), a2 / s + a1]])
    return m / (a1 + a2)


def row_inv_sqrt(z: np.ndarray) -> np.ndarray:
    if not np.any(z):
        return np.eye(z.shape[1], dtype=np.complex128)
    return rank_one_inv_sqrt(z)


def _peel(a: np.ndarray, z: np.ndarray):
    """Reduced matrix, split eigenvalue and step unitary for a root ``z`` of ``a``."""
    n = a.shape[0]
    hp, v, hn = a[:-1, :-1], a[-1:, :-1], a[-1, -1].real
    zh = dagger(z)
    total = float(np.sum(np.abs(z) ** 2))
    ht_plus = hp + zh @ v + dagger(v) @ z + hn * (zh @ z)
    ht_n = hn - 2.0 * (z @ dagger(v))[0, 0].real + (z @ hp @ zh)[0, 0].real
    inv = row_inv_sqrt(z)
    reduced = _symmetrize(inv @ ht_plus @ inv)
    ud = np.zeros((n, n), dtype=np.complex128)
    ud[:-1, :-1] = inv
    ud[-1, -1] = 1.0 / math.sqrt(1.0 + total)
    return reduced, ht_n / (1.0 + total), grassmann_frame(z) @ ud


def reduce_once(h, tol: float = DEFAULT_TOL, *, step_index: int = 0, rng_seed: int | None = None):
    """Split off the last coordinate of ``h`` (n >= 3).

    Returns the (n-1)x(n-1) reduced :class:`HermitianMatrix` and the
    :class:`ReductionStep` carrying the split eigenvalue.
    """
    h = hermitian(h)
    if h.n < 3:
        raise ValueError("reduce_once needs n >= 3; use solve_2x2 for n = 2")
    z, res, seed = vector_riccati_solve(h, tol, rng_seed=rng_seed)
    reduced, lam, u = _peel(h.data, z)
    return HermitianMatrix(reduced), ReductionStep(step_index, z, lam, UnitaryFactor(u), res, seed)


def _step_2x2(a: np.ndarray, step_index: int):
    (sol, pair), *_ = solve_2x2(a[0, 0].real, a[1, 1].real, a[1, 0])
    z = np.array(sol.z)
    u = grassmann_frame(z) / math.sqrt(1.0 + abs(z[0, 0]) ** 2)
    return pair, ReductionStep(step_index, z, pair.lambda2, UnitaryFactor(u), sol.residual_norm, "closed-form")


def riccati_diagonalize(h, tol: float = DEFAULT_TOL, *, rng_seed: int | None = None) -> DiagonalizationResult:
    """Diagonalize ``h`` by repeated last-row reduction.

    The accumulated unitary is ``U_1 (U_2 + 1) (U_3 + 1_2) ...`` where each
    step unitary is padded with identity on the coordinates already peeled.
    On failure :class:`NoConvergence` carries the partial result in
    ``partial``.
    """
    h = hermitian(h)
    n = h.n
    total_u = np.eye(n, dtype=np.complex128)
    col_eigs = np.zeros(n)
    steps: list[ReductionStep] = []
    a = np.array(h.data)
    size = n
    try:
        while size >= 3:
            reduced, step = reduce_once(HermitianMatrix(a), tol, step_index=len(steps), rng_seed=rng_seed)
            total_u[:, :size] = total_u[:, :size] @ step.unitary.u
            col_eigs[size - 1] = step.eigenvalue
            steps.append(step)
            a = np.array(reduced.data)
            size -= 1
        if size == 2:
            pair, step = _step_2x2(a, len(steps))
            total_u[:, :2] = total_u[:, :2] @ step.unitary.u
            col_eigs[1], col_eigs[0] = pair.lambda2, pair.lambda1
            steps.append(step)
        else:
            col_eigs[0] = a[0, 0].real
    except NoConvergence as exc:
        exc.partial = {"steps": tuple(steps), "eigenvalues_found": col_eigs[size:].copy(), "remaining": a}
        raise
    unitary = UnitaryFactor(total_u)
    conj = dagger(total_u) @ h.data @ total_u
    offdiag = max_norm(conj - np.diag(col_eigs))
    return DiagonalizationResult(np.sort(col_eigs), unitary, offdiag, tuple(steps), col_eigs)


__all__ = [
    "DiagonalizationResult",
    "ReductionStep",
    "direct_inv_sqrt_2",
    "rank_one_inv_sqrt",
    "reduce_once",
    "riccati_diagonalize",
    "riccati_residual",
    "vector_riccati_solve",
]
