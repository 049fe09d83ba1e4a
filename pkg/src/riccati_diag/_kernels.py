"""Hot inner loops: complex Jacobi rotations and Gaussian elimination.

Each kernel exists twice, a numba ``@njit`` version and a pure-numpy
version with identical semantics.  The numba path is used when numba is
importable and the environment variable ``RICCATI_DIAG_PURE_NUMPY`` is not
set to a truthy value.  Both variants stay importable so ``bench`` can time
them side by side.
"""

from __future__ import annotations

import math
import os

import numpy as np

_PURE = os.environ.get("RICCATI_DIAG_PURE_NUMPY", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

HAVE_NUMBA = numba is not None


def backend() -> str:
    """Name of the kernel backend in use, ``"numba"`` or ``"numpy"``."""
    return "numba" if (HAVE_NUMBA and not _PURE) else "numpy"


# ---------------------------------------------------------------------------
# Jacobi eigensolver for complex Hermitian matrices
#
# Pivot (p, q) with c = A[p, q] = r e^{i phi}.  D = diag(1, e^{-i phi}) makes
# the 2x2 block real symmetric, R = [[cs, sn], [-sn, cs]] with
# tan(2 theta) = 2 r / (A[q,q] - A[p,p]) annihilates it.  G = D R, and
# A <- G^H A G, V <- V G.


def _jacobi_eigh_py(a, tol, max_rot):
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = np.max(np.abs(a)) if n else 0.0
    if n < 2:
        return a.diagonal().real.copy(), v, 0, 0.0, True
    thresh = tol * scale
    iu = np.triu_indices(n, 1)
    rot = 0
    while True:
        off = np.abs(a[iu])
        idx = int(np.argmax(off))
        amax = off[idx]
        if amax <= thresh or amax == 0.0:
            return a.diagonal().real.copy(), v, rot, amax, True
        if rot >= max_rot:
            return a.diagonal().real.copy(), v, rot, amax, False
        p, q = int(iu[0][idx]), int(iu[1][idx])
        c = a[p, q]
        r = abs(c)
        e = c / r
        theta = 0.5 * math.atan2(2.0 * r, a[q, q].real - a[p, p].real)
        cs, sn = math.cos(theta), math.sin(theta)
        gpp, gpq, gqp, gqq = cs, sn, -sn * e.conjugate(), cs * e.conjugate()
        colp = a[:, p].copy()
        colq = a[:, q].copy()
        a[:, p] = colp * gpp + colq * gqp
        a[:, q] = colp * gpq + colq * gqq
        rowp = a[p, :].copy()
        rowq = a[q, :].copy()
        a[p, :] = np.conj(gpp) * rowp + np.conj(gqp) * rowq
        a[q, :] = np.conj(gpq) * rowp + np.conj(gqq) * rowq
        a[p, q] = 0.0
        a[q, p] = 0.0
        a[p, p] = a[p, p].real
        a[q, q] = a[q, q].real
        vp = v[:, p].copy()
        vq = v[:, q].copy()
        v[:, p] = vp * gpp + vq * gqp
        v[:, q] = vp * gpq + vq * gqq
        rot += 1


def _jacobi_eigh_nb(a_in, tol, max_rot):
    n = a_in.shape[0]
    a = a_in.copy()
    v = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        v[i, i] = 1.0
    scale = 0.0
    for i in range(n):
        for j in range(n):
            m = abs(a[i, j])
            if m > scale:
                scale = m
    diag = np.empty(n, dtype=np.float64)
    if n < 2:
        for i in range(n):
            diag[i] = a[i, i].real
        return diag, v, 0, 0.0, True
    thresh = tol * scale
    rot = 0
    converged = False
    amax = 0.0
    while True:
        amax = 0.0
        p = 0
        q = 1
        for i in range(n - 1):
            for j in range(i + 1, n):
                m = abs(a[i, j])
                if m > amax:
                    amax = m
                    p = i
                    q = j
        if amax <= thresh or amax == 0.0:
            converged = True
            break
        if rot >= max_rot:
            break
        c = a[p, q]
        r = abs(c)
        e = c / r
        theta = 0.5 * math.atan2(2.0 * r, a[q, q].real - a[p, p].real)
        cs = math.cos(theta)
        sn = math.sin(theta)
        ec = e.conjugate()
        gqp = -sn * ec
        gqq = cs * ec
        for i in range(n):
            xp = a[i, p]
            xq = a[i, q]
            a[i, p] = xp * cs + xq * gqp
            a[i, q] = xp * sn + xq * gqq
        for j in range(n):
            yp = a[p, j]
            yq = a[q, j]
            a[p, j] = cs * yp + gqp.conjugate() * yq
            a[q, j] = sn * yp + gqq.conjugate() * yq
        a[p, q] = 0.0
        a[q, p] = 0.0
        a[p, p] = a[p, p].real
        a[q, q] = a[q, q].real
        for i in range(n):
            xp = v[i, p]
            xq = v[i, q]
            v[i, p] = xp * cs + xq * gqp
            v[i, q] = xp * sn + xq * gqq
        rot += 1
    for i in range(n):
        diag[i] = a[i, i].real
    return diag, v, rot, amax, converged


# ---------------------------------------------------------------------------
# Gaussian elimination with partial pivoting (complex, single right-hand side)


def _gauss_solve_py(a, b, rtol):
    a = np.array(a, dtype=np.complex128, copy=True)
    x = np.array(b, dtype=np.complex128, copy=True)
    n = a.shape[0]
    scale = np.max(np.abs(a)) if n else 0.0
    floor = rtol * scale
    for col in range(n):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[piv, col]) <= floor or a[piv, col] == 0.0:
            return x, False
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            x[[col, piv]] = x[[piv, col]]
        f = a[col + 1:, col] / a[col, col]
        a[col + 1:, col:] -= np.outer(f, a[col, col:])
        x[col + 1:] -= f * x[col]
    for row in range(n - 1, -1, -1):
        x[row] = (x[row] - a[row, row + 1:] @ x[row + 1:]) / a[row, row]
    return x, True


def _gauss_solve_nb(a_in, b_in, rtol):
    a = a_in.copy()
    x = b_in.copy()
    n = a.shape[0]
    scale = 0.0
    for i in range(n):
        for j in range(n):
            m = abs(a[i, j])
            if m > scale:
                scale = m
    floor = rtol * scale
    for col in range(n):
        piv = col
        best = abs(a[col, col])
        for i in range(col + 1, n):
            m = abs(a[i, col])
            if m > best:
                best = m
                piv = i
        if best <= floor or best == 0.0:
            return x, False
        if piv != col:
            for j in range(n):
                t = a[col, j]
                a[col, j] = a[piv, j]
                a[piv, j] = t
            t = x[col]
            x[col] = x[piv]
            x[piv] = t
        d = a[col, col]
        for i in range(col + 1, n):
            f = a[i, col] / d
            if f != 0.0:
                for j in range(col, n):
                    a[i, j] -= f * a[col, j]
                x[i] -= f * x[col]
    for row in range(n - 1, -1, -1):
        s = x[row]
        for j in range(row + 1, n):
            s -= a[row, j] * x[j]
        x[row] = s / a[row, row]
    return x, True


jacobi_eigh_numpy = _jacobi_eigh_py
gauss_solve_numpy = _gauss_solve_py

if HAVE_NUMBA:
    jacobi_eigh_numba = numba.njit(cache=True)(_jacobi_eigh_nb)
    gauss_solve_numba = numba.njit(cache=True)(_gauss_solve_nb)
else:  # pragma: no cover
    jacobi_eigh_numba = None
    gauss_solve_numba = None


def jacobi_eigh(a: np.ndarray, tol: float = 1e-15, max_rot: int | None = None):
    """Diagonalize a Hermitian matrix by largest-pivot Jacobi rotations.

    Returns ``(diag, v, rotations, offdiag_max, converged)`` with the
    eigenvalues unsorted, in the order of the columns of ``v``.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    n = a.shape[0]
    if max_rot is None:
        max_rot = 50 * n * n
    if backend() == "numba":
        return jacobi_eigh_numba(a, float(tol), int(max_rot))
    return jacobi_eigh_numpy(a, float(tol), int(max_rot))


def gauss_solve(a: np.ndarray, b: np.ndarray, rtol: float = 1e-13):
    """Solve ``a x = b``; returns ``(x, ok)`` where ``ok`` is False when singular."""
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    if backend() == "numba":
        return gauss_solve_numba(a, b, float(rtol))
    return gauss_solve_numpy(a, b, float(rtol))
