"""One-shot 3x3 diagonalization over the flag manifold SU(3)/U(1)xU(1).

A chart ``(x, y, z)`` gives a unitary ``U = U_M U_D``; the three strictly
lower entries ``w21, w31, w32`` of ``U_M^dagger H U_M`` vanish exactly when
``U`` diagonalizes ``H``.  :func:`flag_residuals` evaluates them from their
hand-expanded closed forms.  Solving all three at once has no known closed
form, so :func:`flag_solve` is an experimental damped Newton iteration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import UnitaryFactor, dagger, hermitian, max_norm
from .errors import NoConvergence
from .reduction import riccati_diagonalize, seed_from_env


@dataclass(frozen=True)
class FlagCoordinate:
    x: complex
    y: complex
    z: complex
    delta1: float = field(init=False)
    delta2: float = field(init=False)

    def __post_init__(self):
        x, y, z = complex(self.x), complex(self.y), complex(self.z)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "delta1", 1.0 + abs(x) ** 2 + abs(y) ** 2)
        object.__setattr__(self, "delta2", 1.0 + abs(z) ** 2 + abs(x * z - y) ** 2)

    def as_real(self) -> np.ndarray:
        return np.array([self.x.real, self.x.imag, self.y.real, self.y.imag, self.z.real, self.z.imag])

    @classmethod
    def from_real(cls, r) -> "FlagCoordinate":
        return cls(complex(r[0], r[1]), complex(r[2], r[3]), complex(r[4], r[5]))


@dataclass(frozen=True)
class FlagResiduals:
    w21: complex
    w31: complex
    w32: complex

    def max_abs(self) -> float:
        return max(abs(self.w21), abs(self.w31), abs(self.w32))

    def as_real(self) -> np.ndarray:
        w = (self.w21, self.w31, self.w32)
        return np.array([v for c in w for v in (c.real, c.imag)])


def flag_frame(c: FlagCoordinate) -> np.ndarray:
    """``U_M`` of the flag chart (columns orthogonal, not normalized)."""
    x, y, z, d1 = c.x, c.y, c.z, c.delta1
    xb, yb, zb = x.conjugate(), y.conjugate(), z.conjugate()
    s = xb + yb * z
    return np.array(
        [
            [1.0, -s, xb * zb - yb],
            [x, d1 - x * s, -zb],
            [y, z * d1 - y * s, 1.0],
        ],
        dtype=np.complex128,
    )


def build_flag_unitary(c: FlagCoordinate) -> UnitaryFactor:
    d1, d2 = c.delta1, c.delta2
    ud = np.diag([d1**-0.5, (d1 * d2) ** -0.5, d2**-0.5])
    return UnitaryFactor(flag_frame(c) @ ud)


def _abc(c: FlagCoordinate, a: np.ndarray):
    """The first column of H U_M: ``(h1 + x conj(a) + y conj(b), a + x h2 + y conj(g), b + x g + y h3)``."""
    h1, h2, h3 = a[0, 0].real, a[1, 1].real, a[2, 2].real
    al, be, ga = a[1, 0], a[2, 0], a[2, 1]
    x, y = c.x, c.y
    first = h1 + x * al.conjugate() + y * be.conjugate()
    second = al + x * h2 + y * ga.conjugate()
    third = be + x * ga + y * h3
    return first, second, third


def flag_residuals(c: FlagCoordinate, h) -> FlagResiduals:
    """Strictly lower entries of ``U_M^dagger H U_M`` from their expanded forms."""
    a = hermitian(h).data
    if a.shape != (3, 3):
        raise ValueError("flag residuals are defined for 3x3 matrices")
    h2, h3 = a[1, 1].real, a[2, 2].real
    al, be, ga = a[1, 0], a[2, 0], a[2, 1]
    x, y, z, d1 = c.x, c.y, c.z, c.delta1
    xb, yb, zb = x.conjugate(), y.conjugate(), z.conjugate()
    f1, f2, f3 = _abc(c, a)
    t = x + y * zb
    w21 = -t * f1 + (d1 - xb * t) * f2 + (zb * d1 - yb * t) * f3
    u = x * z - y
    w31 = u * f1 - z * f2 + f3
    # (row 3 of U_M^dagger) H, second and third entries
    r2 = u * al.conjugate() - z * h2 + ga
    r3 = u * be.conjugate() - z * ga.conjugate() + h3
    w32 = -(xb + yb * z) * w31 + d1 * (r2 + r3 * z)
    return FlagResiduals(complex(w21), complex(w31), complex(w32))


def z_quotient_defect(c: FlagCoordinate, h) -> complex:
    """``z (x f1 - f2) - (y f1 - f3)``; zero whenever ``w31`` vanishes."""
    f1, f2, f3 = _abc(c, hermitian(h).data)
    return c.z * (c.x * f1 - f2) - (c.y * f1 - f3)


def z_quadratic(c: FlagCoordinate, h) -> complex:
    """``(x conj(b) - conj(g)) z^2 + (h3 - h2 + x conj(a) - y conj(b)) z - y conj(a) + g``."""
    a = hermitian(h).data
    h2, h3 = a[1, 1].real, a[2, 2].real
    al, be, ga = a[1, 0], a[2, 0], a[2, 1]
    x, y, z = c.x, c.y, c.z
    alc, bec, gac = al.conjugate(), be.conjugate(), ga.conjugate()
    return (x * bec - gac) * z**2 + (h3 - h2 + x * alc - y * bec) * z - y * alc + ga


def coordinate_from_unitary(q: np.ndarray) -> FlagCoordinate | None:
    """Flag chart whose frame spans the columns of ``q`` line by line, if it exists."""
    if abs(q[0, 0]) < 1e-12 or abs(q[2, 2]) < 1e-12:
        return None
    x = q[1, 0] / q[0, 0]
    y = q[2, 0] / q[0, 0]
    z = -np.conj(q[1, 2] / q[2, 2])
    return FlagCoordinate(x, y, z)


@dataclass(frozen=True)
class FlagSolveResult:
    coordinate: FlagCoordinate
    residuals: FlagResiduals
    converged: bool
    iterations: int
    seed: str


def _seeds(a: np.ndarray, rng_seed: int):
    seeds = []
    try:
        u = riccati_diagonalize(a).unitary.u
    except NoConvergence:
        u = None
    if u is not None:
        for perm in itertools.permutations(range(3)):
            c = coordinate_from_unitary(u[:, perm])
            if c is not None:
                seeds.append((c.delta1 * c.delta2, f"reduction-{''.join(map(str, perm))}", c))
    seeds.sort(key=lambda s: s[0])
    yield from ((name, c) for _, name, c in seeds)
    yield "zero", FlagCoordinate(0, 0, 0)
    rng = np.random.default_rng(rng_seed)
    for i in range(8):
        r = rng.standard_normal(6)
        yield f"random-{i}", FlagCoordinate.from_real(r)


def _newton(a, c0, target, max_iter):
    r = c0.as_real()
    f = flag_residuals(c0, a).as_real()
    it = 0
    while np.max(np.abs(f)) > target and it < max_iter:
        step = 1e-6 * max(1.0, float(np.max(np.abs(r))))
        jac = np.empty((6, 6))
        for j in range(6):
            e = np.zeros(6)
            e[j] = step
            jac[:, j] = (
                flag_residuals(FlagCoordinate.from_real(r + e), a).as_real()
                - flag_residuals(FlagCoordinate.from_real(r - e), a).as_real()
            ) / (2 * step)
        try:
            delta = np.linalg.lstsq(jac, -f, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        t = 1.0
        norm = np.linalg.norm(f)
        for _ in range(30):
            cand = r + t * delta
            fc = flag_residuals(FlagCoordinate.from_real(cand), a).as_real()
            if np.linalg.norm(fc) < norm:
                break
            t *= 0.5
        else:
            break
        r, f = cand, fc
        it += 1
    return FlagCoordinate.from_real(r), it


def flag_solve(h, tol: float = 1e-10, max_iter: int = 50, *, rng_seed: int | None = None) -> FlagSolveResult:
    """Experimental simultaneous solve of ``w21 = w31 = w32 = 0``.

    Damped Newton on the real 6x6 system with a central finite-difference
    Jacobian.  Seeds come first from the reduction solution (every column
    order of its eigenvector matrix mapped into the chart), then zero and
    eight fixed pseudo-random points.  The best iterate is returned even
    when nothing converges, with ``converged=False``.
    """
    hm = hermitian(h)
    a = hm.data
    target = tol * hm.scale
    if rng_seed is None:
        rng_seed = seed_from_env()
    best = None
    for name, c0 in _seeds(a, rng_seed):
        c, it = _newton(a, c0, target, max_iter)
        res = flag_residuals(c, a)
        ok = res.max_abs() <= target
        if best is None or res.max_abs() < best.residuals.max_abs():
            best = FlagSolveResult(c, res, ok, it, name)
        if ok:
            return best
    return best


def flag_eigenvalues(c: FlagCoordinate, h) -> tuple[np.ndarray, float]:
    """Diagonal of ``U^dagger H U`` and its largest off-diagonal magnitude."""
    a = hermitian(h).data
    u = build_flag_unitary(c).u
    w = dagger(u) @ a @ u
    return w.diagonal().real.copy(), max_norm(w - np.diag(w.diagonal()))
