"""Explicit 3x3 pipeline: a cubic for z1, a quadratic for z2, then a 2x2.

For ``H = [[h1, a*, b*], [a, h2, g*], [b, g, h3]]`` the row-vector Riccati
equation of the last-row split reads

    conj(b) z1^2 + (h1 - h3) z1 - b = -z2 (a + conj(g) z1)
    conj(g) z2^2 + (h2 - h3) z2 - g = -z1 (conj(a) + conj(b) z2)

Eliminating z2 leaves a cubic in z1 (Cardano over C); z2 then solves the
second equation.  The root pair fixes the reduced 2x2 Hamiltonian and a
final scalar Riccati equation gives the other two eigenvalues.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import hermitian
from .errors import (
    DegenerateAllZero,
    FullyDegenerate,
    NoValidPair,
    ResidualTooLarge,
)
from .reduction import direct_inv_sqrt_2, riccati_diagonalize
from .riccati import solve_2x2

PAIR_TOL = 1e-10


@dataclass(frozen=True)
class CubicCoefficients:
    c3: complex
    c2: complex
    c1: complex
    c0: complex

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        return (self.c3, self.c2, self.c1, self.c0)

    def __call__(self, z: complex) -> complex:
        return ((self.c3 * z + self.c2) * z + self.c1) * z + self.c0


@dataclass(frozen=True)
class Triple:
    lambda1: float
    lambda2: float
    lambda3: float

    def sorted(self) -> np.ndarray:
        return np.sort([self.lambda1, self.lambda2, self.lambda3])


def _entries(h):
    a = hermitian(h).data
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {a.shape}")
    return a[0, 0].real, a[1, 1].real, a[2, 2].real, a[1, 0], a[2, 0], a[2, 1]


def cubic_coefficients(h) -> CubicCoefficients:
    h1, h2, h3, al, be, ga = _entries(h)
    alc, bec, gac = al.conjugate(), be.conjugate(), ga.conjugate()
    aa, bb, gg = abs(al) ** 2, abs(be) ** 2, abs(ga) ** 2
    c3 = bec * gac * (h1 - h2) - al * bec**2 + alc * gac**2
    c2 = gac * ((h1 - h2) * (h1 - h3) + 2 * aa - bb - gg) - al * bec * (h1 + h2 - 2 * h3)
    c1 = -al * ((h1 - h3) * (h2 - h3) - aa - bb + 2 * gg) + be * gac * (-2 * h1 + h2 + h3)
    c0 = be**2 * gac + al * be * (h2 - h3) - al**2 * ga
    return CubicCoefficients(complex(c3), complex(c2), complex(c1), complex(c0))


def _cbrt(x: complex) -> complex:
    if x == 0:
        return 0j
    return cmath.exp(cmath.log(x) / 3.0)


def _polish(coeffs, z: complex, steps: int) -> complex:
    for _ in range(steps):
        p = 0j
        dp = 0j
        for c in coeffs:
            dp = dp * z + p
            p = p * z + c
        if dp == 0:
            break
        z = z - p / dp
    return z


def complex_cubic_roots(c: CubicCoefficients | tuple, polish_steps: int = 2) -> list[complex]:
    """Roots of ``c3 z^3 + c2 z^2 + c1 z + c0`` over C.

    Leading coefficients below ``1e-14 * scale`` are dropped (degree
    deflation).  The cubic case uses Cardano with the principal cube root
    and its two rotations by the unit cube roots; every root is then
    polished by Newton steps on the full polynomial.
    """
    coeffs = [complex(x) for x in (c.as_tuple() if isinstance(c, CubicCoefficients) else c)]
    scale = max(abs(x) for x in coeffs)
    if scale == 0 or all(abs(x) <= 1e-14 * scale for x in coeffs):
        raise DegenerateAllZero("all cubic coefficients vanish")
    while abs(coeffs[0]) <= 1e-14 * scale:
        coeffs.pop(0)
    deg = len(coeffs) - 1
    if deg == 0:
        return []
    if deg == 1:
        roots = [-coeffs[1] / coeffs[0]]
    elif deg == 2:
        roots = list(_quadratic_roots(*coeffs))
    else:
        roots = _cardano(*coeffs)
    return [_polish(coeffs, z, polish_steps) for z in roots]


def _quadratic_roots(a: complex, b: complex, c: complex) -> tuple[complex, complex]:
    disc = cmath.sqrt(b * b - 4 * a * c)
    # pick the sign that avoids cancellation
    q = -0.5 * (b + disc) if (b.conjugate() * disc).real >= 0 else -0.5 * (b - disc)
    if q == 0:
        return 0j, 0j
    return q / a, c / q


def _cardano(a: complex, b: complex, c: complex, d: complex) -> list[complex]:
    b, c, d = b / a, c / a, d / a
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = cmath.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    u3 = -q / 2.0 + disc
    alt = -q / 2.0 - disc
    if abs(alt) > abs(u3):
        u3 = alt
    u = _cbrt(u3)
    if u == 0:
        return [-shift] * 3
    omega = complex(-0.5, math.sqrt(3.0) / 2.0)
    roots = []
    for k in range(3):
        uk = u * omega**k
        roots.append(uk - p / (3.0 * uk) - shift)
    return roots


def quad_z2(z1: complex, h) -> list[complex]:
    """Roots in z2 of ``conj(g) z2^2 + (h2 - h3 + conj(b) z1) z2 + conj(a) z1 - g = 0``."""
    _, h2, h3, al, be, ga = _entries(h)
    z1 = complex(z1)
    a = ga.conjugate()
    b = h2 - h3 + be.conjugate() * z1
    c = al.conjugate() * z1 - ga
    scale = max(1.0, abs(a), abs(b), abs(c))
    if abs(a) > 1e-14 * scale:
        return list(_quadratic_roots(complex(a), complex(b), complex(c)))
    if abs(b) > 1e-14 * scale:
        return [-c / b]
    raise FullyDegenerate("z2 equation has no nonzero coefficient")


def pair_residuals(z1: complex, z2: complex, h) -> tuple[complex, complex]:
    """Both component equations of the row-vector Riccati equation at ``(z1, z2)``."""
    h1, h2, h3, al, be, ga = _entries(h)
    r1 = be.conjugate() * z1**2 + (h1 - h3) * z1 - be + z2 * (al + ga.conjugate() * z1)
    r2 = ga.conjugate() * z2**2 + (h2 - h3) * z2 - ga + z1 * (al.conjugate() + be.conjugate() * z2)
    return r1, r2


def select_root_pair(candidates, h, tol: float = PAIR_TOL) -> tuple[complex, complex]:
    """The candidate minimizing the joint residual; ``tol`` is relative to ``max(1, ||H||_max)``."""
    hm = hermitian(h)
    limit = tol * hm.scale
    best, best_res = None, math.inf
    for z1, z2 in candidates:
        res = max(abs(r) for r in pair_residuals(z1, z2, hm))
        if res < best_res:
            best, best_res = (complex(z1), complex(z2)), res
    if best is None or best_res > limit:
        raise NoValidPair(f"no root pair below {limit:.3e} (best {best_res:.3e})", best_res)
    return best


def reduced_2x2(h, z1: complex, z2: complex) -> tuple[float, float, complex]:
    """``(k1, k2, zeta)`` of ``(1 + Z^dagger Z)^{-1/2} H~+ (1 + Z^dagger Z)^{-1/2}``."""
    hm = hermitian(h)
    h1, h2, h3, al, be, ga = _entries(hm)
    z1, z2 = complex(z1), complex(z2)
    zb1, zb2 = z1.conjugate(), z2.conjugate()
    alc, bec, gac = al.conjugate(), be.conjugate(), ga.conjugate()
    ht = np.array(
        [
            [h1 + bec * z1 + be * zb1 + h3 * abs(z1) ** 2, alc + ga * zb1 + bec * z2 + h3 * zb1 * z2],
            [al + gac * z1 + be * zb2 + h3 * z1 * zb2, h2 + gac * z2 + ga * zb2 + h3 * abs(z2) ** 2],
        ]
    )
    if z1 == 0 and z2 == 0:
        inv = np.eye(2)
    else:
        inv = direct_inv_sqrt_2(z1, z2)
    red = inv @ ht @ inv
    limit = 1e-11 * hm.scale * (1.0 + abs(z1) ** 2 + abs(z2) ** 2)
    if abs(red[0, 0].imag) > limit or abs(red[1, 1].imag) > limit:
        raise ResidualTooLarge("reduced 2x2 has a non-real diagonal; bad root pair")
    return float(red[0, 0].real), float(red[1, 1].real), complex(red[1, 0])


def split_eigenvalue(h, z1: complex, z2: complex) -> float:
    """``h~3 / (1 + |z1|^2 + |z2|^2)``, the eigenvalue peeled off by ``(z1, z2)``."""
    h1, h2, h3, al, be, ga = _entries(h)
    zb1, zb2 = z1.conjugate(), z2.conjugate()
    num = (
        h3
        - (be.conjugate() * z1 + be * zb1)
        - (ga.conjugate() * z2 + ga * zb2)
        + h1 * abs(z1) ** 2
        + al.conjugate() * z1 * zb2
        + al * zb1 * z2
        + h2 * abs(z2) ** 2
    )
    return float(num.real / (1.0 + abs(z1) ** 2 + abs(z2) ** 2))


def root_pair(h) -> tuple[complex, complex]:
    """Cubic roots crossed with the z2 roots, filtered by the joint residual."""
    hm = hermitian(h)
    roots1 = complex_cubic_roots(cubic_coefficients(hm))
    candidates = []
    for z1 in roots1:
        try:
            candidates.extend((z1, z2) for z2 in quad_z2(z1, hm))
        except FullyDegenerate:
            continue
    return select_root_pair(candidates, hm)


def eigenvalues_3x3(h) -> Triple:
    """Three eigenvalues of a 3x3 Hermitian matrix along the explicit route.

    When the cubic collapses (all coefficients zero) or no root pair
    survives, falls back to :func:`riccati_diagonalize`.
    """
    hm = hermitian(h)
    _entries(hm)
    try:
        z1, z2 = root_pair(hm)
        k1, k2, zeta = reduced_2x2(hm, z1, z2)
    except (DegenerateAllZero, NoValidPair, ResidualTooLarge):
        ev = riccati_diagonalize(hm).column_eigenvalues
        return Triple(float(ev[0]), float(ev[1]), float(ev[2]))
    (_, pair), *_ = solve_2x2(k1, k2, zeta)
    return Triple(pair.lambda1, pair.lambda2, split_eigenvalue(hm, z1, z2))


__all__ = [
    "CubicCoefficients",
    "Triple",
    "complex_cubic_roots",
    "cubic_coefficients",
    "eigenvalues_3x3",
    "pair_residuals",
    "quad_z2",
    "reduced_2x2",
    "root_pair",
    "select_root_pair",
    "split_eigenvalue",
]
