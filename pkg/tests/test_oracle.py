import math

import numpy as np
import pytest

from riccati_diag.core import BlockPartition, validate_hermitian
from riccati_diag.errors import SingularOperator, TooLarge
from riccati_diag.oracle import (
    CharPoly,
    char_poly,
    conjugation_residual,
    jacobi_eigensolve,
    poly_roots,
    sylvester_bruteforce,
)
from riccati_diag.riccati import sylvester_integral

from .conftest import random_gapped_partition, random_hermitian


class TestCharPoly:
    def test_diagonal(self):
        np.testing.assert_allclose(char_poly(np.diag([1.0, 2.0])).coefficients, [1, -3, 2])

    def test_three_by_three_formula(self, rng):
        for _ in range(20):
            h = validate_hermitian(random_hermitian(rng, 3)).data
            h1, h2, h3 = h.diagonal().real
            al, be, ga = h[1, 0], h[2, 0], h[2, 1]
            aa, bb, gg = abs(al) ** 2, abs(be) ** 2, abs(ga) ** 2
            c2 = -(h1 + h2 + h3)
            c1 = h1 * h2 + h2 * h3 + h3 * h1 - aa - bb - gg
            c0 = -(h1 * h2 * h3 - h1 * gg - h2 * bb - h3 * aa + 2 * (np.conj(al) * np.conj(ga) * be).real)
            np.testing.assert_allclose(char_poly(h).coefficients, [1, c2, c1, c0], atol=1e-12)

    def test_worked(self):
        h = np.array([[2, 0, 1], [0, 3, 1], [1, 1, 4]])
        np.testing.assert_allclose(char_poly(h).coefficients, [1, -9, 24, -19], atol=1e-13)

    def test_too_large(self):
        with pytest.raises(TooLarge):
            char_poly(np.eye(13))

    def test_callable(self):
        assert CharPoly(np.array([1, -3, 2]))(1) == 0


class TestPolyRoots:
    def test_quadratic(self):
        np.testing.assert_allclose(poly_roots(np.array([1, 0, -5])), [-math.sqrt(5), math.sqrt(5)], atol=1e-14)

    def test_cubic(self):
        np.testing.assert_allclose(poly_roots(np.array([1, -6, 11, -6])), [1, 2, 3], atol=1e-13)

    def test_hermitian_source_is_real(self, rng):
        h = random_hermitian(rng, 8)
        roots = poly_roots(char_poly(h))
        assert np.abs(roots.imag).max() <= 1e-10
        np.testing.assert_allclose(roots.real, np.linalg.eigvalsh(h), atol=1e-9)

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            poly_roots(np.array([1.0]))


class TestJacobi:
    def test_diagonal(self):
        s = jacobi_eigensolve(np.diag([3.0, 1.0, 2.0]))
        assert s.n_rotations == 0 and s.eigenvalues.tolist() == [1, 2, 3]

    def test_pauli_x(self):
        s = jacobi_eigensolve(np.array([[0, 1], [1, 0]]))
        np.testing.assert_allclose(s.eigenvalues, [-1, 1], atol=1e-15)
        assert s.n_rotations == 1

    def test_random_twelve(self, rng):
        h = validate_hermitian(random_hermitian(rng, 12))
        s = jacobi_eigensolve(h)
        np.testing.assert_allclose(s.eigenvalues, np.sort(poly_roots(char_poly(h)).real), atol=1e-9)
        assert conjugation_residual(h, s) <= 1e-12 * h.scale


class TestSylvesterBruteforce:
    def test_scalar(self):
        assert sylvester_bruteforce(BlockPartition(1, [[2]], [[0]], [[1]]))[0, 0] == pytest.approx(0.5)

    def test_singular(self):
        with pytest.raises(SingularOperator):
            sylvester_bruteforce(BlockPartition(1, [[1]], [[1]], [[1]]))

    def test_matches_eigenbasis_solution(self, rng):
        for n, k in [(3, 1), (5, 2), (6, 4)]:
            p = random_gapped_partition(rng, n, k)
            np.testing.assert_allclose(sylvester_bruteforce(p), sylvester_integral(p).z, atol=1e-11)
