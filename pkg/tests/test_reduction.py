import math

import numpy as np
import pytest

from riccati_diag.core import HermitianMatrix, block_split, inv_sqrt_gram, validate_hermitian
from riccati_diag.cubic3 import eigenvalues_3x3, pair_residuals
from riccati_diag.errors import ZeroVector
from riccati_diag.oracle import jacobi_eigensolve
from riccati_diag.reduction import (
    direct_inv_sqrt_2,
    rank_one_inv_sqrt,
    reduce_once,
    riccati_diagonalize,
    riccati_residual,
    vector_riccati_solve,
)
from riccati_diag.riccati import solve_2x2

from .conftest import random_complex, random_hermitian

WORKED = np.array([[2, 0, 1], [0, 3, 1], [1, 1, 4]], dtype=complex)
# roots of l^3 - 9 l^2 + 24 l - 19, computed once with np.roots
WORKED_EIGS = np.sort(np.roots([1, -9, 24, -19]).real)


class TestVectorRiccati:
    def test_decoupled(self):
        z, res, seed = vector_riccati_solve(np.diag([1.0, 2.0, 3.0]))
        assert not np.any(z) and res == 0 and seed == "decoupled"

    def test_two_by_two_matches_closed_form(self):
        h = np.array([[1, 2], [2, -1]], dtype=complex)
        z, res, _ = vector_riccati_solve(h, 1e-13)
        roots = [s.z[0, 0] for s, _ in solve_2x2(1, -1, 2)]
        assert min(abs(z[0, 0] - r) for r in roots) <= 1e-12

    def test_three_by_three_component_equations(self, rng):
        for _ in range(20):
            h = validate_hermitian(random_hermitian(rng, 3))
            z, res, _ = vector_riccati_solve(h, 1e-12)
            r1, r2 = pair_residuals(z[0, 0], z[0, 1], h)
            assert max(abs(r1), abs(r2)) <= 1e-10 * h.scale
            assert res <= 1e-12 * h.scale

    def test_residual_of_returned_root(self, rng):
        h = validate_hermitian(random_hermitian(rng, 7))
        z, res, _ = vector_riccati_solve(h)
        assert np.abs(riccati_residual(z, block_split(h, 6))).max() <= 1e-10 * h.scale

    def test_deterministic(self, rng):
        h = random_hermitian(rng, 6)
        a = vector_riccati_solve(h, rng_seed=3)
        b = vector_riccati_solve(h, rng_seed=3)
        np.testing.assert_array_equal(a[0], b[0])


class TestRankOneInvSqrt:
    def test_single_component(self):
        np.testing.assert_allclose(rank_one_inv_sqrt([[2.0]]), [[1 / math.sqrt(5)]], atol=1e-15)

    def test_ones(self):
        p, m = (1 / math.sqrt(3) + 1) / 2, (1 / math.sqrt(3) - 1) / 2
        np.testing.assert_allclose(rank_one_inv_sqrt([[1, 1]]), [[p, m], [m, p]], atol=1e-15)

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            rank_one_inv_sqrt(np.zeros((1, 3)))

    def test_row_required(self):
        with pytest.raises(ValueError):
            rank_one_inv_sqrt(np.ones((2, 1)))

    def test_matches_gram_inverse_root(self, rng):
        for _ in range(200):
            d = int(rng.integers(1, 9))
            z = random_complex(rng, (1, d), 10 ** rng.uniform(-3, 2))
            np.testing.assert_allclose(rank_one_inv_sqrt(z), inv_sqrt_gram(z)[0], atol=1e-11)

    def test_pivot_choice_irrelevant(self, rng):
        # tiny leading entry would make W huge without pivoting
        z = np.array([[1e-9, 2 - 1j, 0.5j, -3]])
        np.testing.assert_allclose(rank_one_inv_sqrt(z), inv_sqrt_gram(z)[0], atol=1e-12)
        perm = [3, 1, 0, 2]
        a = rank_one_inv_sqrt(z[:, perm])
        np.testing.assert_allclose(a, rank_one_inv_sqrt(z)[np.ix_(perm, perm)], atol=1e-13)

    def test_direct_two_component(self, rng):
        for _ in range(100):
            z1, z2 = random_complex(rng, 2)
            np.testing.assert_allclose(direct_inv_sqrt_2(z1, z2), rank_one_inv_sqrt([[z1, z2]]), atol=1e-12)


class TestReduceOnce:
    def test_diagonal(self):
        red, step = reduce_once(np.diag([5.0, 1.0, 3.0]))
        assert step.eigenvalue == 3.0 and step.seed == "decoupled"
        np.testing.assert_array_equal(red.data, np.diag([5.0, 1.0]))

    def test_worked_instance(self):
        h = validate_hermitian(WORKED)
        red, step = reduce_once(h, 1e-13)
        z1, z2 = step.z[0]
        # the reduced 2x2 written out from the root pair
        ht = np.array(
            [
                [2 + 2 * z1.real + 4 * abs(z1) ** 2, z2 + np.conj(z1) + 4 * np.conj(z1) * z2],
                [z1 + np.conj(z2) + 4 * z1 * np.conj(z2), 3 + 2 * z2.real + 4 * abs(z2) ** 2],
            ]
        )
        inv = direct_inv_sqrt_2(z1, z2)
        np.testing.assert_allclose(red.data, inv @ ht @ inv, atol=1e-12)
        both = np.sort(np.append(np.linalg.eigvalsh(red.data), step.eigenvalue))
        np.testing.assert_allclose(both, WORKED_EIGS, atol=1e-12)

    def test_spectrum_is_union(self, rng):
        for n in (3, 5, 8):
            h = validate_hermitian(random_hermitian(rng, n))
            red, step = reduce_once(h)
            both = np.sort(np.append(jacobi_eigensolve(red).eigenvalues, step.eigenvalue))
            np.testing.assert_allclose(both, jacobi_eigensolve(h).eigenvalues, atol=1e-9 * h.scale)
            assert step.unitary.unitarity_defect <= 1e-10 * n

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            reduce_once(np.eye(2))


class TestDiagonalize:
    def test_one_by_one(self):
        res = riccati_diagonalize([[4.0]])
        assert res.eigenvalues.tolist() == [4.0] and res.max_offdiag == 0

    def test_diagonal(self):
        res = riccati_diagonalize(np.diag([5.0, 1.0, 3.0]))
        assert res.eigenvalues.tolist() == [1.0, 3.0, 5.0]
        assert res.max_offdiag == 0

    def test_worked(self):
        res = riccati_diagonalize(WORKED)
        np.testing.assert_allclose(res.eigenvalues, WORKED_EIGS, atol=1e-12)
        np.testing.assert_allclose(res.eigenvalues, eigenvalues_3x3(WORKED).sorted(), atol=1e-12)

    def test_random_ten(self, rng):
        h = validate_hermitian(random_hermitian(rng, 10))
        res = riccati_diagonalize(h)
        ref = jacobi_eigensolve(h).eigenvalues
        np.testing.assert_allclose(res.eigenvalues, ref, atol=1e-9 * h.scale)
        assert res.max_offdiag <= 1e-9 * h.scale
        assert len(res.steps) == 9

    def test_invariants(self, rng):
        for n in (4, 6, 9):
            h = validate_hermitian(random_hermitian(rng, n))
            ev = riccati_diagonalize(h).eigenvalues
            assert abs(ev.sum() - np.trace(h.data).real) <= 1e-9 * n * h.scale
            assert abs(np.sum(ev**2) - np.linalg.norm(h.data) ** 2) <= 1e-9 * n * h.scale**2

    def test_columns_are_eigenvectors(self, rng):
        h = validate_hermitian(random_hermitian(rng, 6))
        res = riccati_diagonalize(h)
        u = res.unitary.u
        rq = np.einsum("ij,ik,kj->j", u.conj(), h.data, u).real
        np.testing.assert_allclose(rq, res.column_eigenvalues, atol=1e-10 * h.scale)
        np.testing.assert_allclose(h.data @ u, u * res.column_eigenvalues, atol=1e-9 * h.scale)

    def test_degenerate_spectrum(self):
        q = np.linalg.qr(np.arange(16).reshape(4, 4) + np.eye(4) * 7.0)[0]
        h = q @ np.diag([1.0, 1.0, 2.0, 2.0]) @ q.T
        res = riccati_diagonalize(HermitianMatrix(0.5 * (h + h.T)))
        np.testing.assert_allclose(res.eigenvalues, [1, 1, 2, 2], atol=1e-9)
