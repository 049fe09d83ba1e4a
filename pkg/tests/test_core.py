import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from riccati_diag.core import (
    BlockPartition,
    HermitianMatrix,
    UnitaryFactor,
    block_split,
    build_unitary,
    conjugate,
    grassmann_frame,
    grassmann_projector,
    inv_sqrt_gram,
    validate_hermitian,
)
from riccati_diag.errors import BadSplitIndex, NonFinite, NotHermitian, NotSquare, NotUnitary, ShapeMismatch

from .conftest import random_complex, random_hermitian


class TestValidateHermitian:
    def test_real_diagonal(self):
        h = validate_hermitian([[2, 0], [0, 3]])
        assert h.defect == 0
        np.testing.assert_array_equal(h.data, np.diag([2, 3]))

    def test_antisymmetric_imaginary_rejected(self):
        with pytest.raises(NotHermitian):
            validate_hermitian([[0, 1j], [1j, 0]])

    def test_conjugate_pair_accepted(self):
        h = validate_hermitian([[1, 2 + 1j], [2 - 1j, 5]])
        assert h.data[0, 1] == 2 + 1j

    def test_small_defect_symmetrized(self):
        h = validate_hermitian([[1, 1 + 1e-14], [1, 2]])
        assert h.defect == pytest.approx(1e-14, rel=1e-2)
        assert h.data[0, 1] == h.data[1, 0]

    def test_relative_tolerance(self):
        big = 1e6 * np.array([[1, 1], [1, 1]], dtype=complex)
        big[0, 1] += 1e-7
        validate_hermitian(big)

    def test_not_square(self):
        with pytest.raises(NotSquare):
            validate_hermitian(np.zeros((2, 3)))

    def test_non_finite(self):
        with pytest.raises(NonFinite):
            validate_hermitian([[np.nan, 0], [0, 1]])

    def test_immutable(self):
        h = validate_hermitian([[1, 0], [0, 1]])
        with pytest.raises(ValueError):
            h.data[0, 0] = 3


class TestBlockSplit:
    def test_three_by_three(self):
        a, b, g = 1 + 2j, -0.5j, 3.0
        h = np.array([[1, np.conj(a), np.conj(b)], [a, 2, np.conj(g)], [b, g, 3]])
        p = block_split(h, 2)
        np.testing.assert_array_equal(p.h_plus, [[1, np.conj(a)], [a, 2]])
        np.testing.assert_array_equal(p.v, [[b, g]])
        np.testing.assert_array_equal(p.h_minus, [[3]])
        np.testing.assert_array_equal(p.assemble(), h)

    def test_two_by_two(self):
        p = block_split([[4, 1 - 1j], [1 + 1j, -2]], 1)
        assert p.h_plus[0, 0] == 4 and p.v[0, 0] == 1 + 1j and p.h_minus[0, 0] == -2

    @pytest.mark.parametrize("k", [0, 3])
    def test_bad_index(self, k):
        with pytest.raises(BadSplitIndex):
            block_split(np.eye(3), k)

    def test_reassembly_exact(self, rng):
        h = validate_hermitian(random_hermitian(rng, 6))
        for k in range(1, 6):
            np.testing.assert_array_equal(block_split(h, k).assemble(), h.data)


class TestInvSqrtGram:
    def test_zero(self):
        a, b = inv_sqrt_gram(np.zeros((2, 3)))
        np.testing.assert_allclose(a, np.eye(3), atol=1e-15)
        np.testing.assert_allclose(b, np.eye(2), atol=1e-15)

    def test_diagonal_gram(self):
        a, _ = inv_sqrt_gram([[1, 0]])
        np.testing.assert_allclose(a, np.diag([1 / math.sqrt(2), 1]), atol=1e-15)

    def test_ones_row(self):
        # Gram [[2,1],[1,2]]: eigenvalue 3 on (1,1), 1 on (1,-1)
        a, _ = inv_sqrt_gram([[1, 1]])
        p, m = (1 / math.sqrt(3) + 1) / 2, (1 / math.sqrt(3) - 1) / 2
        np.testing.assert_allclose(a, [[p, m], [m, p]], atol=1e-15)

    def test_inverse_property(self, rng):
        for _ in range(50):
            m, k = rng.integers(1, 5, size=2)
            z = random_complex(rng, (m, k), 2.0)
            a, b = inv_sqrt_gram(z)
            ga = np.eye(k) + z.conj().T @ z
            gb = np.eye(m) + z @ z.conj().T
            np.testing.assert_allclose(a @ a @ ga, np.eye(k), atol=1e-11)
            np.testing.assert_allclose(b @ b @ gb, np.eye(m), atol=1e-11)
            np.testing.assert_allclose(a, a.conj().T, atol=0)
            assert np.all(np.linalg.eigvalsh(a) > 0)


class TestBuildUnitary:
    def test_zero(self):
        assert np.array_equal(build_unitary(np.zeros((2, 2))).u, np.eye(4))

    def test_two_by_two_closed_form(self):
        z = 0.3 - 1.2j
        u = build_unitary([[z]]).u
        expected = np.array([[1, -np.conj(z)], [z, 1]]) / math.sqrt(1 + abs(z) ** 2)
        np.testing.assert_allclose(u, expected, atol=1e-15)

    def test_random_unitary(self, rng):
        z = random_complex(rng, (2, 2))
        u = build_unitary(z)
        assert u.unitarity_defect <= 1e-12

    def test_shape_mismatch(self):
        p = block_split(np.eye(4), 1)
        with pytest.raises(ShapeMismatch):
            build_unitary(np.zeros((2, 2)), p)

    def test_rejects_non_unitary(self):
        with pytest.raises(NotUnitary):
            UnitaryFactor(2 * np.eye(2))


def test_offdiagonal_block_is_riccati_expression(rng):
    h = validate_hermitian(random_hermitian(rng, 5))
    p = block_split(h, 2)
    z = random_complex(rng, (3, 2))
    um = grassmann_frame(z)
    lower = (um.conj().T @ h.data @ um)[2:, :2]
    expected = p.v - z @ p.h_plus + p.h_minus @ z - z @ p.v.conj().T @ z
    np.testing.assert_allclose(lower, expected, atol=1e-12 * np.abs(lower).max())


class TestProjector:
    def test_zero(self):
        np.testing.assert_allclose(grassmann_projector(np.zeros((2, 1))), np.diag([1, 0, 0]), atol=1e-15)

    def test_two_by_two(self):
        np.testing.assert_allclose(grassmann_projector([[1.0]]), 0.5 * np.ones((2, 2)), atol=1e-15)

    def test_trace_random(self, rng):
        p = grassmann_projector(random_complex(rng, (3, 2)))
        assert abs(np.trace(p) - 2) <= 1e-10

    @settings(max_examples=60, deadline=None)
    @given(
        arrays(np.float64, st.tuples(st.integers(1, 4), st.integers(1, 4), st.just(2)),
               elements=st.floats(-10, 10))
    )
    def test_projector_properties(self, raw):
        z = raw[..., 0] + 1j * raw[..., 1]
        k = z.shape[1]
        p = grassmann_projector(z)
        np.testing.assert_allclose(p @ p, p, atol=1e-10)
        np.testing.assert_allclose(p, p.conj().T, atol=1e-10)
        assert abs(np.trace(p).real - k) <= 1e-10
        n = sum(z.shape)
        assert build_unitary(z).unitarity_defect <= 1e-10 * n


class TestConjugate:
    def test_identity(self, rng):
        h = validate_hermitian(random_hermitian(rng, 3))
        np.testing.assert_allclose(conjugate(h, np.eye(3)).data, h.data, atol=0)

    def test_two_by_two_entries(self):
        h1, h2, al, z = 0.7, -1.3, 0.4 + 0.9j, -0.2 + 0.5j
        h = validate_hermitian([[h1, np.conj(al)], [al, h2]])
        w = conjugate(h, build_unitary([[z]])).data * (1 + abs(z) ** 2)
        zb, alb = np.conj(z), np.conj(al)
        expected = np.array(
            [
                [h1 + alb * z + al * zb + h2 * abs(z) ** 2, alb - (h1 - h2) * zb - al * zb**2],
                [al - (h1 - h2) * z - alb * z**2, h2 - alb * z - al * zb + h1 * abs(z) ** 2],
            ]
        )
        np.testing.assert_allclose(w, expected, atol=1e-14)

    def test_spectrum_invariant(self, rng):
        from riccati_diag.oracle import jacobi_eigensolve

        h = validate_hermitian(random_hermitian(rng, 6))
        u = build_unitary(random_complex(rng, (2, 4)))
        w = conjugate(h, u)
        assert abs(np.trace(w.data) - np.trace(h.data)) <= 1e-10 * 6
        assert np.linalg.norm(w.data) == pytest.approx(np.linalg.norm(h.data), rel=1e-10)
        e1, e2 = jacobi_eigensolve(h).eigenvalues, jacobi_eigensolve(w).eigenvalues
        np.testing.assert_allclose(e1, e2, atol=1e-9 * np.abs(e1).max())

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            conjugate(np.eye(3), np.eye(2))


def test_hermitian_matrix_scale():
    assert HermitianMatrix(np.diag([0.1, -0.2])).scale == 1.0
    assert HermitianMatrix(np.diag([5.0, -7.0])).scale == 7.0


def test_partition_shapes_checked():
    with pytest.raises(ShapeMismatch):
        BlockPartition(2, np.eye(2), np.eye(1), np.zeros((2, 2)))
