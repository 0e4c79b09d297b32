import math

import numpy as np
import pytest

from pblab.gl2 import (
    BlockDiagOperator,
    GL2Matrix,
    dual,
    random_gl2,
    rep_block,
    rep_diag,
    rep_diag_log,
    rep_diag_qsum,
    rep_full,
)
from pblab.special import hyp2f1_terminating, log_binomial


class TestGL2Matrix:
    def test_singular_rejected(self):
        with pytest.raises(ValueError):
            GL2Matrix(1, 1, 1, 1)
        with pytest.raises(ValueError):
            GL2Matrix(0, 0, 0, 0)

    def test_det_and_inverse(self):
        g = GL2Matrix(2, 1, 1, 1)
        assert g.det == 1
        assert np.allclose((g @ g.inv()).as_array(), np.eye(2))

    def test_dagger(self):
        g = GL2Matrix(1j, 2, 3, 4 - 1j)
        assert np.allclose(g.dagger().as_array(), g.as_array().conj().T)

    def test_gram_positive(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            assert random_gl2(rng).gram().is_positive_hermitian()


class TestDual:
    def test_identity(self):
        assert np.allclose(dual(GL2Matrix.identity()).as_array(), np.eye(2))

    def test_diagonal(self):
        d = dual(GL2Matrix.diagonal(2, 1))
        assert np.allclose(d.as_array(), np.diag([0.5, 1.0]))

    def test_unitary_fixed(self):
        u = GL2Matrix.from_array(np.array([[1, 1j], [1j, 1]]) / math.sqrt(2))
        assert np.allclose(dual(u).as_array(), u.as_array(), atol=1e-15)

    def test_involution(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            g = random_gl2(rng)
            assert np.allclose(dual(dual(g)).as_array(), g.as_array(), atol=1e-13)


class TestRepBlock:
    def test_L0_is_scalar_one(self):
        assert np.allclose(rep_block(GL2Matrix(0.5, 2j, 1, 3), 0), [[1.0]])

    def test_L1_layout(self):
        g = GL2Matrix(1.5, -0.5j, 2.0, 0.75)
        expect = np.array([[g.g22, g.g21], [g.g12, g.g11]])
        assert np.allclose(rep_block(g, 1), expect)

    def test_identity_any_L(self):
        for L in [0, 1, 5, 9]:
            assert np.allclose(rep_block(GL2Matrix.identity(), L), np.eye(L + 1))

    def test_column_matches_operator_construction(self):
        # raising-operator route: phi^g_{2,0} = g11^2 phi_{2,0}
        #   + sqrt(2) g11 g21 phi_{1,1} + g21^2 phi_{0,2}
        g = GL2Matrix(1.3 + 0.2j, -0.4, 0.7j, 0.9)
        col = rep_block(g, 2)[:, 2]
        expect = np.array([g.g21**2, math.sqrt(2) * g.g11 * g.g21, g.g11**2])
        assert np.allclose(col, expect, atol=1e-14)

    def test_homomorphism_random_pairs(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            a, b = random_gl2(rng), random_gl2(rng)
            for L in (1, 4, 12):
                ta, tb, tab = rep_block(a, L), rep_block(b, L), rep_block(a @ b, L)
                scale = max(1.0, float(np.max(np.abs(tab))))
                assert np.max(np.abs(ta @ tb - tab)) <= 1e-10 * scale


class TestRepDiag:
    def test_diagonal_h_only_leading_term(self):
        assert rep_diag(GL2Matrix.diagonal(4, 1), 2, 1) == pytest.approx(16.0)

    def test_brute_qsum_example(self):
        h = GL2Matrix(2, 1, 1, 1)
        assert rep_diag(h, 1, 1) == pytest.approx(3.0)
        assert rep_diag_qsum(h, 1, 1) == pytest.approx(3.0)

    def test_identity(self):
        for n1, n2 in [(0, 0), (3, 5), (7, 2)]:
            assert rep_diag(GL2Matrix.identity(), n1, n2) == pytest.approx(1.0)

    def test_jacobi_form_matches_block_diagonal(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            h = random_gl2(rng).gram()
            for L in (2, 8, 14, 20):
                block = rep_block(h, L)
                for n1 in range(L + 1):
                    ref = block[n1, n1]
                    val = rep_diag(h, n1, L - n1)
                    assert abs(val - ref) <= 1e-10 * abs(ref)

    def test_general_complex_h_cross_check(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            h = random_gl2(rng)
            for n1, n2 in [(0, 3), (2, 2), (4, 1), (5, 5)]:
                a = rep_diag(h, n1, n2)
                b = rep_diag_qsum(h, n1, n2)
                assert abs(a - b) <= 1e-10 * max(1.0, abs(b))

    def test_symmetric_hypergeometric_variant_agrees(self):
        # h11^n1 h22^n2 2F1(-n1, -n2; 1; r) with r = |h12|^2/(h11 h22) is the
        # expanded symmetric form of the diagonal
        h = GL2Matrix(2, 1, 1, 1)
        for n1, n2 in [(1, 1), (2, 3), (4, 4)]:
            r = abs(h.g12) ** 2 / (h.g11.real * h.g22.real)
            val = h.g11.real**n1 * h.g22.real**n2 * hyp2f1_terminating(n1, -n2, 1, r)
            assert rep_diag(h, n1, n2).real == pytest.approx(val, rel=1e-12)

    def test_positive_diagonals_dominate_leading_term(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            h = random_gl2(rng).gram()
            for L in (3, 7):
                diag = np.diagonal(rep_block(h, L))
                assert np.max(np.abs(diag.imag)) <= 1e-12 * np.max(diag.real)
                for n1 in range(L + 1):
                    lead = h.g11.real**n1 * h.g22.real ** (L - n1)
                    assert diag[n1].real >= lead * (1 - 1e-12)

    def test_upper_bounds_log_domain(self):
        # diag <= C(L, n1) h11^n1 h22^n2 <= (tr h)^L for positive Hermitian h
        rng = np.random.default_rng(4)
        for _ in range(5):
            h = random_gl2(rng).gram()
            lh11, lh22 = math.log(h.g11.real), math.log(h.g22.real)
            ltr = math.log((h.g11 + h.g22).real)
            for L in (10, 25, 40):
                for n1 in range(0, L + 1, 5):
                    n2 = L - n1
                    val = rep_diag_log(h, n1, n2)
                    mid = log_binomial(L, n1) + n1 * lh11 + n2 * lh22
                    assert val <= mid + 1e-10
                    assert mid <= L * ltr + 1e-10

    def test_log_domain_matches_direct(self):
        h = GL2Matrix(2, 1, 1, 1)
        for n1, n2 in [(3, 3), (7, 4), (12, 20)]:
            assert rep_diag_log(h, n1, n2) == pytest.approx(
                math.log(rep_diag_qsum(h, n1, n2).real), rel=1e-12
            )

    def test_positivity_gate(self):
        g = GL2Matrix(1, 1, 0, 1)  # not Hermitian
        with pytest.raises(ValueError):
            rep_diag(g, 1, 1, require_positive=True)
        with pytest.raises(ValueError):
            rep_diag_log(g, 1, 1)


class TestRepFull:
    def test_identity_dense(self):
        op = rep_full(GL2Matrix.identity(), 3)
        assert np.allclose(op.dense(), np.eye(10))

    def test_inverse_roundtrip(self):
        rng = np.random.default_rng(5)
        g = random_gl2(rng)
        full = rep_full(g, 8)
        prod = (full @ rep_full(g.inv(), 8)).dense()
        assert np.max(np.abs(prod - np.eye(full.dim))) <= 1e-10

    def test_star_property_dense(self):
        rng = np.random.default_rng(6)
        g = random_gl2(rng)
        lhs = rep_full(g, 6).dagger().dense()
        rhs = rep_full(g.dagger(), 6).dense()
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(lhs)))

    def test_blockwise_inv_and_apply(self):
        rng = np.random.default_rng(8)
        g = random_gl2(rng)
        full = rep_full(g, 5)
        vec = rng.normal(size=full.dim) + 1j * rng.normal(size=full.dim)
        assert np.allclose(full.inv().apply(full.apply(vec)), vec, atol=1e-10)
        assert np.allclose(full.apply(vec), full.dense() @ vec, atol=1e-12)

    def test_block_shapes_validated(self):
        with pytest.raises(ValueError):
            BlockDiagOperator(1, (np.eye(1),))
        with pytest.raises(ValueError):
            BlockDiagOperator(0, (np.eye(2),))

    def test_json_layout(self):
        op = rep_full(GL2Matrix(1, 1, 0, 1), 1)
        data = op.to_json()
        assert data["L_max"] == 1
        assert data["blocks"][1] == [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [1.0, 0.0]]]
