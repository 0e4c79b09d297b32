import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from pblab.hermite import (
    PolyCoeffs,
    exp_contraction,
    exp_contraction_exact,
    hermite_coeffs,
    hermite_terms_exact,
    hermite_via_contraction,
    inner,
    inner_exact,
    monomial_basis,
    norm_sq,
)


def modes_up_to_degree(max_L):
    return [(n1, L - n1) for L in range(max_L + 1) for n1 in range(L + 1)]


class TestHermiteCoeffs:
    def test_ground_state_is_constant_one(self):
        h = hermite_coeffs(0, 0)
        assert h.coeff.shape == (1, 1)
        assert h.coeff[0, 0] == 1.0

    def test_h11_is_zzbar_minus_one(self):
        h = hermite_coeffs(1, 1)
        expected = PolyCoeffs([[-1, 0], [0, 1]])
        assert h.allclose(expected)

    def test_h21(self):
        # (z^2 zbar - 2 z) / sqrt(2)
        h = hermite_coeffs(2, 1)
        s = 1 / math.sqrt(2)
        expected = PolyCoeffs([[0, 0], [-2 * s, 0], [0, s]])
        assert h.allclose(expected)

    def test_evaluation(self):
        assert hermite_coeffs(1, 1)(1 + 1j) == pytest.approx(1.0)  # |z|^2 - 1
        assert hermite_coeffs(0, 0)(3.7 - 2j) == 1.0
        assert hermite_coeffs(1, 0)(2.0) == pytest.approx(2.0)  # h_{1,0} = z

    def test_negative_mode_rejected(self):
        with pytest.raises(ValueError):
            hermite_coeffs(-1, 2)


class TestExpContraction:
    def test_constant_fixed(self):
        one = PolyCoeffs.const(1.0)
        assert exp_contraction(one).allclose(one)

    def test_single_contraction_term(self):
        out = exp_contraction(PolyCoeffs.monomial(1, 1))
        assert out.allclose(PolyCoeffs([[-1, 0], [0, 1]]))

    def test_monomial_route_matches_explicit_sum(self):
        for n1, n2 in modes_up_to_degree(10):
            assert hermite_via_contraction(n1, n2).allclose(hermite_coeffs(n1, n2), atol=1e-12)

    def test_exact_rational_route(self):
        # unnormalized: contraction of z^{n1} zbar^{n2} has the integer grid
        for n1, n2 in [(2, 2), (3, 1), (4, 4), (5, 2)]:
            got = exp_contraction_exact({(n1, n2): Fraction(1)})
            expected = {k: Fraction(v) for k, v in hermite_terms_exact(n1, n2).items()}
            assert got == expected


class TestInner:
    def test_normalized_measure(self):
        assert inner(hermite_coeffs(0, 0), hermite_coeffs(0, 0)) == 1.0

    def test_h11_norm(self):
        assert inner(hermite_coeffs(1, 1), hermite_coeffs(1, 1)) == pytest.approx(1.0, abs=1e-14)

    def test_cross_moments_vanish(self):
        assert inner(hermite_coeffs(1, 0), hermite_coeffs(0, 1)) == 0.0

    def test_orthonormality_degree_10_float(self):
        modes = modes_up_to_degree(10)
        polys = {m: hermite_coeffs(*m) for m in modes}
        worst = 0.0
        for ma, mb in itertools.combinations_with_replacement(modes, 2):
            v = inner(polys[ma], polys[mb])
            worst = max(worst, abs(v - (1.0 if ma == mb else 0.0)))
        assert worst <= 1e-12

    def test_orthonormality_exact_backend(self):
        modes = modes_up_to_degree(10)
        terms = {m: hermite_terms_exact(*m) for m in modes}
        for ma, mb in itertools.combinations_with_replacement(modes, 2):
            got = inner_exact(terms[ma], terms[mb])
            ref = math.factorial(ma[0]) * math.factorial(ma[1]) if ma == mb else 0
            assert got == ref  # defect exactly zero

    def test_inner_conjugate_symmetry(self):
        p = hermite_coeffs(2, 1) + hermite_coeffs(1, 1).scaled(0.3j)
        q = hermite_coeffs(3, 0) + hermite_coeffs(2, 1).scaled(1.0 - 0.2j)
        assert inner(p, q) == pytest.approx(np.conj(inner(q, p)), abs=1e-13)

    def test_norm_sq(self):
        assert norm_sq(hermite_coeffs(4, 2)) == pytest.approx(1.0, abs=1e-13)


class TestDegreeStructure:
    @pytest.mark.parametrize("m, n", [(0, 0), (3, 2), (5, 1), (2, 6)])
    def test_polyanalytic_order(self, m, n):
        # conj(z)-degree of h_{m,n} is exactly n: n+1 dzbar strokes annihilate
        p = hermite_coeffs(m, n)
        assert p.deg_zbar == n
        for _ in range(n):
            p = p.dzbar()
            assert not p.is_zero()
        assert p.dzbar().is_zero()

    def test_dz_on_monomial(self):
        p = PolyCoeffs.monomial(3, 2)
        assert p.dz().allclose(PolyCoeffs.monomial(2, 2, 3.0))


class TestPolyAlgebra:
    def test_product_matches_pointwise(self):
        p = hermite_coeffs(2, 1)
        q = hermite_coeffs(1, 1)
        prod = p * q
        for z in [0.3 + 0.1j,-1.2 + 0.8j, 2.0]:
            assert prod(z) == pytest.approx(p(z) * q(z), rel=1e-12, abs=1e-12)

    def test_conjugate_swaps_roles(self):
        p = PolyCoeffs.monomial(2, 0, 1j)
        pc = p.conjugate()
        for z in [0.5 + 0.5j, 1 - 2j]:
            assert pc(z) == pytest.approx(np.conj(p(z)), abs=1e-14)

    def test_add_sub_scaled(self):
        p = hermite_coeffs(1, 0)
        q = hermite_coeffs(0, 1)
        r = p + q.scaled(2.0) - p
        assert r.allclose(q.scaled(2.0))

    def test_trim_removes_trailing_zeros(self):
        grid = np.zeros((4, 4), dtype=complex)
        grid[1, 2] = 1.0
        p = PolyCoeffs(grid)
        assert (p.deg_z, p.deg_zbar) == (1, 2)


class TestJsonRoundTrip:
    def test_schema_and_roundtrip(self):
        p = hermite_coeffs(2, 1).scaled(1 + 0.5j)
        data = p.to_json()
        assert set(data) == {"deg_z", "deg_zbar", "coeff"}
        assert data["deg_z"] == 2 and data["deg_zbar"] == 1
        assert np.shape(data["coeff"]) == (3, 2, 2)
        assert PolyCoeffs.from_json(data).allclose(p, atol=0)


def test_monomial_basis_normalization():
    p = monomial_basis(3, 2)
    assert p.coeff[3, 2] == pytest.approx(1 / math.sqrt(12), rel=1e-14)
