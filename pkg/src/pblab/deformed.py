"""Deformed complex Hermite polynomials, their duals, norms, and growth.

Deforming with an invertible 2x2 matrix g sends the normalized monomial to
e_{n1,n2}(tg . (z, conj z)) and the polynomial family to

    h^g_{n1,n2} = exp(-d_z d_zbar) [ (g11 z + g21 zbar)^{n1}
                                     (g12 z + g22 zbar)^{n2} / sqrt(n1! n2!) ],

which equals the column expansion sum_{m'} T^L[m', n1](g) h_{m', L-m'} over
the undeformed family (L = n1 + n2).  Both construction routes are kept and
cross-checked.  The dual family uses the dual matrix (dagger g)^(-1); the two
families are biorthonormal against the Gaussian measure.

Squared norms obey the exact identity  |h^g_{n1,n2}|^2 = T-diagonal of
(dagger g) g  and sit inside explicit lower/upper bounds whose product grows
like (a d / |det g|^2)^L, the numerical signature that a non-diagonal
deformation never yields a Riesz basis.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import indexing
from .gl2 import GL2Matrix, dual, rep_block, rep_diag, rep_diag_log
from .hermite import PolyCoeffs, exp_contraction, hermite_coeffs, inner
from .special import log_binomial


def _expanded_monomial(g: GL2Matrix, n1: int, n2: int) -> PolyCoeffs:
    """Grid of (g11 z + g21 zbar)^n1 (g12 z + g22 zbar)^n2 / sqrt(n1! n2!)."""
    grid = np.zeros((n1 + n2 + 1, n1 + n2 + 1), dtype=complex)
    first = [math.comb(n1, j) * g.g11**j * g.g21 ** (n1 - j) for j in range(n1 + 1)]
    second = [math.comb(n2, l) * g.g12**l * g.g22 ** (n2 - l) for l in range(n2 + 1)]
    for j, cj in enumerate(first):
        for l, cl in enumerate(second):
            grid[j + l, (n1 - j) + (n2 - l)] += cj * cl
    norm = math.exp(-0.5 * (math.lgamma(n1 + 1) + math.lgamma(n2 + 1)))
    return PolyCoeffs(grid * norm)


def deformed_coeffs(g: GL2Matrix, n1: int, n2: int) -> PolyCoeffs:
    """h^g_{n1,n2} by expanding the deformed monomial and contracting."""
    if n1 < 0 or n2 < 0:
        raise ValueError(f"mode indices must be non-negative, got ({n1}, {n2})")
    return exp_contraction(_expanded_monomial(g, n1, n2))


def deformed_via_rep(g: GL2Matrix, n1: int, n2: int) -> PolyCoeffs:
    """h^g_{n1,n2} as the T^L-column combination of undeformed polynomials."""
    L = n1 + n2
    col = rep_block(g, L)[:, n1]
    out = PolyCoeffs.zero()
    for mp in range(L + 1):
        if col[mp] != 0:
            out = out + hermite_coeffs(mp, L - mp).scaled(col[mp])
    return out


def dual_coeffs(g: GL2Matrix, n1: int, n2: int) -> PolyCoeffs:
    """Dual polynomial: the deformation by (dagger g)^(-1)."""
    return deformed_coeffs(dual(g), n1, n2)


@dataclass(frozen=True)
class DeformedFamily:
    """All deformed and dual polynomials with total degree <= L_max."""

    g: GL2Matrix
    L_max: int
    coeffs: dict
    dual_coeffs: dict

    @classmethod
    def build(cls, g: GL2Matrix, L_max: int) -> "DeformedFamily":
        gd = dual(g)
        coeffs = {}
        duals = {}
        for L in range(L_max + 1):
            for n1 in range(L + 1):
                key = indexing.ModeIndex(n1, L - n1)
                coeffs[key] = deformed_coeffs(g, n1, L - n1)
                duals[key] = deformed_coeffs(gd, n1, L - n1)
        return cls(g, L_max, coeffs, duals)


def biorth_gram(g: GL2Matrix, L_max: int):
    """Gram matrix G[n, n'] = <dual_n, deformed_n'> over flat indices, plus
    its maximum deviation from the identity (exact-moment inner products)."""
    family = DeformedFamily.build(g, L_max)
    n_tot = indexing.dim(L_max)
    gram = np.empty((n_tot, n_tot), dtype=complex)
    for n in range(n_tot):
        p = family.dual_coeffs[indexing.unflatten(n)]
        for npr in range(n_tot):
            q = family.coeffs[indexing.unflatten(npr)]
            gram[n, npr] = inner(p, q)
    deviation = float(np.max(np.abs(gram - np.eye(n_tot))))
    return gram, deviation


def norm_sq(g: GL2Matrix, n1: int, n2: int) -> float:
    """Exact squared norm of h^g_{n1,n2}: the T-diagonal of (dagger g) g."""
    val = rep_diag(g.gram(), n1, n2, require_positive=True)
    return float(val.real)


def dual_norm_sq(g: GL2Matrix, n1: int, n2: int) -> float:
    """Squared norm of the dual polynomial: T-diagonal of ((dagger g) g)^(-1)."""
    val = rep_diag(g.gram().inv(), n1, n2, require_positive=True)
    return float(val.real)


def norm_sq_inner(g: GL2Matrix, n1: int, n2: int) -> float:
    """Squared norm by direct Gaussian integration (independent route)."""
    p = deformed_coeffs(g, n1, n2)
    return inner(p, p).real


@dataclass(frozen=True)
class NormBounds:
    """Log-domain values of the norm-squared bound sandwich at one index."""

    log_lower: float
    log_upper: float
    log_lower_dual: float
    log_upper_dual: float

    @property
    def lower(self) -> float:
        return math.exp(self.log_lower)

    @property
    def upper(self) -> float:
        return math.exp(self.log_upper)

    @property
    def lower_dual(self) -> float:
        return math.exp(self.log_lower_dual)

    @property
    def upper_dual(self) -> float:
        return math.exp(self.log_upper_dual)


def norm_bounds(g: GL2Matrix, n1: int, n2: int) -> NormBounds:
    """Bound sandwich with a = (g^dag g)_11, d = (g^dag g)_22:

        a^{n1} d^{n2} / sqrt(pi min(n1,n2)) <= |h^g|^2 <= C(L,n1) a^{n1} d^{n2},

    and the dual version scaled by |det g|^{-2L} with a and d exchanged.
    The lower bound is asymptotic in min(n1, n2); min(n1, n2) = 0 is
    rejected since the 1/sqrt factor degenerates there (the exact value is
    then just the leading product).
    """
    if min(n1, n2) < 1:
        raise ValueError("bound sandwich needs min(n1, n2) >= 1")
    gram = g.gram()
    a = gram.g11.real
    d = gram.g22.real
    log_det = math.log(gram.det.real)  # |det g|^2 = det(g^dag g)
    L = n1 + n2
    half_log_min = 0.5 * math.log(math.pi * min(n1, n2))
    base = n1 * math.log(a) + n2 * math.log(d)
    base_dual = n1 * math.log(d) + n2 * math.log(a) - L * log_det
    lb = log_binomial(L, n1)
    return NormBounds(
        log_lower=base - half_log_min,
        log_upper=base + lb,
        log_lower_dual=base_dual - half_log_min,
        log_upper_dual=base_dual + lb,
    )


def riesz_growth(g: GL2Matrix, L_list) -> list[dict]:
    """Norm-product growth table along the sector diagonal n1 = floor(L/2).

    Each row carries the log squared norms, their log product, the lower
    bound (1/(pi min)) (a d/|det g|^2)^L, and the product growth ratio
    relative to the previous row.  For diagonal or unitary g the product is
    identically 1; otherwise it grows like (a d / |det g|^2)^L > 1.
    """
    gram = g.gram()
    gram_inv = gram.inv()
    a, d = gram.g11.real, gram.g22.real
    log_det = math.log(gram.det.real)
    rows = []
    prev = None
    for L in L_list:
        n1 = L // 2
        n2 = L - n1
        log_ns = rep_diag_log(gram, n1, n2)
        log_dns = rep_diag_log(gram_inv, n1, n2)
        log_product = log_ns + log_dns
        log_lower = L * (math.log(a) + math.log(d) - log_det) - math.log(
            math.pi * max(1, min(n1, n2))
        )
        ratio = math.exp(log_product - prev) if prev is not None else float("nan")
        rows.append(
            {
                "L": L,
                "n1": n1,
                "n2": n2,
                "log_norm_sq": log_ns,
                "log_dual_norm_sq": log_dns,
                "log_product": log_product,
                "log_lower_bound": log_lower,
                "growth_ratio": ratio,
            }
        )
        prev = log_product
    return rows
