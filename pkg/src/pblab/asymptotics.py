"""Large-index asymptotics of the representation diagonal, validated against
the exact log-domain q-sum.

Two regimes are covered for positive Hermitian h with r = |h12|^2/(h11 h22):

* fixed difference d = n2 - n1: the Jacobi-polynomial asymptotic

      T-diag ~ h11^{n1} h22^{n2} (2 pi n1)^{-1/2} (4r)^{-1/4}
               (1 + sqrt r)^{n1+n2+1},

  where (4r)^{-1/4} is the full (x^2-1)^{-1/4} factor of the underlying
  Jacobi estimate written in r variables.  (Writing (x-1)^{-1/4} alone,
  i.e. a prefactor [2r(1-r)]^{-1/4}, misses the constant ((1-r)/2)^{1/4};
  the form used here reproduces exact/estimate -> 1 and coincides with the
  nu = 1 limit of the Laplace estimate below.)

* fixed ratio nu = n2/n1: the Laplace (saddle-point) estimate built on the
  positive root xi_+ of  xi^2 + (r(1+nu)/(1-r)) xi - r nu/(1-r) = 0,

      T-diag ~ h11^{n1} h22^{n2} (2 pi n1)^{-1/2}
               [xi_+ (2 - (1 + 1/nu) xi_+)]^{-1/2}
               (1 - xi_+)^{-n1} (1 - xi_+/nu)^{-n2}.

All values are produced in the log domain; at the validation sizes
(n1 up to several hundred) the plain values overflow double precision.
"""

import math
from dataclasses import dataclass

from .gl2 import GL2Matrix
from .special import LogValue, log_binomial


def _positive_parts(h: GL2Matrix):
    if not h.is_positive_hermitian():
        raise ValueError("positive Hermitian input required")
    h11 = h.g11.real
    h22 = h.g22.real
    return h11, h22, abs(h.g12) ** 2 / (h11 * h22)


def exact_diag_log(h: GL2Matrix, n1: int, n2: int) -> float:
    """ln of the exact diagonal element (the oracle every estimate is checked
    against); stable log-sum-exp over the all-non-negative symmetric sum."""
    from .gl2 import rep_diag_log

    return rep_diag_log(h, n1, n2)


def asympt_fixed_d(h: GL2Matrix, n1: int, d: int) -> LogValue:
    """Fixed-difference estimate at (n1, n2 = n1 + d), as a LogValue."""
    if n1 < 1:
        raise ValueError(f"need n1 >= 1, got {n1}")
    if d < 0:
        raise ValueError(f"need d >= 0, got {d} (exchange the modes instead)")
    h11, h22, r = _positive_parts(h)
    if not 0 < r < 1:
        raise ValueError(f"estimate prefactor is singular outside 0 < r < 1, got r = {r}")
    n2 = n1 + d
    log_val = (
        n1 * math.log(h11)
        + n2 * math.log(h22)
        - 0.5 * math.log(2 * math.pi * n1)
        - 0.25 * math.log(4 * r)
        + (n1 + n2 + 1) * math.log1p(math.sqrt(r))
    )
    return LogValue.from_log(log_val)


@dataclass(frozen=True)
class LaplaceData:
    """Saddle-point data at fixed ratio nu = n2/n1."""

    r: float
    nu: float
    xi_plus: float
    A_at_xi: float
    App_at_xi: float

    def __post_init__(self):
        if not 0 < self.xi_plus < 1:
            raise ValueError(f"saddle point left (0, 1): xi_+ = {self.xi_plus}")
        if not self.App_at_xi < 0:
            raise ValueError("second derivative at the saddle must be negative")


def _A(xi: float, r: float, nu: float) -> float:
    return -(
        2 * xi * math.log(xi)
        - xi * math.log(nu * r)
        + (1 - xi) * math.log1p(-xi)
        + nu * (1 - xi / nu) * math.log1p(-xi / nu)
    )


def _A_prime(xi: float, r: float, nu: float) -> float:
    return math.log((1 - xi) * (1 - xi / nu)) - math.log(xi**2) + math.log(nu * r)


def laplace_root(r: float, nu: float) -> LaplaceData:
    """Positive root xi_+ of the saddle equation, with A(xi_+) and A''(xi_+).

    Stationarity |A'(xi_+)| <= 1e-9 is verified by direct evaluation.
    """
    if not 0 < r < 1:
        raise ValueError(f"need 0 < r < 1, got {r}")
    if nu < 1:
        raise ValueError(f"need nu >= 1, got {nu}")
    sr = math.sqrt(r)
    xi = sr / (2 * (1 - r)) * (math.sqrt(r * (nu - 1) ** 2 + 4 * nu) - sr * (1 + nu))
    resid = _A_prime(xi, r, nu)
    if abs(resid) > 1e-9:
        raise ArithmeticError(f"saddle residual |A'(xi_+)| = {abs(resid):.2e} > 1e-9")
    app = -(2 - (1 + 1 / nu) * xi) / (xi * (1 - xi) * (1 - xi / nu))
    return LaplaceData(r, nu, xi, _A(xi, r, nu), app)


def asympt_laplace(h: GL2Matrix, n1: int, nu: float) -> LogValue:
    """Fixed-ratio estimate at (n1, n2 = round(nu n1)), as a LogValue."""
    if n1 < 1:
        raise ValueError(f"need n1 >= 1, got {n1}")
    h11, h22, r = _positive_parts(h)
    data = laplace_root(r, nu)
    xi = data.xi_plus
    n2 = round(nu * n1)
    log_val = (
        n1 * math.log(h11)
        + n2 * math.log(h22)
        - 0.5 * math.log(2 * math.pi * n1)
        - 0.5 * math.log(xi * (2 - (1 + 1 / nu) * xi))
        - n1 * math.log1p(-xi)
        - n2 * math.log1p(-xi / nu)
    )
    return LogValue.from_log(log_val)


def stirling_r1_log(h11: float, h22: float, n1: int, n2: int) -> float:
    """ln of the r = 1 large-n behavior
    sqrt((n1+n2)/(2 pi n1 n2)) (n1+n2)^{n1+n2} n1^{-n1} n2^{-n2} h11^{n1} h22^{n2}."""
    if n1 < 1 or n2 < 1:
        raise ValueError("Stirling form needs n1, n2 >= 1")
    L = n1 + n2
    return (
        0.5 * math.log(L / (2 * math.pi * n1 * n2))
        + L * math.log(L)
        - n1 * math.log(n1)
        - n2 * math.log(n2)
        + n1 * math.log(h11)
        + n2 * math.log(h22)
    )


def binomial_diag_log(h11: float, h22: float, n1: int, n2: int) -> float:
    """ln of the exact r = 1 diagonal h11^{n1} h22^{n2} C(n1+n2, n1)."""
    return n1 * math.log(h11) + n2 * math.log(h22) + log_binomial(n1 + n2, n1)


def ratio_row(h: GL2Matrix, n1: int, *, d: int | None = None, nu: float | None = None) -> dict:
    """One validation record: exact vs estimate at fixed d or fixed nu.

    Returns the CSV-facing fields (n1, n2, r, nu_or_d, log_exact,
    log_estimate, ratio).
    """
    if (d is None) == (nu is None):
        raise ValueError("specify exactly one of d or nu")
    h11, h22, r = _positive_parts(h)
    if d is not None:
        n2 = n1 + d
        log_est = asympt_fixed_d(h, n1, d).log_magnitude
        nu_or_d = float(d)
    else:
        n2 = round(nu * n1)
        log_est = asympt_laplace(h, n1, nu).log_magnitude
        nu_or_d = float(nu)
    log_exact = exact_diag_log(h, n1, n2)
    return {
        "n1": n1,
        "n2": n2,
        "r": r,
        "nu_or_d": nu_or_d,
        "log_exact": log_exact,
        "log_estimate": log_est,
        "ratio": math.exp(log_exact - log_est),
    }
