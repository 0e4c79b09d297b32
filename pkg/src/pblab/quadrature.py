"""Quadrature on the complex plane for the Gaussian measure and d^2z/pi.

Two measures appear throughout the package:

    dnu    = e^{-|z|^2} d^2z / pi      (normalized Gaussian measure)
    plane  = d^2z / pi                 (flat measure; integrand must decay)

Polynomial integrals against dnu are done exactly through moments
(``gaussian_moment``); quadrature schemes are for non-polynomial integrands
such as weight functions and displacement kernels.  Schemes are immutable
and node evaluation order is fixed, so results are bit-reproducible.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_hermite, roots_laguerre


class ConvergenceError(RuntimeError):
    """Doubling the node count moved the result by more than the tolerance."""

    def __init__(self, coarse, fine, tol):
        self.coarse = coarse
        self.fine = fine
        self.tol = tol
        super().__init__(
            f"quadrature not converged: |{coarse} - {fine}| = {abs(coarse - fine):.3e} > {tol:.1e}"
        )


def exact_gaussian_moment(a: int, b: int) -> int:
    """Moment integral of conj(z)^a z^b against dnu, as an exact integer: a! if a == b else 0."""
    if a < 0 or b < 0:
        raise ValueError(f"moment exponents must be non-negative, got ({a}, {b})")
    return math.factorial(a) if a == b else 0


def gaussian_moment(a: int, b: int) -> float:
    """Float version of ``exact_gaussian_moment``."""
    if a != b:
        exact_gaussian_moment(a, b)  # argument validation
        return 0.0
    return float(math.exp(math.lgamma(a + 1))) if a > 170 else float(math.factorial(a))


@dataclass(frozen=True)
class PlaneScheme:
    """Nodes and positive weights for plane integrals.

    ``native`` records which measure the weights encode: "gaussian" weights
    sum f against dnu (the Gaussian is inside the weights), "plain" weights
    sum f against d^2z/pi (the integrand must supply its own decay).
    """

    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    order: int
    native: str
    params: tuple = field(default=())

    def __post_init__(self):
        if self.native not in ("gaussian", "plain"):
            raise ValueError(f"unknown native measure {self.native!r}")
        if np.any(self.weights <= 0):
            raise ValueError("scheme weights must be positive")


def tensor_hermite_scheme(n: int) -> PlaneScheme:
    """Tensor Gauss-Hermite scheme with n nodes per axis, native to dnu.

    Exact for integrands polynomial in (Re z, Im z) of total degree
    <= 2n - 1 against dnu.
    """
    if n < 1:
        raise ValueError(f"node count must be >= 1, got {n}")
    x, w = roots_hermite(n)
    zx, zy = np.meshgrid(x, x, indexing="ij")
    wx, wy = np.meshgrid(w, w, indexing="ij")
    nodes = (zx + 1j * zy).ravel()
    weights = (wx * wy).ravel() / math.pi
    return PlaneScheme("tensor-hermite", nodes, weights, 2 * n - 1, "gaussian", (n,))


def polar_scheme(nr: int, ntheta: int, radial_scale: float = 1.0) -> PlaneScheme:
    """Polar scheme native to d^2z/pi: Gauss-Laguerre in t = |z|^2, uniform angles.

    The radial rule is exact for integrands of the form
    e^{-radial_scale * t} * (polynomial in t of degree <= 2 nr - 1); the
    angular rule kills harmonics e^{i k theta} exactly for 0 < |k| < ntheta.
    ``radial_scale`` should match the integrand's dominant Gaussian decay.
    """
    if nr < 1 or ntheta < 1:
        raise ValueError(f"node counts must be >= 1, got ({nr}, {ntheta})")
    if radial_scale <= 0:
        raise ValueError(f"radial_scale must be positive, got {radial_scale}")
    u, w = roots_laguerre(nr)
    t = u / radial_scale
    # d^2z/pi = dt dtheta / (2 pi); fold e^{+u} into the weight so the rule
    # integrates f(t) dt for f ~ e^{-scale t} * poly
    radial_w = w * np.exp(u) / radial_scale
    theta = 2 * math.pi * np.arange(ntheta) / ntheta
    r = np.sqrt(t)
    nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = np.repeat(radial_w / ntheta, ntheta)
    return PlaneScheme("polar", nodes, weights, 2 * nr - 1, "plain", (nr, ntheta, radial_scale))


def build_scheme(kind: str, **params) -> PlaneScheme:
    """Scheme factory: kind "tensor-hermite" (n) or "polar" (nr, ntheta, radial_scale)."""
    if kind == "tensor-hermite":
        return tensor_hermite_scheme(**params)
    if kind == "polar":
        return polar_scheme(**params)
    raise ValueError(f"unknown scheme kind {kind!r}")


def refine(scheme: PlaneScheme) -> PlaneScheme:
    """Same scheme with all node counts doubled."""
    if scheme.kind == "tensor-hermite":
        return tensor_hermite_scheme(2 * scheme.params[0])
    nr, ntheta, scale = scheme.params
    return polar_scheme(2 * nr, 2 * ntheta, scale)


def _evaluate(f, nodes: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(nodes))
        if vals.shape == nodes.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([f(z) for z in nodes])


def integrate(f, scheme: PlaneScheme, measure: str = "dnu", check_tol: float | None = None):
    """Weighted node sum of f against the requested measure ("dnu" or "plane").

    With ``check_tol`` set, the integral is recomputed on the doubled scheme
    and a ConvergenceError is raised if the two values differ by more than
    the tolerance (the caller's guard for improper d^2z/pi integrals).
    """
    if measure not in ("dnu", "plane"):
        raise ValueError(f"unknown measure {measure!r}")
    vals = _evaluate(f, scheme.nodes)
    if scheme.native == "gaussian" and measure == "plane":
        vals = vals * np.exp(np.abs(scheme.nodes) ** 2)
    elif scheme.native == "plain" and measure == "dnu":
        vals = vals * np.exp(-np.abs(scheme.nodes) ** 2)
    result = complex(np.sum(scheme.weights * vals))
    if check_tol is not None:
        finer = integrate(f, refine(scheme), measure=measure)
        if abs(result - finer) > check_tol:
            raise ConvergenceError(result, finer, check_tol)
    return result
