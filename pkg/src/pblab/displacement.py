"""Displacement operators, bi-coherent states, and weight-operator checks.

The canonical displacement matrix elements in the flat basis have the
Laguerre closed form

    D[m, n](z) = sqrt(n!/m!) e^{-|z|^2/2} z^{m-n}     L_n^{(m-n)}(|z|^2)   (m >= n)
    D[m, n](z) = sqrt(m!/n!) e^{-|z|^2/2} (-conj z)^{n-m} L_m^{(n-m)}(|z|^2)   (m < n)

and are exact infinite-dimensional values, so truncation error enters only
through products.  For a deformation g the displaced operator in flat
coordinates is T(g) D(z) T(g)^{-1} and its dual uses T((dagger g)^{-1}).

Bi-coherent states are the displaced vacua

    phi(z) = e^{-|z|^2/2} sum_n z^n/sqrt(n!) T(g) e_n,
    psi(z) = e^{-|z|^2/2} sum_n z^n/sqrt(n!) (T(g)^dag)^{-1} e_n,

truncated with a certified norm-growth tail bound.  They satisfy the
displacement composition phase e^{-i z1 ^ z2} with the wedge
z1 ^ z2 = x1 y2 - x2 y1, resolve the identity against d^2z/pi, and carry
the canonical coherent-state overlap kernel.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, eval_laguerre, gammaincc, gammaln

from . import indexing
from .gl2 import GL2Matrix, rep_full
from .quadrature import ConvergenceError, PlaneScheme, integrate, polar_scheme, refine


def wedge(z1: complex, z2: complex) -> float:
    """Symplectic wedge x1 y2 - x2 y1."""
    return z1.real * z2.imag - z2.real * z1.imag


def canonical_displacement(z: complex, dim: int) -> np.ndarray:
    """dim x dim matrix of the closed-form displacement elements at z."""
    if dim < 1:
        raise ValueError(f"need dim >= 1, got {dim}")
    z = complex(z)
    t = abs(z) ** 2
    m, n = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    lo = np.minimum(m, n)
    diff = np.abs(m - n)
    pref = np.exp(0.5 * (gammaln(lo + 1) - gammaln(lo + diff + 1)) - t / 2)
    lag = eval_genlaguerre(lo, diff, t)
    arg = np.where(m >= n, z, -np.conj(z))
    # 0^0 = 1 on the diagonal at z = 0
    power = np.where(diff == 0, 1.0 + 0.0j, arg.astype(complex) ** diff)
    return pref * lag * power


@dataclass(frozen=True)
class DisplacementMatrix:
    """Displacement operator on the flat truncation, optionally deformed."""

    z: complex
    L_max: int
    mat: np.ndarray

    @property
    def dim(self) -> int:
        return indexing.dim(self.L_max)


def displacement_matrix(z: complex, L_max: int, g: GL2Matrix | None = None) -> DisplacementMatrix:
    """D(z) in flat coordinates; with g, the conjugated T(g) D(z) T(g)^{-1}."""
    d = indexing.dim(L_max)
    mat = canonical_displacement(z, d)
    if g is not None:
        T = rep_full(g, L_max)
        mat = T.dense() @ mat @ T.inv().dense()
    return DisplacementMatrix(complex(z), L_max, mat)


def dual_displacement_matrix(z: complex, L_max: int, g: GL2Matrix | None = None) -> DisplacementMatrix:
    """The dual displacement: canonical elements conjugated by T((dagger g)^{-1})."""
    d = indexing.dim(L_max)
    mat = canonical_displacement(z, d)
    if g is not None:
        T = rep_full(g, L_max)
        ttilde = T.inv().dense().conj().T  # T(gtilde) = (T(g)^dag)^{-1}
        mat = ttilde @ mat @ T.dense().conj().T  # ttilde^{-1} = T(g)^dag
    return DisplacementMatrix(complex(z), L_max, mat)


def dual_displacement_elements(z: complex, dim: int) -> np.ndarray:
    """Matrix-element array of the dual displacement: conj(D[n, m](-z)).

    For the canonical (unitary) matrix this coincides with D(z) entry by
    entry, which is the pairing identity D(-z) = D(z)^{-1} = (dual D)(z)^dag.
    """
    return canonical_displacement(-z, dim).conj().T


def compose_check(z1: complex, z2: complex, L_max: int, check_L: int | None = None) -> float:
    """Max deviation of D(z1) D(z2) - e^{-i z1^z2} D(z1+z2) on low sectors.

    The law holds exactly in infinite dimension; the truncated product loses
    only tail terms, so the deviation on sectors L <= check_L shrinks as
    L_max grows.
    """
    d = indexing.dim(L_max)
    prod = canonical_displacement(z1, d) @ canonical_displacement(z2, d)
    direct = math.e ** (-1j * wedge(z1, z2)) * canonical_displacement(z1 + z2, d)
    k = indexing.dim(check_L) if check_L is not None else indexing.safe_dim(L_max)
    return float(np.max(np.abs(prod[:k, :k] - direct[:k, :k])))


def kernel(z: complex, zp: complex) -> complex:
    """Bi-coherent overlap kernel e^{-|z|^2/2} e^{-|z'|^2/2} e^{conj(z) z'}."""
    return np.exp(-abs(z) ** 2 / 2 - abs(zp) ** 2 / 2 + np.conj(z) * zp)


def kernel_reproducing_check(z: complex, zpp: complex, scheme: PlaneScheme | None = None) -> float:
    """|quadrature of int K(z, z') K(z', z'') d^2z'/pi - K(z, z'')|."""
    if scheme is None:
        scheme = polar_scheme(64, 64)
    val = integrate(lambda w: kernel(z, w) * kernel(w, zpp), scheme, "plane")
    return float(abs(val - kernel(z, zpp)))


def coherent_coefficients(z: complex, dim: int) -> np.ndarray:
    """e^{-|z|^2/2} z^n / sqrt(n!) for n < dim (stable cumulative form)."""
    out = np.empty(dim, dtype=complex)
    out[0] = math.exp(-abs(z) ** 2 / 2)
    for n in range(1, dim):
        out[n] = out[n - 1] * z / math.sqrt(n)
    return out


@dataclass(frozen=True)
class BiCoherentPair:
    """Truncated bi-coherent pair at parameter z with certified tail bound."""

    z: complex
    phi_vec: np.ndarray
    psi_vec: np.ndarray
    n_cut: int
    tail_bound: float

    def overlap(self) -> complex:
        """<phi(z), psi(z)>; equals 1 up to the truncation tail."""
        return complex(np.vdot(self.phi_vec, self.psi_vec))


def _tail_envelope(z_abs: float, r_env: float, start: int) -> float:
    """Bound on sum_{n >= start} (r |z|)^n / sqrt(n!) by ratio-test geometry."""
    q = r_env * z_abs / math.sqrt(start + 1)
    if q >= 0.5:
        return math.inf
    log_c = start * math.log(max(r_env * z_abs, 1e-300)) - 0.5 * math.lgamma(start + 1)
    return math.exp(log_c) / (1 - q)


def bicoherent(z: complex, g: GL2Matrix, L_max: int, eps: float) -> BiCoherentPair:
    """Bi-coherent pair with the smallest cutoff whose tail bound is <= eps.

    The tail bound is e^{-|z|^2/2} [ sum_{n>N}^{dim-1} |z|^n/sqrt(n!) |T e_n|
    + envelope beyond the truncation ], the envelope using the norm-growth
    certificate |T e_n| <= r^n with r = sqrt(tr((dagger g) g)).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    z = complex(z)
    d = indexing.dim(L_max)
    T = rep_full(g, L_max)
    Td = T.dense()
    Ttilde = np.linalg.inv(Td.conj().T)
    norms_phi = np.linalg.norm(Td, axis=0)
    norms_psi = np.linalg.norm(Ttilde, axis=0)
    gram = g.gram()
    r_env = math.sqrt((gram.g11 + gram.g22).real)
    r_env_dual = math.sqrt((gram.inv().g11 + gram.inv().g22).real)
    if not norm_growth_check(norms_phi, r_env, 0.0) or not norm_growth_check(
        norms_psi, r_env_dual, 0.0
    ):
        raise ArithmeticError("norm-growth certificate failed inside the truncation")

    za = abs(z)
    damp = math.exp(-za**2 / 2)
    coeff_abs = np.exp(
        np.arange(d) * math.log(max(za, 1e-300)) - 0.5 * gammaln(np.arange(d) + 1.0)
    )
    r_max = max(r_env, r_env_dual)
    beyond = damp * _tail_envelope(za, r_max, d)
    worst_norms = np.maximum(norms_phi, norms_psi)
    n_cut = None
    for N in range(d):
        tail = damp * float(np.sum(coeff_abs[N + 1 :] * worst_norms[N + 1 :])) + beyond
        if tail <= eps:
            n_cut = N
            tail_bound = tail
            break
    if n_cut is None:
        needed = int(math.ceil(4 * (r_max * za) ** 2)) + 1
        raise ValueError(
            f"tail bound {eps:g} unreachable inside L_max={L_max}; "
            f"need flat cutoff around {needed} (raise L_max)"
        )
    coeff = coherent_coefficients(z, d)
    coeff[n_cut + 1 :] = 0.0
    return BiCoherentPair(z, Td @ coeff, Ttilde @ coeff, n_cut, tail_bound)


def covariance_check(z: complex, zp: complex, g: GL2Matrix, L_max: int, check_L: int | None = None) -> float:
    """Max deviation of the projective covariance of bi-coherent states:

        D_g(z) phi(z') = e^{-i z^z'} phi(z+z'),  and the dual relation
        for the psi family, both measured on sectors L <= check_L.
    """
    d = indexing.dim(L_max)
    T = rep_full(g, L_max)
    Td = T.dense()
    Ttilde = T.inv().dense().conj().T
    dcan_z = canonical_displacement(z, d)
    phase = math.e ** (-1j * wedge(z, zp))
    k = indexing.dim(check_L) if check_L is not None else indexing.safe_dim(L_max)

    # both deformed relations reduce to the canonical action on coefficients:
    # T(g) D T(g)^{-1} [T(g) v] = T(g) [D v], likewise for the dual family
    displaced = dcan_z @ coherent_coefficients(zp, d)
    shifted = phase * coherent_coefficients(z + zp, d)
    dev_phi = np.max(np.abs((Td @ displaced - Td @ shifted)[:k]))
    dev_psi = np.max(np.abs((Ttilde @ displaced - Ttilde @ shifted)[:k]))
    return float(max(dev_phi, dev_psi))


def resolution_check(
    g: GL2Matrix,
    L_max: int,
    R: float | None = None,
    scheme: PlaneScheme | None = None,
    check_tol: float | None = None,
) -> float:
    """Max deviation of int phi(z) psi(z)^dag d^2z/pi from the identity,
    measured on sectors L <= L_max/2.

    After conjugating away T(g) the integral reduces entrywise to the moment
    identity int e^{-|z|^2} z^n conj(z)^m d^2z/pi = n! delta_{nm}; the polar
    scheme covers the full plane (its radial rule integrates the e^{-t}
    moments exactly), so R enters only the reported tail diagnostic
    ``radial_tail`` and no node is discarded.  With ``check_tol`` set the
    deviation is recomputed on the doubled scheme and a shift above the
    tolerance raises ConvergenceError.
    """
    if scheme is None:
        scheme = polar_scheme(64, 64)
    d = indexing.dim(L_max)
    T = rep_full(g, L_max)
    Td = T.dense()
    Td_inv = T.inv().dense()

    def moment_block(sch: PlaneScheme) -> np.ndarray:
        nodes = sch.nodes
        V = np.empty((d, len(nodes)), dtype=complex)
        V[0] = np.exp(-np.abs(nodes) ** 2 / 2)
        for n in range(1, d):
            V[n] = V[n - 1] * nodes / math.sqrt(n)
        return (V * sch.weights[None, :]) @ V.conj().T

    result = Td @ moment_block(scheme) @ Td_inv
    k = indexing.dim(L_max // 2)
    deviation = float(np.max(np.abs(result[:k, :k] - np.eye(k))))
    if check_tol is not None:
        finer = Td @ moment_block(refine(scheme)) @ Td_inv
        shift = float(np.max(np.abs((finer - result)[:k, :k])))
        if shift > check_tol:
            raise ConvergenceError(deviation, shift, check_tol)
    return deviation


def radial_tail(n: int, R: float) -> float:
    """Mass of the n-th radial moment beyond |z| = R: Q(n+1, R^2)."""
    return float(gammaincc(n + 1, R * R))


def weight_operator_diag(s: float, n: int) -> float:
    """Closed-form diagonal of the isotropic weight operator:
    2/(1-s) ((s+1)/(s-1))^n for s < 1; reduces to 2 (-1)^n at s = 0 and to
    the n = 0 projector at s = -1."""
    if s >= 1:
        raise ValueError(f"integral diverges for s >= 1, got s = {s}")
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    ratio = (s + 1) / (s - 1)
    return 2 / (1 - s) * ratio**n


def weight_operator_numeric(s: float, n: int, scheme: PlaneScheme | None = None) -> float:
    """Same diagonal by plane quadrature of e^{s|z|^2/2} D[n, n](z)."""
    if s >= 1:
        raise ValueError(f"integral diverges for s >= 1, got s = {s}")
    if scheme is None:
        scheme = polar_scheme(64, 64, radial_scale=(1 - s) / 2)

    def integrand(z):
        t = np.abs(z) ** 2
        return np.exp((s - 1) * t / 2) * eval_laguerre(n, t)

    return float(np.real(integrate(integrand, scheme, "plane")))


def norm_growth_check(norms, r: float, alpha: float) -> bool:
    """True iff norms[n] <= r^n (n!)^alpha for every supplied n (log compare)."""
    if not 0 <= alpha < 0.5:
        raise ValueError(f"need 0 <= alpha < 1/2, got {alpha}")
    if r <= 0:
        raise ValueError(f"need r > 0, got {r}")
    for n, v in enumerate(norms):
        if v <= 0:
            continue
        if math.log(v) > n * math.log(r) + alpha * math.lgamma(n + 1) + 1e-12:
            return False
    return True


def bicoherent_norm_envelope(z_abs: float, r: float, alpha: float) -> float:
    """Envelope e^{-|z|^2} ( sum_n (r|z|)^n / (n!)^{1/2 - alpha} )^2 bounding
    the squared norm of the coherent superposition under certified growth."""
    if not 0 <= alpha < 0.5:
        raise ValueError(f"need 0 <= alpha < 1/2, got {alpha}")
    total = 0.0
    term = 1.0
    n = 0
    while term > 1e-18 * max(total, 1.0):
        total += term
        n += 1
        term *= (r * z_abs) / (n ** (0.5 - alpha))
        if n > 10_000:
            raise ArithmeticError("envelope sum failed to converge")
    return math.exp(-(z_abs**2)) * total**2
