"""Normalized complex Hermite polynomials as exact coefficient grids.

A polynomial in the pair (z, conj z) is stored as a dense grid c[j, k] of
coefficients of z^j conj(z)^k.  The normalized complex Hermite polynomial
with mode label (n1, n2) is

    h_{n1,n2}(z) = (n1! n2!)^{-1/2} sum_{k=0}^{min(n1,n2)}
                   (-1)^k k! C(n1,k) C(n2,k) z^{n1-k} conj(z)^{n2-k},

equivalently the image of the normalized monomial z^{n1} conj(z)^{n2} under
the contraction operator exp(-d/dz d/dconj z).  Inner products against the
Gaussian measure dnu are evaluated exactly through moment contraction, so
orthonormality is certified without quadrature error.

An integer backend is provided for golden tests: the unnormalized grid of
sqrt(n1! n2!) h_{n1,n2} has integer coefficients and integer Gaussian inner
products, making the orthonormality defect exactly zero in exact arithmetic.
"""

import math
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .quadrature import exact_gaussian_moment


def _factorial_float(n: int) -> float:
    return float(math.factorial(n)) if n <= 170 else float(np.exp(gammaln(n + 1)))


class PolyCoeffs:
    """Dense coefficient grid of a polynomial in z and conj(z)."""

    __slots__ = ("coeff",)

    def __init__(self, coeff):
        arr = np.array(coeff, dtype=complex)
        if arr.ndim != 2:
            raise ValueError("coefficient grid must be two-dimensional")
        self.coeff = _trim(arr)

    @classmethod
    def zero(cls) -> "PolyCoeffs":
        return cls(np.zeros((1, 1)))

    @classmethod
    def const(cls, c) -> "PolyCoeffs":
        return cls(np.array([[c]], dtype=complex))

    @classmethod
    def monomial(cls, j: int, k: int, c=1.0) -> "PolyCoeffs":
        """c * z^j * conj(z)^k."""
        if j < 0 or k < 0:
            raise ValueError(f"monomial degrees must be non-negative, got ({j}, {k})")
        grid = np.zeros((j + 1, k + 1), dtype=complex)
        grid[j, k] = c
        return cls(grid)

    @property
    def deg_z(self) -> int:
        return self.coeff.shape[0] - 1

    @property
    def deg_zbar(self) -> int:
        return self.coeff.shape[1] - 1

    def __add__(self, other: "PolyCoeffs") -> "PolyCoeffs":
        rows = max(self.coeff.shape[0], other.coeff.shape[0])
        cols = max(self.coeff.shape[1], other.coeff.shape[1])
        grid = np.zeros((rows, cols), dtype=complex)
        grid[: self.coeff.shape[0], : self.coeff.shape[1]] += self.coeff
        grid[: other.coeff.shape[0], : other.coeff.shape[1]] += other.coeff
        return PolyCoeffs(grid)

    def __sub__(self, other: "PolyCoeffs") -> "PolyCoeffs":
        return self + other.scaled(-1.0)

    def __mul__(self, other: "PolyCoeffs") -> "PolyCoeffs":
        a, b = self.coeff, other.coeff
        grid = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=complex)
        for j in range(a.shape[0]):
            for k in range(a.shape[1]):
                if a[j, k] != 0:
                    grid[j : j + b.shape[0], k : k + b.shape[1]] += a[j, k] * b
        return PolyCoeffs(grid)

    def scaled(self, c) -> "PolyCoeffs":
        return PolyCoeffs(self.coeff * c)

    def conjugate(self) -> "PolyCoeffs":
        """Complex conjugate of the function: swaps the z and conj(z) roles."""
        return PolyCoeffs(self.coeff.conj().T)

    def dz(self) -> "PolyCoeffs":
        if self.coeff.shape[0] == 1:
            return PolyCoeffs.zero()
        j = np.arange(1, self.coeff.shape[0])
        return PolyCoeffs(self.coeff[1:, :] * j[:, None])

    def dzbar(self) -> "PolyCoeffs":
        if self.coeff.shape[1] == 1:
            return PolyCoeffs.zero()
        k = np.arange(1, self.coeff.shape[1])
        return PolyCoeffs(self.coeff[:, 1:] * k[None, :])

    def __call__(self, z) -> complex:
        """Horner evaluation of sum c[j,k] z^j conj(z)^k."""
        zb = np.conj(z)
        # inner Horner along conj(z), outer along z
        row_vals = np.empty(self.coeff.shape[0], dtype=complex)
        for j in range(self.coeff.shape[0]):
            acc = 0.0 + 0.0j
            for k in range(self.coeff.shape[1] - 1, -1, -1):
                acc = acc * zb + self.coeff[j, k]
            row_vals[j] = acc
        out = 0.0 + 0.0j
        for j in range(len(row_vals) - 1, -1, -1):
            out = out * z + row_vals[j]
        return complex(out)

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeff) <= tol))

    def allclose(self, other: "PolyCoeffs", atol: float = 1e-12) -> bool:
        diff = (self - other).coeff
        return bool(np.all(np.abs(diff) <= atol))

    def to_json(self) -> dict:
        return {
            "deg_z": self.deg_z,
            "deg_zbar": self.deg_zbar,
            "coeff": [[[float(c.real), float(c.imag)] for c in row] for row in self.coeff],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PolyCoeffs":
        grid = np.array([[complex(re, im) for re, im in row] for row in data["coeff"]])
        return cls(grid)

    def __repr__(self):
        return f"PolyCoeffs(deg_z={self.deg_z}, deg_zbar={self.deg_zbar})"


def _trim(arr: np.ndarray) -> np.ndarray:
    rows, cols = arr.shape
    while rows > 1 and not arr[rows - 1, :cols].any():
        rows -= 1
    while cols > 1 and not arr[:rows, cols - 1].any():
        cols -= 1
    return np.ascontiguousarray(arr[:rows, :cols])


def monomial_basis(n1: int, n2: int) -> PolyCoeffs:
    """Normalized monomial z^{n1} conj(z)^{n2} / sqrt(n1! n2!)."""
    norm = math.exp(-0.5 * (math.lgamma(n1 + 1) + math.lgamma(n2 + 1)))
    return PolyCoeffs.monomial(n1, n2, norm)


def hermite_coeffs(n1: int, n2: int) -> PolyCoeffs:
    """Coefficient grid of the normalized complex Hermite polynomial h_{n1,n2}."""
    if n1 < 0 or n2 < 0:
        raise ValueError(f"mode indices must be non-negative, got ({n1}, {n2})")
    grid = np.zeros((n1 + 1, n2 + 1), dtype=complex)
    for k in range(min(n1, n2) + 1):
        grid[n1 - k, n2 - k] = (-1) ** k * math.factorial(k) * math.comb(n1, k) * math.comb(n2, k)
    norm = math.exp(-0.5 * (math.lgamma(n1 + 1) + math.lgamma(n2 + 1)))
    return PolyCoeffs(grid * norm)


def exp_contraction(p: PolyCoeffs) -> PolyCoeffs:
    """Apply exp(-d/dz d/dconj z) exactly on the coefficient grid.

    The operator is the terminating sum over t of (-1)^t/t! (d/dz d/dzbar)^t,
    which maps c[j+t, k+t] into c[j, k] with weight
    (-1)^t/t! * (j+t)!/j! * (k+t)!/k!.
    """
    c = p.coeff
    rows, cols = c.shape
    out = np.zeros_like(c)
    for j in range(rows):
        for k in range(cols):
            acc = 0.0 + 0.0j
            factor = 1.0
            for t in range(min(rows - j, cols - k)):
                if t > 0:
                    factor *= -(j + t) * (k + t) / t
                acc += factor * c[j + t, k + t]
            out[j, k] = acc
    return PolyCoeffs(out)


def hermite_via_contraction(n1: int, n2: int) -> PolyCoeffs:
    """h_{n1,n2} built by contracting the normalized monomial (cross-check route)."""
    return exp_contraction(monomial_basis(n1, n2))


def inner(p: PolyCoeffs, q: PolyCoeffs) -> complex:
    """Exact Gaussian inner product <p, q> = int conj(p) q dnu via moments.

    Writing conj(p) = sum conj(P[j,k]) z^k conj(z)^j, the monomial pairing
    integrates to (k + j')! when k + j' = j + k' and to zero otherwise, so
    only coefficient diagonals of equal charge j - k couple.
    """
    P, Q = p.coeff, q.coeff
    d_min = max(-(P.shape[1] - 1), -(Q.shape[1] - 1))
    d_max = min(P.shape[0] - 1, Q.shape[0] - 1)
    total = 0.0 + 0.0j
    for d in range(d_min, d_max + 1):
        vp = np.diagonal(P, offset=-d)  # entries P[j, j-d]
        vq = np.diagonal(Q, offset=-d)
        jp = np.arange(len(vp)) + max(d, 0)  # z-degrees along the diagonal
        jq = np.arange(len(vq)) + max(d, 0)
        # moment exponent (j - d) + j' for p-index j, q-index j'
        expo = jp[:, None] + jq[None, :] - d
        moments = np.exp(gammaln(expo + 1.0))
        small = expo <= 20
        if np.any(small):  # exact factorials where they are exactly representable
            moments[small] = np.vectorize(lambda n: float(math.factorial(int(n))))(expo[small])
        total += vp.conj() @ moments @ vq
    return complex(total)


def norm_sq(p: PolyCoeffs) -> float:
    return inner(p, p).real


# -- exact integer backend ---------------------------------------------------

def hermite_terms_exact(n1: int, n2: int) -> dict[tuple[int, int], int]:
    """Integer coefficient grid of the unnormalized sqrt(n1! n2!) h_{n1,n2}."""
    if n1 < 0 or n2 < 0:
        raise ValueError(f"mode indices must be non-negative, got ({n1}, {n2})")
    return {
        (n1 - k, n2 - k): (-1) ** k * math.factorial(k) * math.comb(n1, k) * math.comb(n2, k)
        for k in range(min(n1, n2) + 1)
    }


def exp_contraction_exact(terms: dict[tuple[int, int], Fraction]) -> dict[tuple[int, int], Fraction]:
    """Exact-rational contraction transform on a sparse term map."""
    out: dict[tuple[int, int], Fraction] = {}
    for (j, k), c in terms.items():
        for t in range(min(j, k) + 1):
            w = Fraction((-1) ** t * math.factorial(j) * math.factorial(k),
                         math.factorial(t) * math.factorial(j - t) * math.factorial(k - t))
            key = (j - t, k - t)
            out[key] = out.get(key, Fraction(0)) + w * c
    return {key: c for key, c in out.items() if c != 0}


def inner_exact(p: dict[tuple[int, int], int], q: dict[tuple[int, int], int]):
    """Exact Gaussian inner product of sparse real-coefficient term maps."""
    total = 0
    for (j, k), cp in p.items():
        for (jq, kq), cq in q.items():
            total += cp * cq * exact_gaussian_moment(j + kq, k + jq)
    return total
