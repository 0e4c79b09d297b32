"""Truncated matrix realizations of the ladder algebra: two-mode bosons,
their deformations, the flat-index ladder pair, shift isometries, the
deformed pseudo-bosonic pair, and metric operators.

Everything lives on the flat-index truncation keeping sectors L <= L_max
(dimension (L_max+1)(L_max+2)/2).  Raising operators leak out of the top
sector, so operator identities are exact only on the safe block of sectors
L <= L_max - 1; all commutator checks project there.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import indexing
from .gl2 import BlockDiagOperator, GL2Matrix, rep_full

_COND_LIMIT = 1e6


@dataclass(frozen=True)
class TruncatedOperator:
    """Dense complex matrix on the sector truncation, tagged with L_max."""

    L_max: int
    mat: np.ndarray

    def __post_init__(self):
        d = indexing.dim(self.L_max)
        if self.mat.shape != (d, d):
            raise ValueError(f"expected {d}x{d} matrix for L_max={self.L_max}, got {self.mat.shape}")
        if not np.all(np.isfinite(self.mat.real)) or not np.all(np.isfinite(self.mat.imag)):
            raise ValueError("matrix entries must be finite")

    @property
    def dim(self) -> int:
        return indexing.dim(self.L_max)

    @property
    def safe_dim(self) -> int:
        return indexing.safe_dim(self.L_max)

    def safe_block(self) -> np.ndarray:
        """Sub-matrix on sectors L <= L_max - 1, where ladder identities are exact."""
        s = self.safe_dim
        return self.mat[:s, :s]

    def dagger(self) -> "TruncatedOperator":
        return TruncatedOperator(self.L_max, self.mat.conj().T)


def safe_part(mat: np.ndarray, L_max: int) -> np.ndarray:
    s = indexing.safe_dim(L_max)
    return mat[:s, :s]


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def ladder(L_max: int) -> tuple[TruncatedOperator, TruncatedOperator]:
    """Flat-index lowering/raising pair: lower e_n = sqrt(n) e_{n-1}."""
    if L_max < 1:
        raise ValueError(f"need L_max >= 1, got {L_max}")
    d = indexing.dim(L_max)
    lower = np.zeros((d, d), dtype=complex)
    for n in range(1, d):
        lower[n - 1, n] = math.sqrt(n)
    return TruncatedOperator(L_max, lower), TruncatedOperator(L_max, lower.conj().T)


def two_mode(L_max: int):
    """Two-mode boson matrices (a1, a1dag, a2, a2dag) on the flat basis."""
    if L_max < 1:
        raise ValueError(f"need L_max >= 1, got {L_max}")
    d = indexing.dim(L_max)
    a1 = np.zeros((d, d), dtype=complex)
    a2 = np.zeros((d, d), dtype=complex)
    for n in range(d):
        n1, n2 = indexing.unflatten(n)
        if n1 >= 1:
            a1[indexing.flatten(n1 - 1, n2), n] = math.sqrt(n1)
        if n2 >= 1:
            a2[indexing.flatten(n1, n2 - 1), n] = math.sqrt(n2)
    wrap = lambda m: TruncatedOperator(L_max, m)
    return wrap(a1), wrap(a1.conj().T), wrap(a2), wrap(a2.conj().T)


def deformed_two_mode(g: GL2Matrix, L_max: int):
    """Deformed annihilators/creators (A1, A2, A1dag, A2dag):

        A1 = conj(g11) a1 + conj(g21) a2,   A2 = conj(g12) a1 + conj(g22) a2,

    with adjoints by conjugate transpose.  On the safe block
    [A_i, A_j^dag] = ((dagger g) g)_{ij} I while [A1, A2] = 0 exactly.
    """
    a1, a1d, a2, a2d = two_mode(L_max)
    A1 = np.conj(g.g11) * a1.mat + np.conj(g.g21) * a2.mat
    A2 = np.conj(g.g12) * a1.mat + np.conj(g.g22) * a2.mat
    wrap = lambda m: TruncatedOperator(L_max, m)
    return wrap(A1), wrap(A2), wrap(A1.conj().T), wrap(A2.conj().T)


@dataclass(frozen=True)
class PseudoPair:
    """Deformed pseudo-bosonic pair on the truncation.

    ``a_op`` is the deformed lowering operator T(g) B T(g)^{-1}; ``b_op`` is
    the adjoint of the dual deformation, T(g) Bdag T(g)^{-1}, so that
    [a_op, b_op] = I on the safe block and the shared vacuum is e_0.
    """

    g: GL2Matrix
    L_max: int
    a_op: TruncatedOperator
    b_op: TruncatedOperator
    T: BlockDiagOperator
    T_inv: BlockDiagOperator

    def vec_phi(self, n: int) -> np.ndarray:
        """Deformed basis vector: T(g) e_n in flat coordinates."""
        e = np.zeros(self.a_op.dim, dtype=complex)
        e[n] = 1.0
        return self.T.apply(e)

    def vec_psi(self, n: int) -> np.ndarray:
        """Dual basis vector: T((dagger g)^(-1)) e_n = (T(g)^dag)^{-1} e_n."""
        e = np.zeros(self.a_op.dim, dtype=complex)
        e[n] = 1.0
        return self.T_inv.dagger().apply(e)

    def dual_lowering(self) -> TruncatedOperator:
        """The operator lowering the dual family (adjoint of b_op's role)."""
        return self.b_op.dagger()

    def number_operator(self) -> TruncatedOperator:
        """T(g) Bdag B T(g)^{-1}; eigenvectors vec_phi(n) with eigenvalue n."""
        d = self.a_op.dim
        num = np.diag(np.arange(d, dtype=float)).astype(complex)
        mat = self.T.dense() @ num @ self.T_inv.dense()
        return TruncatedOperator(self.L_max, mat)


def pseudo_pair(g: GL2Matrix, L_max: int) -> PseudoPair:
    """Build the deformed pair; ill-conditioned g is rejected since T(g)^{-1}
    amplifies roundoff like cond(g)^L."""
    if g.cond() > _COND_LIMIT:
        raise ValueError(f"condition number {g.cond():.2e} exceeds {_COND_LIMIT:.0e}")
    lower, raiser = ladder(L_max)
    T = rep_full(g, L_max)
    T_inv = T.inv()
    Td = T.dense()
    Td_inv = T_inv.dense()
    a_op = TruncatedOperator(L_max, Td @ lower.mat @ Td_inv)
    b_op = TruncatedOperator(L_max, Td @ raiser.mat @ Td_inv)
    return PseudoPair(g, L_max, a_op, b_op, T, T_inv)


def cuntz_isometry(n: int, L_max: int) -> TruncatedOperator:
    """Shift isometry e_m -> e_flatten(m, n), defined on columns with
    m + n <= L_max (images inside the truncation); a partial permutation."""
    if not 0 <= n <= L_max:
        raise ValueError(f"need 0 <= n <= L_max, got n = {n}")
    d = indexing.dim(L_max)
    mat = np.zeros((d, d), dtype=complex)
    for m in range(L_max - n + 1):
        mat[indexing.flatten(m, n), m] = 1.0
    return TruncatedOperator(L_max, mat)


def cuntz_domain_dim(n: int, L_max: int) -> int:
    """Number of basis columns on which the n-th isometry is defined."""
    return L_max - n + 1


def metric_operators(g: GL2Matrix, L_max: int) -> tuple[TruncatedOperator, TruncatedOperator]:
    """Gram-type metric pair: S_phi = T(g) T(g)^dag = T(g gdag) and its
    blockwise inverse S_psi; both positive-definite Hermitian with
    S_phi S_psi = I block by block."""
    T = rep_full(g, L_max)
    phi_blocks = tuple(b @ b.conj().T for b in T.blocks)

    def inverse_gram(b):
        # S_psi block = (b b^dag)^{-1} = z^dag z with z = b^{-1}: inverting b
        # (condition cond(g)^L) instead of its Gram (condition squared) and
        # forming the product keeps the result Hermitian positive exactly
        z = np.linalg.inv(b)
        z = z @ (2 * np.eye(b.shape[0]) - b @ z)  # one Newton polish
        return z.conj().T @ z

    psi_blocks = tuple(inverse_gram(b) for b in T.blocks)
    s_phi = BlockDiagOperator(L_max, phi_blocks)
    s_psi = BlockDiagOperator(L_max, psi_blocks)
    return (
        TruncatedOperator(L_max, s_phi.dense()),
        TruncatedOperator(L_max, s_psi.dense()),
    )


def save_operator(op: TruncatedOperator, basepath) -> None:
    """Write <base>.json metadata and <base>.bin raw data.

    Layout: row-major, little-endian float64, interleaved (re, im) per entry.
    """
    base = Path(basepath)
    interleaved = np.empty((op.dim, op.dim, 2), dtype="<f8")
    interleaved[:, :, 0] = op.mat.real
    interleaved[:, :, 1] = op.mat.imag
    base.with_suffix(".bin").write_bytes(interleaved.tobytes())
    meta = {
        "L_max": op.L_max,
        "dim": op.dim,
        "layout": "row-major little-endian f8 interleaved re/im",
    }
    base.with_suffix(".json").write_text(json.dumps(meta, indent=1))


def load_operator(basepath) -> TruncatedOperator:
    base = Path(basepath)
    meta = json.loads(base.with_suffix(".json").read_text())
    d = meta["dim"]
    raw = np.frombuffer(base.with_suffix(".bin").read_bytes(), dtype="<f8")
    interleaved = raw.reshape(d, d, 2)
    return TruncatedOperator(meta["L_max"], interleaved[:, :, 0] + 1j * interleaved[:, :, 1])
