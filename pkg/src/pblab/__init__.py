"""pblab: a numerical laboratory for pseudo-bosonic ladder algebra.

The package cross-verifies, at desk scale, the constructive layers of a
deformed two-mode boson calculus: complex Hermite polynomials and their
invertible-2x2-matrix deformations, finite-dimensional representation
blocks with exact norm identities and growth bounds, truncated Fock-space
operator algebra (ladder pairs, shift isometries, pseudo-bosonic pairs,
metric operators), displacement operators with bi-coherent states and
resolutions of the identity, and the integral quantization map that sends
the classical bracket {z, conj z} = 1 to the pseudo-bosonic commutator.
"""

from .gl2 import GL2Matrix, dual, random_gl2, rep_block, rep_diag, rep_full
from .hermite import PolyCoeffs, exp_contraction, hermite_coeffs, inner
from .indexing import ModeIndex, SectorIndex, flatten, sector, unflatten

__version__ = "0.1.0"

__all__ = [
    "GL2Matrix",
    "ModeIndex",
    "PolyCoeffs",
    "SectorIndex",
    "__version__",
    "dual",
    "exp_contraction",
    "flatten",
    "hermite_coeffs",
    "inner",
    "random_gl2",
    "rep_block",
    "rep_diag",
    "rep_full",
    "sector",
    "unflatten",
]
