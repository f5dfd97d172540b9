"""Exact determinants and adjugates via the baby-steps/giant-steps Krylov method and its reverse-mode derivative."""

from .adjoint_reverse import AdjointResult, adjoint
from .division_free import adjoint_division_free, det_division_free
from .krylov_det import det_forward, determinant
from .linalg import Matrix, adjugate_oracle, cofactor_det, det_gauss
from .polymatrix import invert_series_matrix, newton_inverse_oracle
from .rings import DualRing, Integers, PrimeField, SeriesRing

__all__ = [
    "AdjointResult",
    "DualRing",
    "Integers",
    "Matrix",
    "PrimeField",
    "SeriesRing",
    "adjoint",
    "adjoint_division_free",
    "adjugate_oracle",
    "cofactor_det",
    "det_division_free",
    "det_forward",
    "det_gauss",
    "determinant",
    "invert_series_matrix",
    "newton_inverse_oracle",
]

__version__ = "0.1.0"
