"""Largest-volume conjugacy classes of compact simple Lie groups."""
from ._backend import BACKEND
from .root_systems import GroupSpec, canonicalize, log_volume, log_volume_gradient
from .polynomials import RationalPolynomial, real_roots_unit_interval

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GroupSpec",
    "RationalPolynomial",
    "canonicalize",
    "log_volume",
    "log_volume_gradient",
    "real_roots_unit_interval",
]
