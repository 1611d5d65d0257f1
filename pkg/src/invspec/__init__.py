"""Invariant spectra of Laplacians on sections of O(m) over the sphere.

Three routes meet here: transforms between Kahler potentials and moment
profiles (:mod:`invspec.profiles`), zeros of Bessel products for the
canonical pair (:mod:`invspec.bessel`) and a finite-element solver for
arbitrary pairs (:mod:`invspec.sturm`).
"""
from .errors import ConvergenceError, InvspecError, NonConcaveError, ProfileError, QuadratureError
from .spectrum import NORMALIZATION, SpectrumResult

__version__ = "0.1.0"

__all__ = ["ConvergenceError", "InvspecError", "NonConcaveError", "ProfileError", "QuadratureError",
           "NORMALIZATION", "SpectrumResult"]
