"""Singular reduction of a particle with SO(5) symmetry: strata, momenta and dynamics."""

from . import bundle, errors, liealg, momenta, strata

__version__ = "0.1.0"

__all__ = ["bundle", "errors", "liealg", "momenta", "strata", "__version__"]
