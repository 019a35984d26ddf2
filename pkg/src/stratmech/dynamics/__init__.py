"""Full and reduced dynamics."""

from . import compare, full, kks, magnetic, reduced
from .state import ReducedState, Trajectory

__all__ = ["compare", "full", "kks", "magnetic", "reduced", "ReducedState", "Trajectory"]
