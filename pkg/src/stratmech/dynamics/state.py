from dataclasses import dataclass, field

import numpy as np

from ..bundle import FramePoint, times_i
from ..errors import InvariantViolation
from ..strata import SpinClass

HORIZONTAL_TOL = 1e-10


@dataclass(frozen=True)
class ReducedState:
    """Gauge representative of a point of the reduced phase space.

    ``p0`` is horizontal at ``frame``; the W0 momentum of the lifted covector
    is fixed by the spin charge, so it is not stored.
    """

    frame: FramePoint
    p0: np.ndarray
    spin: SpinClass

    def __post_init__(self):
        p0 = np.asarray(self.p0, dtype=float)
        object.__setattr__(self, "p0", p0)
        q = self.frame.q
        scale = max(1.0, float(np.linalg.norm(p0)))
        if abs(p0 @ q) > HORIZONTAL_TOL * scale:
            raise InvariantViolation("tangency", f"<p0, q> = {float(p0 @ q):.17g}")
        if abs(p0 @ times_i(q)) > HORIZONTAL_TOL * scale:
            raise InvariantViolation("horizontality", f"A(p0) = {float(p0 @ times_i(q)):.17g}")


@dataclass
class Trajectory:
    """Sampled solution; ``states`` and ``times`` have equal length."""

    times: np.ndarray
    states: list
    diagnostics: dict = field(default_factory=dict)
    engine: str = ""

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if len(self.times) != len(self.states):
            raise InvariantViolation("trajectory-length",
                                     f"{len(self.times)} times, {len(self.states)} states")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise InvariantViolation("increasing-times")

    def __len__(self):
        return len(self.times)
