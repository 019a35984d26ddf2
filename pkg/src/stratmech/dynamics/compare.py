"""Agreement between the unreduced flow and the reduced engines.

The full engine lifts the initial reduced state, runs the exact geodesic flow
and projects every sample back.  The reduced engine is mcf_flow on the regular
spin stratum and the Lorentz equation (charge -x3) at the poles.
"""

from dataclasses import dataclass, field

import numpy as np

from ..bundle import hopf_jacobian, hopf_vector
from ..strata import SpinStratum, orbit_map, spin_distance
from . import full, magnetic, reduced

DEFAULT_TOLERANCES = {"base": 1e-4, "spin": 1e-4, "energy": 1e-8}


@dataclass
class Comparison:
    engine: str
    times: np.ndarray
    base_distance: np.ndarray
    spin_distance: np.ndarray
    energy_discrepancy: np.ndarray
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    @property
    def max_base(self):
        return float(np.max(self.base_distance))

    @property
    def max_spin(self):
        return float(np.max(self.spin_distance))

    @property
    def max_energy(self):
        return float(np.max(self.energy_discrepancy))

    @property
    def passed(self):
        return (self.max_base < self.tolerances["base"]
                and self.max_spin < self.tolerances["spin"]
                and self.max_energy < self.tolerances["energy"])

    def summary(self):
        return {"engine": self.engine, "max_base_distance": self.max_base,
                "max_spin_distance": self.max_spin, "max_energy_discrepancy": self.max_energy,
                "verdict": "PASS" if self.passed else "FAIL"}


def _align(t, h, h_reduced):
    """Indices into the reduced samples that line up with the full samples."""
    full_times = reduced.sample_times(t, h)
    ratio = h / h_reduced
    stride = int(round(ratio))
    if stride < 1 or abs(stride - ratio) > 1e-9:
        raise ValueError("the full-engine step must be a whole multiple of the reduced step")
    return full_times, stride


def compare_engines(r0, t=1.0, h=1e-3, h_reduced=None, tolerances=None):
    """Run both engines from r0 and collect samplewise discrepancies.

    ``h`` is the sampling step of the full flow; ``h_reduced`` (default h) is the
    integrator step of the reduced engine.  Samples are aligned on the coarser grid.
    """
    h_reduced = h if h_reduced is None else h_reduced
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    s0 = full.lift(r0)
    e0 = full.hamiltonian(s0)
    if h_reduced <= h:
        times, stride = _align(t, h, h_reduced)
    else:
        times, stride = _align(t, h_reduced, h_reduced)
        stride = 1
    pole = r0.spin.stratum == SpinStratum.POLE
    if pole:
        c0 = hopf_vector(r0.frame.q)
        v0 = hopf_jacobian(r0.frame.q) @ r0.p0
        traj = magnetic.lorentz_flow(c0, v0, -r0.spin.x3, t, h_reduced)
    else:
        traj = reduced.mcf_flow(r0, t, h_reduced)
    base, spin, energy = [], [], []
    for k, tk in enumerate(times):
        j = k * stride
        sk = full.geodesic_flow(s0, tk)
        if pole:
            base.append(np.linalg.norm(orbit_map(sk.q) - traj.states[j][0].vector()))
            # Crossing the equator applies the Delta flip, which sends x3 to -x3.
            side = 1.0 if traj.diagnostics["unfolded"][j][2] >= 0 else -1.0
            spin.append(abs(full.charge(sk) - side * r0.spin.x3))
            energy.append(abs(traj.diagnostics["energy"][j] + 0.5 * r0.spin.s ** 2 - e0))
        else:
            rk = full.project_to_reduced(sk)
            st = traj.states[j]
            base.append(np.linalg.norm(hopf_vector(rk.frame.q) - hopf_vector(st.frame.q)))
            spin.append(spin_distance(rk.spin, st.spin))
            energy.append(abs(traj.diagnostics["energy"][j] - e0))
    return Comparison(traj.engine, times, np.array(base), np.array(spin), np.array(energy), tol)


# Fixed-step RK4 resolves the approach to the singular configuration stratum
# only when it lasts many steps: min |D| / |v| over the exact trajectory must
# exceed RESOLUTION_STEPS * h.
RESOLUTION_STEPS = 50


def equator_time_scale(r0, t=1.0, h=1e-3):
    """min over the exact lifted trajectory of height / speed, with height = sqrt(det Gram)."""
    s0 = full.lift(r0)
    speed = np.sqrt(2.0 * full.hamiltonian(s0))
    heights = [orbit_map(full.geodesic_flow(s0, tk).q)[2] for tk in reduced.sample_times(t, h)]
    return float(min(heights) / speed) if speed > 0 else float("inf")


def resolved(r0, t=1.0, h=1e-3, steps=RESOLUTION_STEPS):
    return equator_time_scale(r0, t, h) >= steps * h


def seeded_states(seed, count=20, s=1.0, stratum="regular", t=1.0, h=1e-3, screen=True):
    """``count`` seeded initial conditions; with ``screen`` unresolved ones are skipped.

    Returns the states and the number of rejected draws.
    """
    rng = np.random.default_rng(seed)
    states, rejected = [], 0
    while len(states) < count:
        r0 = reduced.random_reduced_state(rng, s=s, stratum=stratum)
        if screen and stratum == "regular" and not resolved(r0, t, h):
            rejected += 1
            continue
        states.append(r0)
    return states, rejected


def run_suite(seed=0, count=20, t=1.0, h=1e-3, s=1.0, stratum="regular", tolerances=None,
              screen=True):
    """Compare the engines on ``count`` seeded initial conditions.

    Returns the list of comparisons and the number of screened-out draws.
    """
    states, rejected = seeded_states(seed, count, s, stratum, t, h, screen)
    return [compare_engines(r0, t, h, tolerances=tolerances) for r0 in states], rejected
