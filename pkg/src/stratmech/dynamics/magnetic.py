"""Charged particle on S^2(1/2) in the field 2 nu: Lorentz and Wong equations.

The ODE is integrated on the whole sphere and folded into B (z -> |z|)
afterwards, which produces the reflections at the equator.
"""

import numpy as np

from .. import liealg
from ..bundle import RADIUS, base_point
from ..errors import InvariantViolation, StepTooLarge
from .reduced import sample_times
from .state import Trajectory

FIELD_STRENGTH = 2.0
RESOLUTION = 0.1 * (RADIUS / 2)


def _accel(c, v, charge):
    n = c / RADIUS
    return -(v @ v) / (RADIUS * RADIUS) * c + FIELD_STRENGTH * charge * liealg.cross3(n, v)


def magnetic_step(c, v, charge, h):
    """RK4 step of c'' = -|c'|^2 c / R^2 + 2 charge J(c'), J = n x."""
    a1 = _accel(c, v, charge)
    c2, v2 = c + 0.5 * h * v, v + 0.5 * h * a1
    a2 = _accel(c2, v2, charge)
    c3, v3 = c + 0.5 * h * v2, v + 0.5 * h * a2
    a3 = _accel(c3, v3, charge)
    c4, v4 = c + h * v3, v + h * a3
    a4 = _accel(c4, v4, charge)
    c_new = c + h / 6.0 * (v + 2 * v2 + 2 * v3 + v4)
    v_new = v + h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4)
    c_new *= RADIUS / np.linalg.norm(c_new)
    v_new = v_new - (v_new @ c_new) / (RADIUS * RADIUS) * c_new
    return c_new, v_new


def _check_initial(c, v, h):
    c = np.asarray(c, dtype=float)
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(c) - RADIUS) > 1e-12:
        raise InvariantViolation("radius", f"|c| = {float(np.linalg.norm(c)):.17g}")
    if abs(c @ v) > 1e-12 * max(1.0, np.linalg.norm(v)):
        raise InvariantViolation("tangency", f"<c, v> = {float(c @ v):.17g}")
    if not h > 0:
        raise ValueError("step size must be positive")
    if h * np.linalg.norm(v) > RESOLUTION:
        raise StepTooLarge(f"h |v| = {h * np.linalg.norm(v):.3g} exceeds {RESOLUTION}", time=0.0)
    return c.copy(), v.copy()


def fold(c, v):
    """Fold a point and velocity of the full sphere into the upper hemisphere."""
    if c[2] < 0:
        return np.array([c[0], c[1], -c[2]]), np.array([v[0], v[1], -v[2]])
    return c.copy(), v.copy()


def _run(c, v, charge_of, t, h, engine):
    times = sample_times(t, h)
    raw_c = np.empty((len(times), 3))
    raw_v = np.empty((len(times), 3))
    charges = np.empty(len(times))
    lam = charge_of(None)
    for k in range(len(times)):
        if k > 0:
            c, v = magnetic_step(c, v, lam, h)
            lam = charge_of(lam)
        raw_c[k], raw_v[k], charges[k] = c, v, lam
    states = []
    for ck, vk in zip(raw_c, raw_v):
        fc, fv = fold(ck, vk)
        states.append((base_point(ck), fv))
    speed = np.linalg.norm(raw_v, axis=1)
    diagnostics = {
        "unfolded": raw_c,
        "unfolded_velocity": raw_v,
        "energy": 0.5 * speed ** 2,
        "speed": speed,
        "charge": charges,
        "kappa_g": geodesic_curvature(raw_c, h),
        "momentum_norm": np.abs(charges),
        "stratum": ["L2_SO3" if abs(ck[2]) > 1e-10 else "equator" for ck in raw_c],
    }
    return Trajectory(times, states, diagnostics, engine=engine)


def lorentz_flow(b, v, charge, t, h=1e-3):
    """Magnetic geodesic with charge +-s starting at base point b with velocity v.

    ``b`` is a BasePoint (its unfolded position is used) or a point of S^2(1/2).
    """
    c0 = b.unfolded() if hasattr(b, "unfolded") else np.asarray(b, dtype=float)
    c, v = _check_initial(c0, v, h)
    charge = float(charge)
    return _run(c, v, lambda lam: charge, t, h, "reduced-lorentz")


def wong_flow(b, v, z, t, h=1e-3):
    """Wong's equations for the abelian structure group: D_c' lambda = 0.

    The charge is carried along and its covariant derivative vanishes; with a
    trivial adjoint action that means lambda' = 0, so the base equation is the
    Lorentz equation with charge lambda.
    """
    c0 = b.unfolded() if hasattr(b, "unfolded") else np.asarray(b, dtype=float)
    c, v = _check_initial(c0, v, h)

    def transport(lam):
        return float(z) if lam is None else lam

    return _run(c, v, transport, t, h, "wong")


def geodesic_curvature(points, h):
    """kappa_g from central differences of equally spaced samples on S^2(1/2).

    Endpoints reuse the neighbouring interior value.
    """
    P = np.asarray(points, dtype=float)
    if len(P) < 3:
        return np.zeros(len(P))
    v = (P[2:] - P[:-2]) / (2 * h)
    a = (P[2:] - 2 * P[1:-1] + P[:-2]) / (h * h)
    n = P[1:-1] / np.linalg.norm(P[1:-1], axis=1)[:, None]
    speed = np.linalg.norm(v, axis=1)
    kap = np.einsum("ij,ij->i", a, np.cross(n, v)) / np.maximum(speed, 1e-300) ** 3
    kap = np.where(speed > 1e-12, kap, 0.0)
    return np.concatenate(([kap[0]], kap, [kap[-1]]))


def _poly_derivative(ts, ys, t0):
    coef = np.polyfit(ts - t0, ys, len(ts) - 1)
    return np.array([coef[-2]])


def equator_crossings(traj, points=4):
    """Incidence and reflection angles at each crossing of the folded path.

    Angles are between the folded velocity and the equatorial plane, estimated
    from polynomial fits through ``points`` folded samples on each side,
    evaluated at the interpolated crossing time.  Returns a list of dicts.
    """
    P = traj.diagnostics["unfolded"]
    times = traj.times
    folded = np.array([s[0].vector() for s in traj.states])
    out = []
    z = P[:, 2]
    for k in range(len(z) - 1):
        if z[k] == 0 or np.sign(z[k]) == np.sign(z[k + 1]):
            continue
        lo, hi = k - points + 1, k + 1 + points
        if lo < 0 or hi > len(z):
            continue
        # Crossing time from a cubic through the unfolded heights.
        win = slice(k - 1, k + 3)
        coef = np.polyfit(times[win] - times[k], z[win], 3)
        roots = [r.real for r in np.roots(coef)
                 if abs(r.imag) < 1e-12 and -1e-12 <= r.real <= times[k + 1] - times[k] + 1e-12]
        tc = times[k] + (min(roots, key=lambda r: abs(r)) if roots else
                         (times[k + 1] - times[k]) * z[k] / (z[k] - z[k + 1]))
        angles = []
        for sl in (slice(lo, k + 1), slice(k + 1, hi)):
            ts = times[sl]
            vel = np.array([_poly_derivative(ts, folded[sl, i], tc)[0] for i in range(3)])
            pos = np.array([np.polyval(np.polyfit(ts - tc, folded[sl, i], len(ts) - 1), 0.0)
                            for i in range(3)])
            n = pos / np.linalg.norm(pos)
            tangential = vel - (vel @ n) * n
            angles.append(float(np.arcsin(min(1.0, abs(tangential[2]) /
                                              np.linalg.norm(tangential)))))
        jump = float(np.linalg.norm(folded[k + 1] - folded[k]))
        out.append({"time": float(tc), "incidence": angles[0], "reflection": angles[1],
                    "jump": jump})
    return out
