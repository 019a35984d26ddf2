"""Reduced dynamics on the regular spin stratum.

States are kept in the horizontal gauge: the frame moves along horizontal
lifts of the base curve, so the spin is parallel transported and only changes
through its own Hamiltonian flow.  In this gauge the equations are

    q'  = p0
    p0' = -|p0|^2 q - hor(grad_q V) + 2 x3 (i p0)
    x'  = Hamiltonian vector field of V for the spin form -gamma

with V = H - |p0|^2/2 the vertical energy.  The magnetic term is the
curvature 2 nu seen through the horizontal lift (i acts as the rotation J on
horizontal vectors), with charge coupling x3.
"""

import numpy as np

from .. import liealg
from ..bundle import (delta_flip, determinant, frame_point, hopf_vector, phase, times_i,
                      times_j, times_k)
from ..errors import InvariantViolation, PoleCrossing
from ..strata import SpinStratum, spin_class, spin_matrix
from . import kks
from .full import connection_value
from .state import ReducedState, Trajectory

POLE_ALARM = 1e-6


def k_matrix(x, y, s):
    """Block-diagonal quadratic form of the vertical energy in (a, b, alpha, beta)."""
    if x * x + y * y > s * s * (1 + 1e-12):
        raise ValueError("need x^2 + y^2 <= s^2")
    blk = np.array([[s * s - x * x, -x * y], [-x * y, s * s - y * y]])
    K = np.zeros((4, 4))
    K[:2, :2] = blk
    K[2:, 2:] = blk
    return K


def normal_spin_coordinates(X):
    """(x, y, z) of an h0-perp matrix after rotating its tails onto e3.

    Tails of matrices in O n h0-perp are parallel; the sign of the common
    direction only flips (x, y), which the quadratic form does not see.
    """
    C = X[2:, :2]
    U, sv, _ = np.linalg.svd(C)
    u = U[:, 0]
    return float(-(u @ C[:, 1])), float(u @ C[:, 0]), float(X[0, 1])


def vertical_energy_k(q4, x):
    """1/2 <K q, q> evaluated at the connection value of the spin matrix."""
    X = connection_value(q4, spin_matrix(x))
    xt, yt, zt = normal_spin_coordinates(X)
    st = np.sqrt(xt * xt + yt * yt + zt * zt)
    return 0.5 * float(q4 @ k_matrix(xt, yt, st) @ q4)


def vertical_energy(q, x):
    """Closed form of the vertical energy 1/2 <lam, I_q^-1 lam>."""
    a, b, al, be = q
    x1, x2, x3 = x
    u = x1 * a + x2 * b
    w = x1 * al + x2 * be
    D = a * be - b * al
    return 0.5 * (x3 * x3 + (u * u + w * w) / (D * D))


def vertical_energy_grad(q, x):
    """Gradients of :func:`vertical_energy` in q (R^4) and x (R^3)."""
    a, b, al, be = q
    x1, x2, x3 = x
    u = x1 * a + x2 * b
    w = x1 * al + x2 * be
    D = a * be - b * al
    F = u * u + w * w
    D2 = D * D
    gF = np.array([u * x1, u * x2, w * x1, w * x2])  # half of grad F
    gD = np.array([be, -al, -b, a])
    gq = gF / D2 - F * gD / (D2 * D)
    gx = np.array([(u * a + w * al) / D2, (u * b + w * be) / D2, x3])
    return gq, gx


def reduced_hamiltonian(r):
    """|p0|^2/2 plus the K-form vertical energy at the frame."""
    return 0.5 * float(r.p0 @ r.p0) + vertical_energy_k(r.frame.q, r.spin.vector())


def frequencies(q4, x):
    """Eigenvalues of K at the connection value: {s~^2, s~^2, z~^2, z~^2}."""
    X = connection_value(q4, spin_matrix(x))
    xt, yt, zt = normal_spin_coordinates(X)
    st2 = xt * xt + yt * yt + zt * zt
    return np.linalg.eigvalsh(k_matrix(xt, yt, np.sqrt(st2)))


def rotate_spin(x, theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([c * x[0] - s * x[1], s * x[0] + c * x[1], x[2]])


def gauge_act(q, p0, x, theta):
    """Joint W0 circle action on frame, horizontal covector and spin vector."""
    return phase(q, theta), phase(p0, theta), rotate_spin(x, theta)


def delta_act(q, p0, x):
    """Delta element flipping the hopf height: x -> (x1, -x2, -x3)."""
    return delta_flip(q), delta_flip(p0), np.array([x[0], -x[1], -x[2]])


def canonical_arrays(q, p0, x):
    """Section used for comparison: q1 real positive, hopf height positive."""
    theta = -np.arctan2(q[1], q[0])
    q, p0, x = gauge_act(q, p0, x, theta)
    q[1] = 0.0
    if q[3] > 0:
        q, p0, x = delta_act(q, p0, x)
    return q, p0, x


def canonicalize(r):
    q, p0, x = canonical_arrays(r.frame.q, r.p0, r.spin.vector())
    return make_state(q, p0, x, r.spin.s)


def make_state(q, p0, x, s):
    q = q / np.linalg.norm(q)
    p0 = p0 - (p0 @ q) * q
    iq = times_i(q)
    p0 = p0 - (p0 @ iq) * iq
    x = x * (s / np.linalg.norm(x))
    return ReducedState(frame_point(q), p0, spin_class(x, s))


def random_reduced_state(rng, s=1.0, stratum="regular", min_height=0.3,
                         min_planar=0.3, speed=(0.5, 1.0)):
    """Seeded reduced state in canonical gauge.

    Regular spins keep |(x1, x2)| >= min_planar * s; poles pick the sign of x3
    at random.  Frames keep hopf height >= min_height.
    """
    while True:
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        if abs(hopf_vector(q)[2]) >= min_height:
            break
    c1, c2 = rng.normal(size=2)
    p0 = c1 * times_j(q) + c2 * times_k(q)
    p0 *= rng.uniform(*speed) / np.linalg.norm(p0)
    if stratum == "pole":
        x = np.array([0.0, 0.0, s if rng.uniform() < 0.5 else -s])
    else:
        while True:
            x = rng.normal(size=3)
            x *= s / np.linalg.norm(x)
            if np.hypot(x[0], x[1]) >= min_planar * s:
                break
    q, p0, x = canonical_arrays(q, p0, x)
    return make_state(q, p0, x, s)


def _rhs(q, p0, x):
    gq, gx = vertical_energy_grad(q, x)
    iq = times_i(q)
    hor = gq - (gq @ q) * q - (gq @ iq) * iq
    dq = p0
    dp = -(p0 @ p0) * q - hor + 2.0 * x[2] * times_i(p0)
    dx = kks.spin_velocity(x, -gx)
    return dq, dp, dx


def _reproject(q, p0, x, s):
    q = q / np.linalg.norm(q)
    p0 = p0 - (p0 @ q) * q
    iq = times_i(q)
    p0 = p0 - (p0 @ iq) * iq
    x = x * (s / np.linalg.norm(x))
    return q, p0, x


def mcf_step(q, p0, x, s, h):
    """One RK4 step of the horizontal-gauge equations followed by re-projection."""
    k1 = _rhs(q, p0, x)
    k2 = _rhs(q + 0.5 * h * k1[0], p0 + 0.5 * h * k1[1], x + 0.5 * h * k1[2])
    k3 = _rhs(q + 0.5 * h * k2[0], p0 + 0.5 * h * k2[1], x + 0.5 * h * k2[2])
    k4 = _rhs(q + h * k3[0], p0 + h * k3[1], x + h * k3[2])
    q = q + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
    p0 = p0 + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    x = x + h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
    return _reproject(q, p0, x, s)


def pole_distance(x, s):
    return float(min(np.linalg.norm(x - [0, 0, s]), np.linalg.norm(x + [0, 0, s])))


def sample_times(t, h):
    n = int(round(t / h))
    if n < 1 or abs(n * h - t) > 1e-9 * max(1.0, t):
        raise ValueError(f"horizon {t} is not a whole number of steps {h}")
    return np.arange(n + 1) * h


def mcf_flow(r, t, h=1e-3):
    """Integrate the regular-stratum reduced system; samples every step."""
    if not h > 0:
        raise ValueError("step size must be positive")
    s = r.spin.s
    q, p0, x = r.frame.q.copy(), r.p0.copy(), r.spin.vector()
    if r.spin.stratum == SpinStratum.POLE or pole_distance(x, s) < POLE_ALARM:
        raise PoleCrossing("spin starts at a pole; use the Lorentz engine for this stratum",
                           time=0.0)
    if abs(determinant(q)) <= 1e-10:
        raise InvariantViolation("regular-frame", "frame lies over the equator")
    times = sample_times(t, h)
    states, energy, pole_gap = [], [], []
    for k, tk in enumerate(times):
        if k > 0:
            q, p0, x = mcf_step(q, p0, x, s, h)
            gap = pole_distance(x, s)
            if gap < POLE_ALARM:
                raise PoleCrossing("spin reached a pole", time=float(tk))
        st = make_state(*canonical_arrays(q, p0, x), s)
        states.append(st)
        energy.append(reduced_hamiltonian(st))
        pole_gap.append(pole_distance(x, s))
    diagnostics = {
        "energy": np.array(energy),
        "momentum_norm": np.full(len(times), s),
        "stratum": ["L1_SO2"] * len(times),
        "charge": np.array([st.spin.x3 for st in states]),
        "pole_distance": np.array(pole_gap),
    }
    return Trajectory(times, states, diagnostics, engine="reduced-mcf")
