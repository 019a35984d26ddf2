"""Unreduced dynamics on T*S^9 and the projection to reduced coordinates."""

import numpy as np

from .. import liealg
from ..bundle import FramePoint, frame_point, times_i
from ..errors import ConvergenceFailure, NotOnLevelSet, NotOnOrbit, SingularConfig
from ..momenta import PhasePoint, mu_closed_form
from ..strata import (ConfigStratum, classify_config, spin_from_momentum, spin_matrix)
from .state import ReducedState

ORBIT_TOL = 1e-8


def hamiltonian(s):
    return 0.5 * float(s.p @ s.p)


def geodesic_flow(s, t):
    """Exact great-circle flow of H = |p|^2/2 on T*S^9."""
    q, p = s.q, s.p
    w = float(np.linalg.norm(p))
    if w == 0.0 or t == 0.0:
        return PhasePoint(q.copy(), p.copy())
    c, sn = np.cos(w * t), np.sin(w * t)
    q_t = c * q + (sn / w) * p
    p_t = -w * sn * q + c * p
    return PhasePoint(q_t, p_t)


# Invariant potentials on S^9 for the RATTLE integrator.  Each entry maps to
# (potential, gradient) on raw arrays.
def _free(q):
    return 0.0


def _free_grad(q):
    return np.zeros_like(q)


GRAM_COUPLING = 0.5


def _gram(q):
    c = q[:5] @ q[5:]
    return 0.5 * GRAM_COUPLING * c * c


def _gram_grad(q):
    c = q[:5] @ q[5:]
    return GRAM_COUPLING * c * np.concatenate((q[5:], q[:5]))


POTENTIALS = {
    "free": (_free, _free_grad),
    "gram": (_gram, _gram_grad),
}


def energy(s, hamiltonian="free"):
    U, _ = POTENTIALS[hamiltonian]
    return 0.5 * float(s.p @ s.p) + U(s.q)


def rattle_arrays(q, p, h, grad, max_iter=50, tol=1e-15):
    """One RATTLE step for |q| = 1 on raw arrays; returns (q, p)."""
    g0 = grad(q)
    Q = q + h * p - 0.5 * h * h * g0
    # |Q - (h^2/2) lam q|^2 = 1, solved for the multiplier lam.
    c = 0.5 * h * h
    lam = 0.0
    for it in range(max_iter):
        r = Q - c * lam * q
        f = r @ r - 1.0
        if abs(f) <= tol:
            break
        df = -2.0 * c * (r @ q)
        if df == 0.0:
            raise ConvergenceFailure("RATTLE position constraint has a vanishing derivative")
        lam -= f / df
    else:
        raise ConvergenceFailure(f"RATTLE position constraint not solved in {max_iter} iterations")
    p_half = p - 0.5 * h * (g0 + lam * q)
    q1 = q + h * p_half
    q1 = q1 / np.linalg.norm(q1)
    p_tmp = p_half - 0.5 * h * grad(q1)
    p1 = p_tmp - (q1 @ p_tmp) * q1
    return q1, p1


def rattle_step(s, h, hamiltonian="free"):
    """Constraint-preserving symplectic step of size h for an invariant Hamiltonian."""
    if not h > 0:
        raise ValueError("step size must be positive")
    _, grad = POTENTIALS[hamiltonian]
    q1, p1 = rattle_arrays(s.q, s.p, h, grad)
    return PhasePoint(q1, p1)


def embed_frame(q4):
    """Q_H0 in R^10: ((a, b, 0, 0, 0), (alpha, beta, 0, 0, 0))."""
    q = np.zeros(10)
    q[0:2] = q4[0:2]
    q[5:7] = q4[2:4]
    return q


def frame_part(x10):
    """R^4 part (coordinates 1, 2 of each block) of a vector in R^10."""
    return np.array([x10[0], x10[1], x10[5], x10[6]])


def normal_form_rotation(q):
    """g in SO(5) with g.q in Q_H0, q1 along e1 and hopf height positive.

    Built by Gram-Schmidt on (q1, q2), hence SO(5)-equivariant on the first two
    rows; the remaining rows are completed with det g = +1.
    """
    q1, q2 = q[:5], q[5:]
    n1 = np.linalg.norm(q1)
    e1 = q1 / n1
    r = q2 - (q2 @ e1) * e1
    nr = np.linalg.norm(r)
    if n1 * nr <= 1e-12:
        raise SingularConfig("q1 and q2 are linearly dependent")
    e2 = -r / nr
    M = np.column_stack((e1, e2, np.eye(5)))
    Qm, _ = np.linalg.qr(M)
    basis = Qm[:, :5].copy()
    basis[:, 0], basis[:, 1] = e1, e2
    if np.linalg.det(basis) < 0:
        basis[:, 4] = -basis[:, 4]
    return basis.T


def connection_value(q4, lam):
    """X in h0-perp with I_q(X) = lam, I the locked inertia of the SO(5) action at q."""
    Z = _orbit_fields(embed_frame(q4))
    I = Z.T @ Z
    rhs = 0.5 * np.einsum("ij,kij->k", lam, liealg.H0_PERP)
    coef = np.linalg.solve(I, rhs)
    return np.tensordot(coef, liealg.H0_PERP, axes=1)


def _orbit_fields(q):
    """Columns zeta_E(q) for E in the h0-perp basis, shape (10, 7)."""
    B = liealg.H0_PERP
    return np.concatenate((B @ q[:5], B @ q[5:]), axis=1).T


def lift(r):
    """PhasePoint over the frame whose momentum is the spin's section matrix."""
    q4 = r.frame.q
    q = embed_frame(q4)
    X = connection_value(q4, spin_matrix(r.spin.vector()))
    p = embed_frame(r.p0) + liealg.fundamental_field(X, q)
    return PhasePoint(q, p)


def decompose(s):
    """Normal form of s: rotation g, g.q, g.p, connection value X and horizontal part.

    X is the least-squares solution of zeta_X(g.q) = g.p over an orthonormal
    basis of h0-perp; the remainder is orthogonal to the orbit.
    """
    if classify_config(s.q) != ConfigStratum.REGULAR:
        raise SingularConfig("configuration lies on the SO(4) stratum")
    g = normal_form_rotation(s.q)
    gq = liealg.act(g, s.q)
    gp = liealg.act(g, s.p)
    Z = _orbit_fields(gq)
    coef, *_ = np.linalg.lstsq(Z, gp, rcond=None)
    X = np.tensordot(coef, liealg.H0_PERP, axes=1)
    rest = gp - liealg.fundamental_field(X, gq)
    return {"g": g, "q": gq, "p": gp, "X": X, "p0": frame_part(rest),
            "rest": rest, "mu": mu_closed_form(gq, gp)}


def charge(s):
    """E12 coordinate of the momentum in normal form, the conserved charge x3."""
    g = normal_form_rotation(s.q)
    return float(mu_closed_form(liealg.act(g, s.q), liealg.act(g, s.p))[0, 1])


def project_to_reduced(s, level=None):
    """Reduced state of a regular phase point.

    ``level`` demands the momentum orbit scale; NotOnOrbit if it differs.
    """
    d = decompose(s)
    lam = d["mu"]
    norm = np.sqrt(max(liealg.pairing(lam, lam), 0.0))
    if level is not None and abs(norm - level) > ORBIT_TOL * max(1.0, level):
        raise NotOnOrbit(f"momentum norm {float(norm):.17g} differs from the requested level {float(level):.17g}")
    if norm == 0.0:
        raise NotOnLevelSet("momentum vanishes; no spin class")
    q4 = frame_part(d["q"])
    q4 = q4 / np.linalg.norm(q4)
    p0 = d["p0"]
    p0 = p0 - (p0 @ q4) * q4
    iq = times_i(q4)
    p0 = p0 - (p0 @ iq) * iq
    spin = spin_from_momentum(lam, norm if level is None else level)
    return ReducedState(frame_point(q4), p0, spin)


def orbit_invariants(s):
    """Gram matrix of (q1, q2, p1, p2); it separates O(5)-orbits."""
    M = np.column_stack((s.q[:5], s.q[5:], s.p[:5], s.p[5:]))
    return M.T @ M


def random_phase_point(rng, speed=1.0):
    q = rng.normal(size=10)
    q /= np.linalg.norm(q)
    p = rng.normal(size=10)
    p -= (p @ q) * q
    p *= speed / np.linalg.norm(p)
    return PhasePoint(q, p)
