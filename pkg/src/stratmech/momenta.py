"""Momentum maps of the three actions: SO(5) on T*S^9, W0 on T*Q_H0, and the
diagonal W0 action on T*Q_H0 x (spin quotient).

Sign convention for w0 = R.  The connection coordinate of a vertical vector is
its coefficient along i q.  Left multiplication by i on Q_H0 in R^10 is the
fundamental field of ``W_GENERATOR = -E12``, so the charge coordinate of a
skew matrix in the E12 basis (its (1,2) entry) is minus the value it takes on
the generator of w0.
"""

from dataclasses import dataclass

import numpy as np

from . import liealg
from .bundle import connection_form
from .errors import InvariantViolation, NotInAnnH

UNIT_TOL = 1e-12
H0_TOL = 1e-10

# Skew matrix whose fundamental field restricted to Q_H0 is q -> i q.
W_GENERATOR = -liealg.E12


@dataclass(frozen=True)
class PhasePoint:
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        p = np.asarray(self.p, dtype=float)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)
        if q.shape != (10,) or p.shape != (10,):
            raise InvariantViolation("shape", "q and p must have 10 components")
        if abs(np.linalg.norm(q) - 1.0) > UNIT_TOL:
            raise InvariantViolation("unit-norm", f"|q| = {float(np.linalg.norm(q)):.17g}")
        if abs(q @ p) > UNIT_TOL * max(1.0, np.linalg.norm(p)):
            raise InvariantViolation("cotangency", f"<q, p> = {float(q @ p):.17g}")


def mu_closed_form(q, p):
    """sum_k (p_k q_k^T - q_k p_k^T) for the two R^5 blocks."""
    q1, q2 = q[:5], q[5:]
    p1, p2 = p[:5], p[5:]
    return (np.outer(p1, q1) - np.outer(q1, p1)) + (np.outer(p2, q2) - np.outer(q2, p2))


def mu_defining(q, p, X):
    """<p, zeta_X(q)>, the value of the momentum map on X."""
    return float(p @ liealg.fundamental_field(X, q))


def self_test(rng=None, samples=4, tol=1e-12):
    """Check the closed form against <p, zeta_X(q)> on the basis of so(5)."""
    rng = np.random.default_rng(20240611) if rng is None else rng
    basis = liealg.so5_basis()
    worst = 0.0
    for _ in range(samples):
        q = rng.normal(size=10)
        p = rng.normal(size=10)
        M = mu_closed_form(q, p)
        for X in basis:
            worst = max(worst, abs(liealg.pairing(M, X) - mu_defining(q, p, X)))
    if worst > tol:
        raise RuntimeError(f"momentum map closed form failed its self test ({worst:.3e})")
    return worst


self_test()


def mu_full(s):
    """SO(5) momentum map of a PhasePoint."""
    return mu_closed_form(s.q, s.p)


def mu_W(t):
    """W0 momentum of a tangent vector at a frame; equals the connection since I = 1."""
    return connection_form(t.base.q, t.v)


def w_coordinate(spin_matrix):
    """Value of a matrix in so(5)* on the generator of w0."""
    return liealg.pairing(spin_matrix, W_GENERATOR)


def j_w(t, spin_matrix, tol=H0_TOL):
    """Diagonal W0 momentum mu_W(q, p) - lambda|w; zero on the reduced level set."""
    spin_matrix = np.asarray(spin_matrix, dtype=float)
    h = liealg.project(spin_matrix, liealg.SubalgebraTag.H0)
    if np.max(np.abs(h)) > tol:
        raise NotInAnnH(f"spin has an h0 component of size {np.max(np.abs(h)):.3e}")
    return mu_W(t) - w_coordinate(spin_matrix)
