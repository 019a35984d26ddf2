"""Isotropy classification for S^9 and T*S^9 under SO(5), and the spin quotient.

The spin quotient is S^2(s)/~ with (x1, x2, x3) ~ (-x1, -x2, x3); its
singular stratum consists of the two poles (0, 0, +-s).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from . import liealg
from .errors import InvariantViolation, NotOnLevelSet

CONFIG_TOL = 1e-10
RANK_TOL = 1e-9
POLE_TOL = 1e-10
LEVEL_TOL = 1e-8


class ConfigStratum(str, Enum):
    REGULAR = "regular_SO3"
    SINGULAR = "singular_SO4"


class PhaseTag(str, Enum):
    L0 = "L0_trivial"
    L1 = "L1_SO2"
    L2 = "L2_SO3"
    L3 = "L3_SO4"


@dataclass(frozen=True)
class PhaseStratum:
    tag: PhaseTag
    over: ConfigStratum


class SpinStratum(str, Enum):
    POLE = "pole"
    REGULAR = "regular"


def gram(q):
    q1, q2 = q[:5], q[5:]
    return np.array([[q1 @ q1, q1 @ q2], [q1 @ q2, q2 @ q2]])


def classify_config(q):
    G = gram(np.asarray(q, dtype=float))
    if np.linalg.det(G) > CONFIG_TOL:
        return ConfigStratum.REGULAR
    return ConfigStratum.SINGULAR


def span_dimension(q, p, tol=RANK_TOL):
    """Numerical rank of [q1 q2 p1 p2]; near-zero singular values count as zero."""
    M = np.column_stack((q[:5], q[5:], p[:5], p[5:]))
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


_TAG_BY_DIM = {4: PhaseTag.L0, 3: PhaseTag.L1, 2: PhaseTag.L2, 1: PhaseTag.L3}


def classify_phase(s):
    """Isotropy type SO(5 - d), d = dim span{q1, q2, p1, p2}."""
    d = span_dimension(s.q, s.p)
    return PhaseStratum(_TAG_BY_DIM[d], classify_config(s.q))


def orbit_map(q):
    """Image of q in B = S^9/SO(5), as a point of the closed upper hemisphere.

    Uses only the Gram matrix, so it is SO(5)-invariant by construction.
    """
    G = gram(np.asarray(q, dtype=float))
    det = max(G[0, 0] * G[1, 1] - G[0, 1] ** 2, 0.0)
    return np.array([0.5 * (G[0, 0] - G[1, 1]), G[0, 1], np.sqrt(det)])


@dataclass(frozen=True)
class SpinClass:
    x1: float
    x2: float
    x3: float
    s: float
    stratum: SpinStratum

    def __post_init__(self):
        if not self.s > 0:
            raise InvariantViolation("orbit-scale", f"s = {float(self.s):.17g}")
        r2 = self.x1 ** 2 + self.x2 ** 2 + self.x3 ** 2
        if abs(r2 - self.s ** 2) > 1e-10 * max(1.0, self.s ** 2):
            raise InvariantViolation("spin-norm", f"|x|^2 = {float(r2):.17g}, s^2 = {float(self.s ** 2):.17g}")

    def vector(self):
        return np.array([self.x1, self.x2, self.x3])


def spin_class(x, s=None):
    """Canonical SpinClass of a point of S^2(s).

    Regular points are represented with x1 > 0, or x1 = 0 and x2 > 0.
    """
    x = np.asarray(x, dtype=float)
    s = float(np.linalg.norm(x)) if s is None else float(s)
    pole = np.hypot(x[0], x[1]) <= POLE_TOL
    if pole:
        return SpinClass(0.0, 0.0, float(np.copysign(s, x[2])), s, SpinStratum.POLE)
    if x[0] < 0 or (x[0] == 0 and x[1] < 0):
        x = np.array([-x[0], -x[1], x[2]])
    x = x + 0.0  # drop negative zeros
    return SpinClass(float(x[0]), float(x[1]), float(x[2]), s, SpinStratum.REGULAR)


def spin_distance(a, b):
    """Distance in S^2(s)/~ between two spin vectors or classes."""
    va = a.vector() if isinstance(a, SpinClass) else np.asarray(a, dtype=float)
    vb = b.vector() if isinstance(b, SpinClass) else np.asarray(b, dtype=float)
    flipped = vb * np.array([-1.0, -1.0, 1.0])
    return float(min(np.linalg.norm(va - vb), np.linalg.norm(va - flipped)))


def spin_matrix(x):
    """Section of the spin quotient: the element of O n h0-perp with tails on e3.

    Entries: (1,2) = x3, (2,3) = x1, (3,1) = x2 (one-based), skew completed.
    """
    x1, x2, x3 = x
    X = np.zeros((5, 5))
    X[0, 1], X[1, 0] = x3, -x3
    X[1, 2], X[2, 1] = x1, -x1
    X[2, 0], X[0, 2] = x2, -x2
    return X


def rank2_factor(lam):
    """Write a rank-2 skew matrix as t * A ^ B with A, B orthonormal, t > 0.

    Uses the real Schur form, whose only non-zero 2x2 block carries t.
    """
    T, Z = scipy.linalg.schur(lam, output="real")
    offd = np.abs(np.diag(T, 1))
    k = int(np.argmax(offd))
    t = T[k, k + 1]
    A, B = Z[:, k], Z[:, k + 1]
    if t < 0:
        A, B, t = B, A, -t
    return float(t), A, B


def spin_from_momentum(lam, s, tol=LEVEL_TOL):
    """Point of O//0 H0 = S^2(s)/~ represented by lam in O n h0-perp.

    lam = s A ^ B; the tails (entries 3..5) of A and B are parallel, and an H0
    rotation taking their common line to e3 leaves the cross product of the
    first three components as the spin vector.
    """
    lam = liealg.check_skew(lam, tol=1e-10)
    h = liealg.project(lam, liealg.SubalgebraTag.H0)
    if np.max(np.abs(h)) > tol:
        raise NotOnLevelSet(f"h0 component {np.max(np.abs(h)):.3e}")
    norm2 = liealg.pairing(lam, lam)
    if abs(norm2 - s * s) > tol * max(1.0, s * s):
        raise NotOnLevelSet(f"pairing(lam, lam) = {float(norm2):.17g} but s^2 = {float(s * s):.17g}")
    sv = np.linalg.svd(lam, compute_uv=False)
    if sv[2] > tol * max(1.0, sv[0]):
        raise NotOnLevelSet(f"rank exceeds 2 (third singular value {sv[2]:.3e})")
    t, A, B = rank2_factor(lam)
    a, b = A[2:], B[2:]
    tail = a if np.linalg.norm(a) >= np.linalg.norm(b) else b
    n = np.linalg.norm(tail)
    u = tail / n if n > 0 else np.array([1.0, 0.0, 0.0])
    # Coordinates after the H0 rotation u -> e3; the residual choice u -> -u is ~.
    A3 = np.array([A[0], A[1], a @ u])
    B3 = np.array([B[0], B[1], b @ u])
    x = t * np.cross(A3, B3)
    x *= s / np.linalg.norm(x)
    return spin_class(x, s)


STRATUM_TABLE = (
    {
        "tag": PhaseTag.L0.value,
        "isotropy": "{1}",
        "model": "(Q_H0 x_B0 T*B0) x_W0 (R x (R^3 x R^3)_{1}/H0), v and w independent",
        "dimension": 8,
        "empty": False,
        "flow_invariant": True,
    },
    {
        "tag": PhaseTag.L1.value,
        "isotropy": "SO(2)",
        "model": "(Q_H0 x_B0 T*B0) x_W0 (R x C0(S^1)), C0 = cone over S^1 minus apex",
        "dimension": 7,
        "empty": False,
        "flow_invariant": False,
    },
    {
        "tag": PhaseTag.L2.value,
        "isotropy": "SO(3)",
        "model": "T*B0 x R x {0}",
        "dimension": 5,
        "empty": False,
        "flow_invariant": False,
    },
    {
        "tag": PhaseTag.L3.value,
        "isotropy": "SO(4)",
        "model": "empty over the regular configuration stratum",
        "dimension": None,
        "empty": True,
        "flow_invariant": None,
    },
)


def stratum_table():
    """Secondary strata of (T*Q_(H0))/G over the regular configuration stratum."""
    return [dict(row) for row in STRATUM_TABLE]
