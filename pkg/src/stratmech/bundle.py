"""The circle bundle Q_H0 in S^3 over the open hemisphere B0 of S^2(1/2).

Quaternions are stored as arrays (a, b, alpha, beta) meaning
a + i b + j alpha + k beta, i.e. q1 = a + i b and q2 = alpha + i beta with
q = q1 + q2 j.  Left multiplication by i is the S^1 part of the Weyl group
action, so the vertical direction at q is i q.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BaseMismatch, InvariantViolation, StepUnderflow

UNIT_TOL = 1e-12
REGULAR_TOL = 1e-10
RADIUS = 0.5


class BaseStratum(str, Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"


def qmul(p, q):
    """Hamilton product of quaternions stored as (w, x, y, z)."""
    p0, p1, p2, p3 = p
    q0, q1, q2, q3 = q
    return np.array([
        p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
        p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
        p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
        p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
    ])


def times_i(q):
    """i q, written out; used in the hot loops."""
    return np.array([-q[1], q[0], -q[3], q[2]])


def times_j(q):
    return np.array([-q[2], q[3], q[0], -q[1]])


def times_k(q):
    return np.array([-q[3], -q[2], q[1], q[0]])


def phase(q, theta):
    """e^{i theta} q, the S^1 gauge action."""
    c, s = np.cos(theta), np.sin(theta)
    return c * np.asarray(q, dtype=float) + s * times_i(q)


def delta_flip(q):
    """Lift of the Delta factor used here: (a, b, alpha, beta) -> (a, -b, alpha, -beta).

    It sends the hopf height z to -z.
    """
    q = np.asarray(q, dtype=float)
    return np.array([q[0], -q[1], q[2], -q[3]])


def determinant(q):
    """a beta - b alpha; vanishes exactly on the singular configurations."""
    return q[0] * q[3] - q[1] * q[2]


@dataclass(frozen=True)
class FramePoint:
    q: np.ndarray
    regular: bool

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        object.__setattr__(self, "q", q)
        if q.shape != (4,):
            raise InvariantViolation("shape", f"expected 4 components, got {q.shape}")
        if abs(q @ q - 1.0) > UNIT_TOL:
            raise InvariantViolation("unit-norm", f"|q|^2 = {float(q @ q):.17g}")


def frame_point(q):
    """Build a FramePoint, deriving the regular flag from a beta - b alpha."""
    q = np.asarray(q, dtype=float)
    return FramePoint(q, bool(abs(determinant(q)) > REGULAR_TOL))


@dataclass(frozen=True)
class BasePoint:
    """Point of B = closed upper hemisphere of S^2(1/2).

    ``fold`` records the sign of the height before folding, so the point of
    the full sphere can be recovered with :meth:`unfolded`.
    """

    x: float
    y: float
    z: float
    stratum: BaseStratum
    fold: int = 1

    def __post_init__(self):
        r2 = self.x ** 2 + self.y ** 2 + self.z ** 2
        if abs(r2 - RADIUS ** 2) > UNIT_TOL:
            raise InvariantViolation("radius", f"|b|^2 = {float(r2):.17g}")
        if self.z < 0:
            raise InvariantViolation("hemisphere", f"z = {float(self.z):.17g}")

    def vector(self):
        return np.array([self.x, self.y, self.z])

    def unfolded(self):
        return np.array([self.x, self.y, self.fold * self.z])


def base_point(c, regular=None):
    """Fold a point of S^2(1/2) into B; stratum follows ``regular`` when given."""
    c = np.asarray(c, dtype=float)
    fold = -1 if c[2] < 0 else 1
    if regular is None:
        regular = abs(c[2]) > REGULAR_TOL
    stratum = BaseStratum.INTERIOR if regular else BaseStratum.BOUNDARY
    return BasePoint(float(c[0]), float(c[1]), float(abs(c[2])), stratum, fold)


def hopf_vector(q):
    """(|q1|^2 - |q2|^2)/2, Re(q1 conj q2), Im(q1 conj q2) without folding."""
    a, b, al, be = q
    return np.array([
        0.5 * (a * a + b * b - al * al - be * be),
        a * al + b * be,
        b * al - a * be,
    ])


def hopf_jacobian(q):
    """Rows are the gradients of the three components of :func:`hopf_vector`."""
    a, b, al, be = q
    return np.array([
        [a, b, -al, -be],
        [al, be, a, b],
        [-be, al, b, -a],
    ])


def hopf(fp):
    """Project a frame point to B, folding the southern hemisphere up."""
    return base_point(hopf_vector(fp.q), regular=fp.regular)


def frame_fields(fp):
    """Orthonormal frame (i q, j q, k q) of T_q S^3."""
    q = fp.q if isinstance(fp, FramePoint) else np.asarray(fp, dtype=float)
    return times_i(q), times_j(q), times_k(q)


@dataclass(frozen=True)
class TangentAtFrame:
    base: FramePoint
    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        object.__setattr__(self, "v", v)
        if abs(v @ self.base.q) > UNIT_TOL * max(1.0, np.linalg.norm(v)):
            raise InvariantViolation("tangency", f"<v, q> = {float(v @ self.base.q):.17g}")


def connection_form(q, v):
    """<v, i q> on raw arrays."""
    return float(v @ times_i(q))


def mech_connection(t):
    """Mechanical connection value in w0 = R (coefficient of the generator i q)."""
    return connection_form(t.base.q, t.v)


def inertia(fp, X, Y):
    """Locked inertia <X i q, Y i q> of the circle action."""
    iq = times_i(fp.q)
    return float((X * iq) @ (Y * iq))


def _sphere_geodesic(q, u, t):
    n = np.linalg.norm(u)
    if n == 0.0:
        return q.copy()
    return np.cos(n * t) * q + np.sin(n * t) * (u / n)


def _extend(u):
    """Vector field on S^3 extending u by projecting the constant field."""
    u = np.asarray(u, dtype=float)

    def field(x):
        return u - (u @ x) * x

    return field


def _d_along(f, q, u, h):
    """Central difference of f along the geodesic through q with velocity u."""
    return (f(_sphere_geodesic(q, u, h)) - f(_sphere_geodesic(q, u, -h))) / (2 * h)


def _dA_estimate(q, u, v, h):
    U, V = _extend(u), _extend(v)
    alpha_V = lambda x: connection_form(x, V(x))
    alpha_U = lambda x: connection_form(x, U(x))
    # Lie bracket [U, V] = DV.U - DU.V, derivatives along geodesics.
    DV_U = _d_along(V, q, u, h)
    DU_V = _d_along(U, q, v, h)
    br = DV_U - DU_V
    br = br - (br @ q) * q
    return (_d_along(alpha_V, q, u, h) - _d_along(alpha_U, q, v, h)
            - connection_form(q, br))


def _richardson(q, u, v, h):
    return (4.0 * _dA_estimate(q, u, v, h / 2) - _dA_estimate(q, u, v, h)) / 3.0


def curvature_fd(fp, u, v, h=1e-4, tol=1e-9, min_step=1e-9):
    """d(A)(u, v) by central differences along geodesics with one Richardson pass.

    The step is halved until two consecutive extrapolated values agree to ``tol``
    (relative to the input scale); :class:`StepUnderflow` if h drops below
    ``min_step`` first.
    """
    q = fp.q
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    scale = max(1.0, np.linalg.norm(u) * np.linalg.norm(v))
    prev = _richardson(q, u, v, h)
    while True:
        h = h / 2
        if h < min_step:
            raise StepUnderflow(f"curvature finite difference did not settle above h = {min_step}")
        cur = _richardson(q, u, v, h)
        if abs(cur - prev) <= tol * scale:
            return float(cur)
        prev = cur


def horizontal_lift(b, u, fp, tol=1e-8):
    """Horizontal vector at ``fp`` that projects to ``u`` at ``b``.

    ``u`` is tangent to S^2(1/2) at the unfolded point of ``b``.
    """
    c = hopf_vector(fp.q)
    if np.linalg.norm(c - b.unfolded()) > tol:
        raise BaseMismatch(f"hopf(q) = {c} differs from base point {b.unfolded()}")
    u = np.asarray(u, dtype=float)
    if not np.any(u):
        return TangentAtFrame(fp, np.zeros(4))
    _, xi2, xi3 = frame_fields(fp)
    Jac = hopf_jacobian(fp.q)
    cols = np.column_stack((Jac @ xi2, Jac @ xi3))
    coef, *_ = np.linalg.lstsq(cols, u, rcond=None)
    return TangentAtFrame(fp, coef[0] * xi2 + coef[1] * xi3)


def random_frame(rng, min_height=0.0):
    """Uniform unit quaternion with |hopf height| >= min_height."""
    while True:
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        if abs(hopf_vector(q)[2]) >= min_height:
            return q
