"""Small exact kernels for so(5), SO(5) and the diagonal action on R^5 x R^5.

Skew matrices double as elements of so(5)*: the identification goes through
the pairing ``-1/2 tr(XY)``, for which the standard ``e_i ^ e_j`` (i < j)
form an orthonormal basis.
"""

from enum import Enum

import numpy as np
import scipy.linalg

from .errors import InvariantViolation

SKEW_TOL = 1e-12
ROTATION_TOL = 1e-12


class SubalgebraTag(str, Enum):
    H0 = "h0"  # so(3), lower-right 3x3 block
    W0 = "w0"  # so(2), upper-left 2x2 block
    COMPLEMENT = "complement"  # columns 1, 2 of rows 3..5 and transpose


_MASKS = {}
_h0 = np.zeros((5, 5), dtype=bool)
_h0[2:, 2:] = True
_w0 = np.zeros((5, 5), dtype=bool)
_w0[:2, :2] = True
_MASKS[SubalgebraTag.H0] = _h0
_MASKS[SubalgebraTag.W0] = _w0
_MASKS[SubalgebraTag.COMPLEMENT] = ~(_h0 | _w0)


def wedge(u, v):
    """Return u ^ v = u v^T - v u^T."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.outer(u, v) - np.outer(v, u)


def elementary(i, j, n=5):
    """e_i ^ e_j with zero-based indices."""
    e = np.eye(n)
    return wedge(e[i], e[j])


# Basis element of w0 with (1,2) entry +1; its coordinate is the charge coordinate.
E12 = elementary(0, 1)


def so5_basis():
    """Orthonormal basis e_i ^ e_j, i < j, in lexicographic order."""
    return [elementary(i, j) for i in range(5) for j in range(i + 1, 5)]


def h0_perp_basis():
    """Orthonormal basis of the orthogonal complement of h0 (dimension 7).

    The first element spans w0, the remaining six span the complement block.
    """
    return [elementary(i, j) for i in range(5) for j in range(i + 1, 5) if i < 2]


H0_PERP = np.array(h0_perp_basis())


def cross3(u, v):
    """Cross product of two 3-vectors (np.cross is slow on single vectors)."""
    return np.array([u[1] * v[2] - u[2] * v[1],
                     u[2] * v[0] - u[0] * v[2],
                     u[0] * v[1] - u[1] * v[0]])


def check_skew(X, tol=SKEW_TOL):
    X = np.asarray(X, dtype=float)
    if X.shape != (5, 5):
        raise InvariantViolation("shape", f"expected 5x5, got {X.shape}")
    if np.max(np.abs(X + X.T)) > tol:
        raise InvariantViolation("skewness")
    return X


def check_rotation(R, tol=ROTATION_TOL):
    R = np.asarray(R, dtype=float)
    if np.max(np.abs(R.T @ R - np.eye(R.shape[0]))) > tol:
        raise InvariantViolation("orthogonality")
    if abs(np.linalg.det(R) - 1.0) > tol:
        raise InvariantViolation("determinant")
    return R


def pairing(X, Y):
    """-1/2 trace(X Y); the Ad-invariant inner product on so(5)."""
    return -0.5 * float(np.einsum("ij,ji->", X, Y))


def bracket(X, Y):
    return X @ Y - Y @ X


def project(X, tag):
    """Orthogonal projection of X onto the block labelled by ``tag``."""
    return np.where(_MASKS[SubalgebraTag(tag)], X, 0.0)


def embed_complement(v, w):
    """Skew matrix with column 1 rows 3..5 = v and column 2 rows 3..5 = w."""
    X = np.zeros((5, 5))
    X[2:, 0] = v
    X[2:, 1] = w
    X[0, 2:] = -np.asarray(v, dtype=float)
    X[1, 2:] = -np.asarray(w, dtype=float)
    return X


def complement_coordinates(X):
    """Inverse of :func:`embed_complement` on the complement block."""
    return X[2:, 0].copy(), X[2:, 1].copy()


def embed_h0(R3):
    """Block-embed a 3x3 matrix into the lower-right corner of I_5."""
    g = np.eye(5)
    g[2:, 2:] = R3
    return g


def exp_so5(X):
    """Matrix exponential of a skew matrix, using Pade scaling and squaring."""
    X = np.asarray(X, dtype=float)
    if not np.any(X):
        return np.eye(5)
    return scipy.linalg.expm(X)


def reorthonormalize(R, iterations=20, tol=1e-15):
    """Nearest rotation by Newton polar iteration R <- (R + R^-T) / 2."""
    R = np.array(R, dtype=float)
    for _ in range(iterations):
        R_next = 0.5 * (R + np.linalg.inv(R).T)
        done = np.max(np.abs(R_next - R)) < tol
        R = R_next
        if done:
            break
    return R


def conjugate(g, X):
    """Ad_g X = g X g^-1 for orthogonal g."""
    return g @ X @ g.T


def fundamental_field(X, q):
    """Generator of the diagonal action at q in R^5 x R^5: (X q1, X q2)."""
    q = np.asarray(q, dtype=float)
    return np.concatenate((X @ q[:5], X @ q[5:]))


def act(g, q):
    """Diagonal action g.(q1, q2) = (g q1, g q2)."""
    q = np.asarray(q, dtype=float)
    return np.concatenate((g @ q[:5], g @ q[5:]))


def random_skew(rng, scale=1.0):
    A = rng.normal(size=(5, 5)) * scale
    return A - A.T


def random_rotation(rng, n=5):
    """Haar-distributed element of SO(n)."""
    Z = rng.normal(size=(n, n))
    Qm, Rm = np.linalg.qr(Z)
    Qm = Qm * np.sign(np.diag(Rm))
    if np.linalg.det(Qm) < 0:
        Qm[:, 0] = -Qm[:, 0]
    return Qm
