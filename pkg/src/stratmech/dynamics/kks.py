"""Kirillov-Kostant-Souriau form on coadjoint orbits of SO(5) and its reduction
to the spin surface S^2(s)/~.
"""

import numpy as np

from .. import liealg
from ..errors import SectionFailure
from ..strata import SpinClass, SpinStratum, spin_matrix

_BASIS = liealg.so5_basis()
_IU = np.triu_indices(5, 1)


def _coords(X):
    return X[_IU]


def _from_coords(c):
    X = np.zeros((5, 5))
    X[_IU] = c
    return X - X.T


# _AD[k] is the matrix of X -> [X, E_k] in basis coordinates; ad_lam is linear in lam.
_AD = np.array([[_coords(liealg.bracket(Ej, Ek)) for Ej in _BASIS] for Ek in _BASIS])
_AD = np.transpose(_AD, (0, 2, 1))


def kks_form(lam, X, Y):
    """KKS form at lam on the tangent vectors [X, lam] and [Y, lam]."""
    return liealg.pairing(lam, liealg.bracket(X, Y))


def ad_matrix(lam):
    """Matrix of X -> [X, lam] in the orthonormal basis coordinates."""
    return np.tensordot(_coords(lam), _AD, axes=1)


def ad_preimage(lam, tangents, tol=1e-9):
    """X with [X, lam] = u for each tangent u (least squares, minimal norm)."""
    A = ad_matrix(lam)
    rhs = np.column_stack([_coords(u) for u in tangents])
    sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    resid = A @ sol - rhs
    scale = max(1.0, float(np.max(np.abs(rhs))))
    if np.max(np.abs(resid)) > tol * scale:
        raise SectionFailure(f"tangent vector not in the orbit tangent space "
                             f"(residual {np.max(np.abs(resid)):.3e})")
    return [_from_coords(sol[:, k]) for k in range(sol.shape[1])]


def kks_on_tangent(lam, u, v):
    """KKS form at lam on arbitrary orbit-tangent matrices u, v."""
    Xu, Xv = ad_preimage(lam, [u, v])
    return kks_form(lam, Xu, Xv)


def _spin_vector(spin):
    if isinstance(spin, SpinClass):
        if spin.stratum == SpinStratum.POLE:
            raise SectionFailure("reduced spin form requested at a pole")
        return spin.vector()
    return np.asarray(spin, dtype=float)


def kks_reduced_form(spin, u, v):
    """Reduced form gamma on S^2(s)/~, pulled back along the section spin_matrix.

    u, v are tangent to S^2(s) at the spin vector; the section is linear, so
    its differential is spin_matrix applied to the tangent vectors.
    """
    x = _spin_vector(spin)
    return kks_on_tangent(spin_matrix(x), spin_matrix(u), spin_matrix(v))


def tangent_basis(x):
    """Orthonormal (e1, e2) tangent to the sphere at x with e1 x e2 = x/|x|."""
    n = x / np.linalg.norm(x)
    k = int(np.argmin(np.abs(n)))
    a = np.zeros(3)
    a[k] = 1.0
    e1 = liealg.cross3(n, a)
    e1 /= np.linalg.norm(e1)
    e2 = liealg.cross3(n, e1)
    return e1, e2


def spin_generator_field(x, generator=liealg.E12, eps=1e-6):
    """Velocity of the spin vector under conjugation by exp(t * generator).

    Computed by central differences of the section read-back, so it does not
    depend on knowing how the circle acts on the sphere.
    """
    lam = spin_matrix(x)

    def read(t):
        g = liealg.exp_so5(t * generator)
        L = liealg.conjugate(g, lam)
        return np.array([L[1, 2], L[2, 0], L[0, 1]])

    return (read(eps) - read(-eps)) / (2 * eps)


def hamiltonian_spin_velocity(x, dV):
    """w tangent at x with gamma(w, .) = dV on the tangent plane."""
    e1, e2 = tangent_basis(x)
    g = kks_reduced_form(x, e1, e2)
    return (dV @ e2) / g * e1 - (dV @ e1) / g * e2


def spin_velocity(x, dV):
    """Closed form of hamiltonian_spin_velocity: gamma = -area/s gives x cross dV."""
    return liealg.cross3(x, dV)
