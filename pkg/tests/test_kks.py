import numpy as np
import pytest

from stratmech import liealg
from stratmech.errors import SectionFailure
from stratmech.dynamics import kks
from stratmech.strata import spin_class, spin_matrix


def random_orbit_point(rng, s=1.0):
    A, B = np.linalg.qr(rng.normal(size=(5, 2)))[0].T
    return s * liealg.wedge(A, B)


def random_spin(rng, s=1.0, min_planar=0.05):
    while True:
        x = rng.normal(size=3)
        x *= s / np.linalg.norm(x)
        if np.hypot(x[0], x[1]) > min_planar * s:
            return x


def test_kks_trivial_cases(rng):
    lam = random_orbit_point(rng)
    X = liealg.random_skew(rng)
    assert kks.kks_form(lam, X, X) == 0.0
    # lam itself lies in its stabilizer
    for _ in range(5):
        assert abs(kks.kks_form(lam, lam, liealg.random_skew(rng))) < 1e-14


def test_kks_antisymmetric(rng):
    lam = random_orbit_point(rng)
    X, Y = liealg.random_skew(rng), liealg.random_skew(rng)
    assert kks.kks_form(lam, X, Y) == pytest.approx(-kks.kks_form(lam, Y, X), abs=1e-14)


def test_kks_closed(rng):
    # d omega(U, V, W) for the invariant extensions u_X(lam) = [X, lam]:
    # cyclic sum of X.omega(Y, Z) minus omega on brackets, by central differences.
    for _ in range(5):
        lam = random_orbit_point(rng)
        X, Y, Z = (liealg.random_skew(rng) for _ in range(3))

        def w(mu, A, B):
            return kks.kks_on_tangent(mu, liealg.bracket(A, mu), liealg.bracket(B, mu))

        def deriv(A, B, C, h=1e-5):
            plus = liealg.conjugate(liealg.exp_so5(h * A), lam)
            minus = liealg.conjugate(liealg.exp_so5(-h * A), lam)
            return (w(plus, B, C) - w(minus, B, C)) / (2 * h)

        total = 0.0
        for A, B, C in ((X, Y, Z), (Y, Z, X), (Z, X, Y)):
            # fundamental fields are conjugation-equivariant: [u_A, u_B] = -u_[A,B]
            total += deriv(A, B, C) + w(lam, liealg.bracket(A, B), C)
        assert abs(total) < 1e-5


def test_reduced_form_momentum_condition(rng):
    for _ in range(50):
        x = random_spin(rng)
        e1, e2 = kks.tangent_basis(x)
        zeta = kks.spin_generator_field(x)
        dx3 = np.array([0.0, 0.0, 1.0])
        for u in (e1, e2):
            assert abs(kks.kks_reduced_form(x, zeta, u) - dx3 @ u) < 1e-5


def test_reduced_form_is_minus_area_over_s(rng):
    for s in (0.5, 1.0, 2.0):
        x = random_spin(rng, s)
        e1, e2 = kks.tangent_basis(x)
        assert kks.kks_reduced_form(x, e1, e2) == pytest.approx(-1.0 / s, rel=1e-10)


def test_reduced_form_antisymmetric_and_invariant(rng):
    x = random_spin(rng)
    e1, e2 = kks.tangent_basis(x)
    assert kks.kks_reduced_form(x, e1, e1) == 0.0
    g0 = kks.kks_reduced_form(x, e1, e2)
    for th in rng.uniform(0, 6, size=10):
        R = np.array([[np.cos(th), -np.sin(th), 0], [np.sin(th), np.cos(th), 0], [0, 0, 1]])
        assert abs(kks.kks_reduced_form(R @ x, R @ e1, R @ e2) - g0) < 1e-5


def test_reduced_form_rejects_poles():
    pole = spin_class([0, 0, 1.0])
    with pytest.raises(SectionFailure):
        kks.kks_reduced_form(pole, np.array([1.0, 0, 0]), np.array([0, 1.0, 0]))


def test_ad_preimage_rejects_non_tangent(rng):
    lam = spin_matrix([0.3, 0.4, np.sqrt(0.75)])
    with pytest.raises(SectionFailure):
        kks.ad_preimage(lam, [lam])


def test_hamiltonian_spin_velocity(rng):
    x = random_spin(rng)
    dV = rng.normal(size=3)
    w = kks.hamiltonian_spin_velocity(x, dV)
    e1, e2 = kks.tangent_basis(x)
    assert abs(w @ x) < 1e-12
    for u in (e1, e2):
        assert abs(kks.kks_reduced_form(x, w, u) - dV @ u) < 1e-10


def test_spin_velocity_closed_form(rng):
    for s in (0.5, 1.0, 2.0):
        x = random_spin(rng, s)
        dV = rng.normal(size=3)
        assert np.allclose(kks.spin_velocity(x, dV), kks.hamiltonian_spin_velocity(x, dV),
                           atol=1e-10)
