import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from stratmech import liealg
from stratmech.errors import InvariantViolation
from stratmech.liealg import E12, SubalgebraTag

TAGS = list(SubalgebraTag)

coords = arrays(np.float64, 10, elements=st.floats(-10, 10))


def skew(c):
    X = np.zeros((5, 5))
    X[np.triu_indices(5, 1)] = c
    return X - X.T


def test_pairing_of_w0_generator():
    s = 1.7
    assert liealg.pairing(s * E12, s * E12) == pytest.approx(s * s, abs=1e-15)


def test_pairing_zero_and_disjoint(rng):
    Y = liealg.random_skew(rng)
    assert liealg.pairing(np.zeros((5, 5)), Y) == 0.0
    assert liealg.pairing(liealg.elementary(0, 1), liealg.elementary(2, 3)) == 0.0


def test_basis_orthonormal():
    B = liealg.so5_basis()
    G = np.array([[liealg.pairing(X, Y) for Y in B] for X in B])
    assert np.allclose(G, np.eye(10), atol=1e-15)
    assert len(liealg.h0_perp_basis()) == 7


@settings(max_examples=200, deadline=None)
@given(coords, coords)
def test_pairing_symmetric_and_positive(a, b):
    X, Y = skew(a), skew(b)
    assert liealg.pairing(X, Y) == pytest.approx(liealg.pairing(Y, X), abs=1e-12)
    if np.linalg.norm(a) > 1e-100:
        assert liealg.pairing(X, X) > 0


def test_pairing_ad_invariant(rng):
    for _ in range(20):
        X, Y = liealg.random_skew(rng), liealg.random_skew(rng)
        R = liealg.random_rotation(rng)
        lhs = liealg.pairing(liealg.conjugate(R, X), liealg.conjugate(R, Y))
        assert abs(lhs - liealg.pairing(X, Y)) < 1e-12


def test_project_block_support(rng):
    X = 0.8 * E12
    assert np.array_equal(liealg.project(X, SubalgebraTag.W0), X)
    assert not np.any(liealg.project(X, SubalgebraTag.H0))
    assert not np.any(liealg.project(X, SubalgebraTag.COMPLEMENT))
    Y = np.zeros((5, 5))
    Y[2:, 2:] = liealg.random_skew(rng)[2:, 2:]
    assert np.array_equal(liealg.project(Y, SubalgebraTag.H0), Y)


def test_projections_complete_and_orthogonal(rng):
    X = liealg.random_skew(rng)
    parts = [liealg.project(X, t) for t in TAGS]
    assert np.max(np.abs(sum(parts) - X)) < 1e-14
    for i, P in enumerate(parts):
        assert np.array_equal(liealg.project(P, TAGS[i]), P)
        for j, Q in enumerate(parts):
            if i != j:
                assert not np.any(liealg.project(P, TAGS[j]))
                assert liealg.pairing(P, Q) == 0.0


def test_embed_complement_definition():
    assert not np.any(liealg.embed_complement(np.zeros(3), np.zeros(3)))
    M = liealg.embed_complement([1.0, 0, 0], np.zeros(3))
    expected = np.zeros((5, 5))
    expected[2, 0], expected[0, 2] = 1.0, -1.0
    assert np.array_equal(M, expected)


def test_embed_complement_equivariant(rng):
    v, w = rng.normal(size=3), rng.normal(size=3)
    for _ in range(20):
        R = liealg.random_rotation(rng, 3)
        g = np.eye(5)
        g[2:, 2:] = R
        lhs = liealg.conjugate(g, liealg.embed_complement(v, w))
        rhs = liealg.embed_complement(R @ v, R @ w)
        assert np.max(np.abs(lhs - rhs)) < 1e-12
    assert np.allclose(liealg.complement_coordinates(liealg.embed_complement(v, w)),
                       np.array([v, w]))


def test_exp_cases(rng):
    assert np.array_equal(liealg.exp_so5(np.zeros((5, 5))), np.eye(5))
    th = 0.7
    R = liealg.exp_so5(th * E12)
    assert np.allclose(R[:2, :2], [[np.cos(th), np.sin(th)], [-np.sin(th), np.cos(th)]],
                       atol=1e-15)
    assert np.allclose(R[2:, 2:], np.eye(3))
    for _ in range(20):
        X = liealg.random_skew(rng)
        X *= rng.uniform(0, 5) / np.linalg.norm(X)
        assert np.max(np.abs(liealg.exp_so5(X) @ liealg.exp_so5(-X) - np.eye(5))) < 1e-12
        Y = X * 10 / np.linalg.norm(X)
        liealg.check_rotation(liealg.exp_so5(Y), tol=1e-10)


def test_reorthonormalize_repairs_drift(rng):
    R = np.eye(5)
    for _ in range(200):
        R = R @ liealg.exp_so5(0.1 * liealg.random_skew(rng))
        R = R + 1e-9 * rng.normal(size=(5, 5))
    liealg.check_rotation(liealg.reorthonormalize(R))


def test_invariant_checks():
    with pytest.raises(InvariantViolation, match="skewness"):
        liealg.check_skew(np.eye(5))
    with pytest.raises(InvariantViolation, match="determinant"):
        liealg.check_rotation(np.diag([1, 1, 1, 1, -1.0]))


def test_fundamental_field(rng):
    q = rng.normal(size=10)
    q /= np.linalg.norm(q)
    assert not np.any(liealg.fundamental_field(np.zeros((5, 5)), q))
    X = liealg.random_skew(rng)
    z = liealg.fundamental_field(X, q)
    assert abs(z @ q) < 1e-14
    errs = []
    for t in (1e-3, 5e-4):
        fd = (liealg.act(liealg.exp_so5(t * X), q) - q) / t
        errs.append(np.linalg.norm(fd - z))
    assert errs[1] / errs[0] == pytest.approx(0.5, abs=0.01)
