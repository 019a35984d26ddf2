import numpy as np
import pytest

from stratmech.bundle import base_point
from stratmech.errors import InvariantViolation, StepTooLarge
from stratmech.dynamics import magnetic


def unit_tangent(c, w):
    v = np.cross(c, w)
    return v / np.linalg.norm(v)


C0 = np.array([0.3, 0.0, 0.4])
V0 = np.array([0.0, 1.0, 0.0])


def test_zero_charge_is_geodesic():
    tr = magnetic.lorentz_flow(C0, V0, 0.0, 2.0)
    assert np.max(np.abs(tr.diagnostics["kappa_g"])) < 1e-6
    # great circle: stays in the plane through the origin spanned by c0, v0
    n = np.cross(C0, V0)
    assert np.max(np.abs(tr.diagnostics["unfolded"] @ n)) < 1e-10


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_lorentz_curvature_and_speed(s):
    tr = magnetic.lorentz_flow(C0, V0, s, 5.0)
    k = tr.diagnostics["kappa_g"]
    assert np.max(np.abs(np.abs(k) - 2 * s)) < 1e-4
    assert np.ptp(tr.diagnostics["speed"]) < 1e-10


def test_curvature_scales_with_speed():
    tr = magnetic.lorentz_flow(C0, 0.5 * V0, 1.0, 4.0)
    assert np.max(np.abs(np.abs(tr.diagnostics["kappa_g"]) - 4.0)) < 1e-4


def test_lorentz_closed_circle():
    # radius of the small circle with curvature k on S^2(R): R / sqrt(1 + k^2 R^2)
    k, R = 2.0, 0.5
    period = 2 * np.pi * R / np.sqrt(1 + (k * R) ** 2)
    tr = magnetic.lorentz_flow(C0, V0, 1.0, 3.0)
    j = int(round(period / 1e-3))
    P = tr.diagnostics["unfolded"]
    assert np.linalg.norm(P[j] - P[0]) < 1e-3
    assert np.linalg.norm(P[j // 2] - P[0]) > 0.1


def crossing_run(s):
    c = np.array([0.48, 0.0, 0.14])
    v = -unit_tangent(c, [0, 1.0, 0])
    return magnetic.lorentz_flow(c, v, s, 10.0)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_fold_snell(s):
    tr = crossing_run(s)
    crossings = magnetic.equator_crossings(tr)
    assert len(crossings) >= 2
    for c in crossings:
        assert abs(c["incidence"] - c["reflection"]) < 1e-4
        assert c["incidence"] > 0.1
    # folded path is continuous: consecutive samples are one step apart
    folded = np.array([b.vector() for b, _ in tr.states])
    steps = np.linalg.norm(np.diff(folded, axis=0), axis=1)
    assert steps.max() < 1.01e-3
    assert min(b.z for b, _ in tr.states) >= 0


def test_fold_matches_unfolded_circle():
    tr = crossing_run(1.0)
    P = tr.diagnostics["unfolded"]
    folded = np.array([b.vector() for b, _ in tr.states])
    expected = P.copy()
    expected[:, 2] = np.abs(expected[:, 2])
    assert np.array_equal(folded, expected)


def test_wong_matches_lorentz():
    a = magnetic.lorentz_flow(C0, V0, 1.0, 2.0)
    b = magnetic.wong_flow(C0, V0, 1.0, 2.0)
    A = np.array([p.vector() for p, _ in a.states])
    B = np.array([p.vector() for p, _ in b.states])
    assert np.max(np.abs(A - B)) < 1e-10
    assert np.ptp(b.diagnostics["charge"]) < 1e-14
    g = magnetic.wong_flow(C0, V0, 0.0, 1.0)
    assert np.max(np.abs(g.diagnostics["kappa_g"])) < 1e-6


def test_rk4_order():
    def run(h):
        c, v = C0, V0
        for _ in range(int(round(1 / h))):
            c, v = magnetic.magnetic_step(c, v, 1.0, h)
        return c

    y = [run(h) for h in (0.02, 0.01, 0.005, 0.0025)]
    d = [np.linalg.norm(y[i] - y[i + 1]) for i in range(3)]
    assert 16 * 0.9 <= d[1] / d[2] <= 16 * 1.1


def test_guards():
    with pytest.raises(StepTooLarge):
        magnetic.lorentz_flow(C0, V0, 1.0, 1.0, h=0.05)
    with pytest.raises(InvariantViolation, match="tangency"):
        magnetic.lorentz_flow(C0, [1.0, 0, 0], 1.0, 1.0)
    with pytest.raises(InvariantViolation, match="radius"):
        magnetic.lorentz_flow([0.5, 0.1, 0], V0, 1.0, 1.0)
    # a folded base point starts from its unfolded position
    b = base_point([0.3, 0.0, -0.4])
    tr = magnetic.lorentz_flow(b, V0, 1.0, 0.01)
    assert tr.diagnostics["unfolded"][0][2] == -0.4
