"""Acceptance criteria, one test each, at their stated tolerances and runtime bounds.

Every test prints a single PASS/FAIL line.  Run directly with
``python3 tests/test_acceptance.py`` for just the summary lines.
"""

import time

import numpy as np
import pytest

from stratmech import bundle, liealg, strata
from stratmech.bundle import frame_fields, frame_point
from stratmech.cli.main import main
from stratmech.dynamics import compare, full, kks, magnetic, reduced
from stratmech.momenta import PhasePoint, mu_full

RESULTS = {}
CLOCK = {}


@pytest.fixture(autouse=True)
def suite_clock():
    # the suite runtime counts from the first acceptance test, not from collection
    CLOCK.setdefault("start", time.perf_counter())


def report(n, name, ok, detail, elapsed, bound):
    ok = bool(ok) and elapsed < bound
    line = f"criterion {n:2d} {name:<28} {'PASS' if ok else 'FAIL'}  {detail}  ({elapsed:.2f} s < {bound:g} s)"
    RESULTS[n] = line
    print(line, flush=True)
    return ok


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def crit1():
    rng = np.random.default_rng(1)
    errs = []
    for _ in range(100):
        fp = frame_point(bundle.random_frame(rng))
        _, xi2, xi3 = frame_fields(fp)
        errs.append(abs(bundle.curvature_fd(fp, xi2, xi3) - 2.0))
    return max(errs)


def crit2():
    rng = np.random.default_rng(2)
    err = 0.0
    for _ in range(1000):
        fp = frame_point(bundle.random_frame(rng))
        X, Y = rng.normal(size=2)
        err = max(err, abs(bundle.inertia(fp, X, Y) - X * Y))
    return err


def crit3():
    rng = np.random.default_rng(3)
    det_err = eig_err = 0.0
    for _ in range(1000):
        s = rng.uniform(0.1, 2.0)
        r = s * np.sqrt(rng.uniform())
        th = rng.uniform(0, 2 * np.pi)
        x, y = r * np.cos(th), r * np.sin(th)
        z2 = s * s - x * x - y * y
        K = reduced.k_matrix(x, y, s)
        det_err = max(det_err, abs(np.linalg.det(K) - s ** 4 * z2 ** 2))
        ev = np.linalg.eigvalsh(K)
        eig_err = max(eig_err, np.max(np.abs(ev - sorted([s * s, s * s, z2, z2]))))
    return det_err, eig_err


def crit4():
    rng = np.random.default_rng(4)
    s = full.random_phase_point(rng)
    mu0 = mu_full(s)
    drift = max(np.max(np.abs(mu_full(full.geodesic_flow(s, t)) - mu0))
                for t in np.linspace(0, 100, 1001))
    equiv = 0.0
    for _ in range(100):
        g = liealg.random_rotation(rng)
        gs = PhasePoint(liealg.act(g, s.q), liealg.act(g, s.p))
        equiv = max(equiv, np.max(np.abs(mu_full(gs) - liealg.conjugate(g, mu_full(s)))))
    return drift, equiv


def crit5():
    c0, v0 = np.array([0.3, 0.0, 0.4]), np.array([0.0, 1.0, 0.0])
    kappa = snell = 0.0
    crossings = 0
    continuous = True
    for s in (0.5, 1.0, 2.0):
        tr = magnetic.lorentz_flow(c0, v0, s, 5.0)
        kappa = max(kappa, np.max(np.abs(np.abs(tr.diagnostics["kappa_g"]) - 2 * s)))
        c = np.array([0.48, 0.0, 0.14])
        v = -np.cross(c, [0.0, 1.0, 0.0])
        tr = magnetic.lorentz_flow(c, v / np.linalg.norm(v), s, 10.0)
        for x in magnetic.equator_crossings(tr):
            crossings += 1
            snell = max(snell, abs(x["incidence"] - x["reflection"]))
        folded = np.array([b.vector() for b, _ in tr.states])
        continuous &= bool(np.max(np.linalg.norm(np.diff(folded, axis=0), axis=1)) < 1.01e-3)
    return kappa, snell, crossings, continuous


def crit6():
    results, rejected = compare.run_suite(seed=0, count=20, t=1.0, h=1e-3)
    return results, rejected


def crit7():
    rng = np.random.default_rng(7)
    err = 0.0
    n = 0
    while n < 50:
        x = rng.normal(size=3)
        x /= np.linalg.norm(x)
        if np.hypot(x[0], x[1]) < 0.05:
            continue
        n += 1
        zeta = kks.spin_generator_field(x)
        for u in kks.tangent_basis(x):
            err = max(err, abs(kks.kks_reduced_form(x, zeta, u) - u[2]))
    return err


def crit8():
    rng = np.random.default_rng(8)
    invariant = True
    for _ in range(100):
        q = rng.normal(size=10)
        q /= np.linalg.norm(q)
        P = np.column_stack((q[:5], q[5:], rng.normal(size=5))) @ rng.normal(size=(3, 2))
        p = np.concatenate((P[:, 0], P[:, 1]))
        p -= (p @ q) * q
        s = PhasePoint(q, p)
        g = liealg.random_rotation(rng)
        invariant &= strata.classify_phase(PhasePoint(liealg.act(g, q), liealg.act(g, p))) \
            == strata.classify_phase(s)
    rows = {r["tag"]: r for r in strata.stratum_table()}
    table = (list(rows) == ["L0_trivial", "L1_SO2", "L2_SO3", "L3_SO4"]
             and rows["L3_SO4"]["empty"] and rows["L0_trivial"]["flow_invariant"] is True)
    x = rng.normal(size=3)
    sn = float(np.linalg.norm(x))
    lam = strata.spin_matrix(x)
    ref = strata.spin_from_momentum(lam, sn)
    spin = 0.0
    for _ in range(50):
        h = np.eye(5)
        h[2:, 2:] = liealg.random_rotation(rng, 3)
        c = strata.spin_from_momentum(liealg.conjugate(h, lam), sn)
        spin = max(spin, strata.spin_distance(c, ref))
    return invariant, table, spin


def crit9():
    rng = np.random.default_rng(9)
    _, grad = full.POTENTIALS["free"]
    s = full.random_phase_point(rng)
    exact = full.geodesic_flow(s, 1.0).q

    def rattle(h):
        q, p = s.q, s.p
        for _ in range(int(round(1.0 / h))):
            q, p = full.rattle_arrays(q, p, h, grad)
        return q

    e = [np.linalg.norm(rattle(h) - exact) for h in (0.02, 0.01, 0.005)]
    r_rattle = e[1] / e[2]
    r0 = reduced.random_reduced_state(np.random.default_rng(0))

    def rk4(h):
        q, p, x = r0.frame.q, r0.p0, r0.spin.vector()
        for _ in range(int(round(0.5 / h))):
            q, p, x = reduced.mcf_step(q, p, x, 1.0, h)
        return np.concatenate((q, p, x))

    y = [rk4(h) for h in (0.02, 0.01, 0.005, 0.0025)]
    d = [np.linalg.norm(y[i] - y[i + 1]) for i in range(3)]
    return r_rattle, d[1] / d[2]


def test_criterion_1_curvature():
    err, dt = timed(crit1)
    assert report(1, "curvature constant", err < 1e-5, f"max |dA - 2| = {err:.2e}", dt, 1)


def test_criterion_2_inertia():
    err, dt = timed(crit2)
    assert report(2, "inertia constancy", err < 1e-14, f"max err = {err:.2e}", dt, 1)


def test_criterion_3_determinant():
    (det_err, eig_err), dt = timed(crit3)
    assert report(3, "determinant identity", det_err < 1e-12 and eig_err < 1e-12,
                  f"det err = {det_err:.2e}, eig err = {eig_err:.2e}", dt, 1)


def test_criterion_4_momentum():
    (drift, equiv), dt = timed(crit4)
    assert report(4, "momentum conservation", drift < 1e-10 and equiv < 1e-12,
                  f"drift = {drift:.2e}, equivariance = {equiv:.2e}", dt, 5)


def test_criterion_5_lorentz():
    (kappa, snell, n, cont), dt = timed(crit5)
    ok = kappa < 1e-4 and snell < 1e-4 and n > 0 and cont
    assert report(5, "Lorentz curvature", ok,
                  f"kappa err = {kappa:.2e}, snell err = {snell:.2e} over {n} crossings", dt, 10)


def test_criterion_6_engines_agree():
    (results, rejected), dt = timed(crit6)
    base = max(r.max_base for r in results)
    spin = max(r.max_spin for r in results)
    energy = max(r.max_energy for r in results)
    ok = len(results) == 20 and base < 1e-4 and spin < 1e-4 and energy < 1e-8
    assert report(6, "reduced vs full flow", ok,
                  f"base = {base:.1e}, spin = {spin:.1e}, energy = {energy:.1e}, "
                  f"screened out {rejected}", dt, 60)


def test_criterion_7_kks():
    err, dt = timed(crit7)
    assert report(7, "reduced KKS form", err < 1e-5, f"max residual = {err:.2e}", dt, 5)


def test_criterion_8_strata():
    (inv, table, spin), dt = timed(crit8)
    assert report(8, "strata suite", inv and table and spin < 1e-8,
                  f"invariant = {inv}, table = {table}, spin err = {spin:.1e}", dt, 5)


def test_criterion_9_orders():
    (r2, r4), dt = timed(crit9)
    ok = abs(r2 / 4 - 1) <= 0.1 and abs(r4 / 16 - 1) <= 0.1
    assert report(9, "integrator orders", ok, f"RATTLE ratio = {r2:.3f}, RK4 ratio = {r4:.3f}", dt, 10)


def test_criterion_10_determinism(tmp_path):
    t0 = time.perf_counter()
    cfg = tmp_path / "run.ini"
    cfg.write_text("[simulate]\nengine = reduced-mcf\nt = 0.5\nformats = csv json\n\n[compare]\n")
    codes = [main(["simulate", "--config", str(cfg), "--out", str(tmp_path / d), "--seed", "3"])
             for d in ("a", "b")]
    same = all((tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
               for f in ("trajectory.csv", "trajectory.json"))
    code = main(["compare", "--config", str(cfg), "--out", str(tmp_path / "cmp")])
    dt = time.perf_counter() - t0
    total = time.perf_counter() - CLOCK["start"]
    ok = codes == [0, 0] and same and code == 0
    assert report(10, "determinism", ok and total < 90,
                  f"identical = {same}, compare exit = {code}, suite total = {total:.1f} s", dt, 90)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:randomly"]))
