"""strat-mech: classify, simulate, compare and plot from a config file.

Exit codes: 0 success, 2 input validation, 3 integrator failure, 4 comparison failure.
"""

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .. import liealg
from ..bundle import frame_point, hopf_jacobian, hopf_vector
from ..errors import IntegratorError, StratMechError
from ..momenta import PhasePoint, mu_closed_form
from ..strata import (ConfigStratum, classify_config, classify_phase, orbit_map, span_dimension,
                      spin_class, stratum_table)
from ..dynamics import compare, full, magnetic, reduced
from ..dynamics.state import ReducedState
from . import config as cfg
from . import io, plotting

log = logging.getLogger("stratmech")

EXIT_OK, EXIT_INPUT, EXIT_INTEGRATOR, EXIT_COMPARE = 0, 2, 3, 4
LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


class ValidationFailure(Exception):
    """Emitted rows break a state invariant (--validate)."""


def _setup_logging():
    level = os.environ.get("STRAT_MECH_LOG", "quiet")
    if level not in LOG_LEVELS:
        raise cfg.ConfigError(f"STRAT_MECH_LOG must be one of quiet, info, debug; got {level!r}")
    log.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.addHandler(handler)
    log.setLevel(LOG_LEVELS[level])
    log.propagate = False


# classify ------------------------------------------------------------------

def cmd_classify(conf, out_dir, validate=False):
    rows = []
    for k, (q, p) in enumerate(conf.points):
        s = PhasePoint(q, p)  # raises on unit-norm / cotangency
        ps = classify_phase(s)
        rows.append({
            "index": k,
            "config_stratum": classify_config(s.q).value,
            "phase_stratum": ps.tag.value,
            "span_dimension": span_dimension(s.q, s.p),
            "base": [io._json_value(v) for v in orbit_map(s.q)],
        })
    table = stratum_table()
    lines = ["point  config        phase   span"]
    for r in rows:
        lines.append(f"{r['index']:<6} {r['config_stratum']:<13} {r['phase_stratum']:<7} "
                     f"{r['span_dimension']}")
    lines.append("")
    lines.append("stratum     isotropy  dim  empty  flow-invariant  model")
    for t in table:
        dim = "-" if t["dimension"] is None else str(t["dimension"])
        lines.append(f"{t['tag']:<11} {t['isotropy']:<9} {dim:<4} {str(t['empty']):<6} "
                     f"{str(t['flow_invariant']):<15} {t['model']}")
    text = "\n".join(lines) + "\n"
    io.atomic_write(Path(out_dir) / "classify.json", io.json_text({"points": rows, "table": table}))
    io.atomic_write(Path(out_dir) / "classify.txt", text)
    sys.stdout.write(text)
    return EXIT_OK


# simulate ------------------------------------------------------------------

def _initial_reduced(conf, rng):
    if conf.initial == "random":
        return reduced.random_reduced_state(rng, s=conf.s, stratum=conf.stratum)
    v = conf.values
    r = ReducedState(frame_point(v["q"]), v["p0"], spin_class(v["x"], conf.s))
    return reduced.canonicalize(r)


def _simulate_full(conf, rng):
    if conf.initial == "random":
        s0 = full.lift(reduced.random_reduced_state(rng, s=conf.s, stratum=conf.stratum))
    else:
        s0 = PhasePoint(conf.values["q"], conf.values["p"])
    times = reduced.sample_times(conf.t, conf.h)
    states = [s0]
    if conf.integrator == "exact":
        states += [full.geodesic_flow(s0, tk) for tk in times[1:]]
    else:
        for k in range(1, len(times)):
            try:
                states.append(full.rattle_step(states[-1], conf.h, conf.hamiltonian))
            except IntegratorError as exc:
                raise type(exc)(str(exc).split(" (t = ")[0], time=float(times[k])) from None
    columns = (["t"] + [f"q{i}" for i in range(10)] + [f"p{i}" for i in range(10)]
               + ["bx", "by", "bz", "energy", "momentum_norm", "stratum", "charge"])
    rows = []
    for tk, st in zip(times, states):
        mu = mu_closed_form(st.q, st.p)
        regular = classify_config(st.q) == ConfigStratum.REGULAR
        rows.append([tk, *st.q, *st.p, *orbit_map(st.q), full.energy(st, conf.hamiltonian),
                     np.sqrt(max(liealg.pairing(mu, mu), 0.0)), classify_phase(st).tag.value,
                     full.charge(st) if regular else float("nan")])
    return columns, rows


def _simulate_mcf(conf, rng):
    r0 = _initial_reduced(conf, rng)
    traj = reduced.mcf_flow(r0, conf.t, conf.h)
    columns = ["t", "a", "b", "alpha", "beta", "pa", "pb", "palpha", "pbeta", "x1", "x2", "x3",
               "bx", "by", "bz", "energy", "momentum_norm", "stratum", "charge", "pole_distance",
               "freq_s2", "freq_z2"]
    d = traj.diagnostics
    rows = []
    for k, (tk, st) in enumerate(zip(traj.times, traj.states)):
        x = st.spin.vector()
        fr = reduced.frequencies(st.frame.q, x)
        rows.append([tk, *st.frame.q, *st.p0, *x, *hopf_vector(st.frame.q), d["energy"][k],
                     d["momentum_norm"][k], d["stratum"][k], d["charge"][k], d["pole_distance"][k],
                     fr[-1], fr[0]])
    return columns, rows


def _simulate_magnetic(conf, rng):
    if conf.initial == "random":
        r0 = reduced.random_reduced_state(rng, s=conf.s, stratum="pole")
        c0 = hopf_vector(r0.frame.q)
        v0 = hopf_jacobian(r0.frame.q) @ r0.p0
        charge = -r0.spin.x3
    else:
        c0, v0 = conf.values["c"], conf.values["v"]
        charge = conf.values["charge" if conf.engine == "reduced-lorentz" else "z"]
    if conf.engine == "reduced-lorentz":
        traj = magnetic.lorentz_flow(c0, v0, charge, conf.t, conf.h)
    else:
        if abs(charge) > conf.s * (1 + 1e-12):
            raise cfg.ConfigError(f"Wong charge z = {charge!r} must lie in [-s, s]")
        traj = magnetic.wong_flow(c0, v0, charge, conf.t, conf.h)
    d = traj.diagnostics
    columns = ["t", "bx", "by", "bz", "vx", "vy", "vz", "ux", "uy", "uz", "energy",
               "momentum_norm", "stratum", "charge", "kappa_g"]
    rows = []
    for k, (tk, (b, v)) in enumerate(zip(traj.times, traj.states)):
        rows.append([tk, *b.vector(), *v, *d["unfolded"][k], d["energy"][k] + 0.5 * conf.s ** 2,
                     conf.s, d["stratum"][k], d["charge"][k], d["kappa_g"][k]])
    return columns, rows


SIMULATORS = {"full": _simulate_full, "reduced-mcf": _simulate_mcf,
              "reduced-lorentz": _simulate_magnetic, "wong": _simulate_magnetic}


def _check_rows(columns, rows, s):
    text = io.csv_text(columns, rows)
    data = {}
    parsed = [line.split(",") for line in text.split("\n")[1:] if line]
    for j, c in enumerate(columns):
        vals = [r[j] for r in parsed]
        data[c] = vals if c in io.TEXT_COLUMNS else np.array([float(v) for v in vals])
    problems = io.validate_rows(columns, data, s)
    if problems:
        for row, name, val in problems[:10]:
            log.error("row %d: %s invariant violated (%.3e)", row, name, val)
        raise ValidationFailure(f"{problems[0][1]} invariant violated in {len(problems)} row(s)")


def cmd_simulate(conf, out_dir, validate=False):
    rng = np.random.default_rng(conf.seed)
    log.info("simulate engine=%s t=%s h=%s seed=%d", conf.engine, conf.t, conf.h, conf.seed)
    columns, rows = SIMULATORS[conf.engine](conf, rng)
    if validate:
        _check_rows(columns, rows, conf.s)
    paths = io.write_table(out_dir, conf.name, columns, rows, conf.formats, engine=conf.engine,
                           s=conf.s, t=conf.t, h=conf.h, seed=conf.seed)
    for p in paths:
        log.info("wrote %s", p)
    return EXIT_OK


# compare -------------------------------------------------------------------

def cmd_compare(conf, out_dir, validate=False):
    tol = conf.tolerances
    rejected = 0
    if conf.initial == "explicit":
        v = conf.values
        r0 = reduced.canonicalize(ReducedState(frame_point(v["q"]), v["p0"],
                                               spin_class(v["x"], conf.s)))
        states = [r0]
    else:
        states, rejected = compare.seeded_states(conf.seed, conf.count, conf.s, conf.stratum,
                                                 conf.t, conf.h, conf.screen)
    results = []
    for k, r0 in enumerate(states):
        c = compare.compare_engines(r0, conf.t, conf.h, conf.h_reduced, tol)
        log.info("run %d: %s", k, c.summary())
        results.append(c)
    columns = ["index", "engine", "max_base_distance", "max_spin_distance",
               "max_energy_discrepancy", "verdict"]
    rows = [[k, c.engine, c.max_base, c.max_spin, c.max_energy, "PASS" if c.passed else "FAIL"]
            for k, c in enumerate(results)]
    passed = all(c.passed for c in results)
    verdict = "PASS" if passed else "FAIL"
    io.write_table(out_dir, "compare", columns, rows, ("csv", "json"), verdict=verdict,
                   rejected=rejected, tolerances=tol, t=conf.t, h=conf.h, h_reduced=conf.h_reduced,
                   seed=conf.seed, stratum=conf.stratum)
    worst = [max(c.max_base for c in results), max(c.max_spin for c in results),
             max(c.max_energy for c in results)]
    text = (f"{verdict}: {len(results)} run(s), {rejected} draw(s) screened out\n"
            f"max base distance      {io.fmt(worst[0])} (tol {io.fmt(tol['base'])})\n"
            f"max spin distance      {io.fmt(worst[1])} (tol {io.fmt(tol['spin'])})\n"
            f"max energy discrepancy {io.fmt(worst[2])} (tol {io.fmt(tol['energy'])})\n")
    io.atomic_write(Path(out_dir) / "compare.txt", text)
    sys.stdout.write(text)
    return EXIT_OK if passed else EXIT_COMPARE


# plot ----------------------------------------------------------------------

def cmd_plot(conf, out_dir, validate=False):
    try:
        columns, data = io.read_csv(conf.input)
    except (OSError, ValueError, IndexError) as exc:
        raise cfg.ConfigError(f"cannot read trajectory file {conf.input}: {exc}") from None
    need = {"t", "bx", "by", "energy"}
    if not need <= set(columns):
        raise cfg.ConfigError(f"trajectory file lacks columns {sorted(need - set(columns))}")
    s = float(data["momentum_norm"][0]) if "momentum_norm" in data else 1.0
    s = s if s > 0 else 1.0
    if validate:
        problems = io.validate_rows(columns, data, s if {"x1", "x2"} <= set(columns) else None)
        if problems:
            raise ValidationFailure(f"{problems[0][1]} invariant violated in {len(problems)} row(s)")
    out = Path(out_dir)
    plotting.base_plot(data["bx"], data["by"], out / f"{conf.prefix}_base.svg")
    if {"x1", "x2"} <= set(columns):
        plotting.spin_plot(data["x1"], data["x2"], s, out / f"{conf.prefix}_spin.svg")
    else:
        # Lorentz and Wong runs sit at a pole of the spin sphere.
        plotting.spin_plot([0.0], [0.0], s, out / f"{conf.prefix}_spin.svg")
    plotting.energy_plot(data["t"], data["energy"], out / f"{conf.prefix}_energy.svg")
    return EXIT_OK


COMMANDS = {
    "classify": (cfg.classify_config, cmd_classify),
    "simulate": (cfg.simulate_config, cmd_simulate),
    "compare": (cfg.compare_config, cmd_compare),
    "plot": (cfg.plot_config, cmd_plot),
}


def build_parser():
    ap = argparse.ArgumentParser(prog="strat-mech", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="INI file with a section per command")
    ap.add_argument("--out", default=".", help="output directory (default: current)")
    ap.add_argument("--seed", default=None, help="u64 seed, overrides the config value")
    ap.add_argument("--validate", action="store_true",
                    help="check every emitted row against the state invariants")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _setup_logging()
        cp = cfg.read(args.config)
        parse, run = COMMANDS[args.command]
        if args.command == "plot":
            conf = parse(cp, args.config)
        elif args.command in ("simulate", "compare"):
            conf = parse(cp, seed=None if args.seed is None else cfg.parse_seed(args.seed))
        else:
            conf = parse(cp)
        return run(conf, args.out, args.validate)
    except IntegratorError as exc:
        log.error("integrator failure: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRATOR
    except (cfg.ConfigError, ValidationFailure, StratMechError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
