"""INI-style experiment configuration: one section per subcommand, key = value."""

import configparser
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

ENGINES = ("full", "reduced-mcf", "reduced-lorentz", "wong")
U64 = 2 ** 64


class ConfigError(ValueError):
    """Malformed or inconsistent configuration; maps to exit code 2."""


def parse_vector(text, n=None, key="vector"):
    """Whitespace or comma separated decimals; float() round-trips exactly."""
    try:
        vals = [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None
    if n is not None and len(vals) != n:
        raise ConfigError(f"{key}: expected {n} numbers, got {len(vals)}")
    return np.array(vals)


def parse_seed(value):
    try:
        seed = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {value!r}") from None
    if not 0 <= seed < U64:
        raise ConfigError(f"seed out of range for u64: {seed}")
    return seed


def _positive(sec, key, default):
    try:
        val = sec.getfloat(key, fallback=default)
    except ValueError:
        raise ConfigError(f"{key}: not a number") from None
    if val is None or not np.isfinite(val) or val <= 0:
        raise ConfigError(f"{key} must be positive, got {val!r}")
    return val


def _formats(sec):
    fmts = tuple(f.strip() for f in sec.get("formats", "csv").replace(",", " ").split())
    bad = [f for f in fmts if f not in ("csv", "json")]
    if bad or not fmts:
        raise ConfigError(f"formats must be drawn from csv, json; got {fmts!r}")
    return fmts


@dataclass
class ClassifyConfig:
    points: list = field(default_factory=list)  # (q, p) pairs of raw arrays


@dataclass
class SimulateConfig:
    engine: str
    s: float
    t: float
    h: float
    initial: str
    stratum: str
    seed: int
    values: dict
    formats: tuple
    name: str
    hamiltonian: str
    integrator: str


@dataclass
class CompareConfig:
    s: float
    t: float
    h: float
    h_reduced: float
    seed: int
    count: int
    stratum: str
    initial: str
    values: dict
    tolerances: dict
    screen: bool


@dataclass
class PlotConfig:
    input: Path
    prefix: str


def read(path):
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return cp


def _section(cp, name):
    if not cp.has_section(name):
        raise ConfigError(f"config has no [{name}] section")
    return cp[name]


def _explicit(sec, keys):
    out = {}
    for key, n in keys.items():
        if key in sec:
            out[key] = parse_vector(sec[key], n, key)
    return out


def classify_config(cp):
    sec = _section(cp, "classify")
    points = []
    for lineno, line in enumerate(sec.get("points", "").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        q_text, _, p_text = line.partition("|")
        q = parse_vector(q_text, 10, f"points line {lineno} (q)")
        p = parse_vector(p_text, 10, f"points line {lineno} (p)") if p_text.strip() else np.zeros(10)
        points.append((q, p))
    return ClassifyConfig(points)


def simulate_config(cp, seed=None):
    sec = _section(cp, "simulate")
    engine = sec.get("engine", "reduced-mcf")
    if engine not in ENGINES:
        raise ConfigError(f"engine must be one of {', '.join(ENGINES)}; got {engine!r}")
    initial = sec.get("initial", "random")
    if initial not in ("random", "explicit"):
        raise ConfigError(f"initial must be random or explicit; got {initial!r}")
    stratum = sec.get("stratum", "pole" if engine in ("reduced-lorentz", "wong") else "regular")
    if stratum not in ("regular", "pole"):
        raise ConfigError(f"stratum must be regular or pole; got {stratum!r}")
    hamiltonian = sec.get("hamiltonian", "free")
    if hamiltonian not in ("free", "gram"):
        raise ConfigError(f"hamiltonian must be free or gram; got {hamiltonian!r}")
    integrator = sec.get("integrator", "exact" if hamiltonian == "free" else "rattle")
    if integrator not in ("exact", "rattle") or (integrator == "exact" and hamiltonian != "free"):
        raise ConfigError(f"integrator {integrator!r} is not available for hamiltonian {hamiltonian!r}")
    values = _explicit(sec, {"q": None, "p": None, "p0": 4, "x": 3, "c": 3, "v": 3})
    for key in ("charge", "z"):
        if key in sec:
            values[key] = parse_vector(sec[key], 1, key)[0]
    if initial == "explicit":
        need = {"full": ("q", "p"), "reduced-mcf": ("q", "p0", "x"),
                "reduced-lorentz": ("c", "v", "charge"), "wong": ("c", "v", "z")}[engine]
        missing = [k for k in need if k not in values]
        if missing:
            raise ConfigError(f"explicit {engine} initial condition needs {', '.join(missing)}")
    return SimulateConfig(
        engine=engine,
        s=_positive(sec, "s", 1.0),
        t=_positive(sec, "t", 1.0),
        h=_positive(sec, "h", 1e-3),
        initial=initial,
        stratum=stratum,
        seed=parse_seed(seed if seed is not None else sec.get("seed", "0")),
        values=values,
        formats=_formats(sec),
        name=sec.get("name", "trajectory"),
        hamiltonian=hamiltonian,
        integrator=integrator,
    )


def compare_config(cp, seed=None):
    sec = _section(cp, "compare")
    h = _positive(sec, "h", 1e-3)
    stratum = sec.get("stratum", "regular")
    if stratum not in ("regular", "pole"):
        raise ConfigError(f"stratum must be regular or pole; got {stratum!r}")
    initial = sec.get("initial", "random")
    if initial not in ("random", "explicit"):
        raise ConfigError(f"initial must be random or explicit; got {initial!r}")
    values = _explicit(sec, {"q": 4, "p0": 4, "x": 3})
    if initial == "explicit" and len(values) < 3:
        raise ConfigError("explicit comparison needs q, p0 and x")
    try:
        count = sec.getint("count", fallback=20)
        screen = sec.getboolean("screen", fallback=True)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if count < 1:
        raise ConfigError("count must be at least 1")
    return CompareConfig(
        s=_positive(sec, "s", 1.0),
        t=_positive(sec, "t", 1.0),
        h=h,
        h_reduced=_positive(sec, "h_reduced", h),
        seed=parse_seed(seed if seed is not None else sec.get("seed", "0")),
        count=count,
        stratum=stratum,
        initial=initial,
        values=values,
        tolerances={"base": _positive(sec, "tol_base", 1e-4),
                    "spin": _positive(sec, "tol_spin", 1e-4),
                    "energy": _positive(sec, "tol_energy", 1e-8)},
        screen=screen,
    )


def plot_config(cp, config_path):
    sec = _section(cp, "plot")
    if "input" not in sec:
        raise ConfigError("[plot] needs an input trajectory file")
    path = Path(sec["input"])
    if not path.is_absolute():
        path = Path(config_path).parent / path
    return PlotConfig(path, sec.get("prefix", path.stem))
