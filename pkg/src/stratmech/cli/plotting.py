"""Static SVG plots of trajectory files."""

from pathlib import Path

import matplotlib

matplotlib.use("svg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..bundle import RADIUS  # noqa: E402
from .io import atomic_write  # noqa: E402

# Fixed ids and no timestamp, so identical data gives identical files.
matplotlib.rcParams["svg.hashsalt"] = "strat-mech"
matplotlib.rcParams["svg.fonttype"] = "none"
_META = {"Date": None, "Creator": "strat-mech"}


def _save(fig, path):
    from io import StringIO

    buf = StringIO()
    fig.savefig(buf, format="svg", metadata=_META)
    plt.close(fig)
    atomic_write(path, buf.getvalue())
    return Path(path)


def _curve(ax, x, y, **kw):
    """Polyline, or a single dot when the trajectory does not move."""
    x, y = np.asarray(x), np.asarray(y)
    if len(x) == 1 or (np.ptp(x) == 0 and np.ptp(y) == 0):
        ax.plot(x[:1], y[:1], "o", markersize=4, **kw)
    else:
        ax.plot(x, y, "-", linewidth=1.0, **kw)


def _disk(radius, title):
    fig, ax = plt.subplots(figsize=(4, 4))
    th = np.linspace(0, 2 * np.pi, 361)
    ax.plot(radius * np.cos(th), radius * np.sin(th), color="0.6", linewidth=0.8)
    ax.set_aspect("equal")
    lim = 1.08 * radius
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_title(title)
    return fig, ax


def base_plot(x, y, path):
    """Base curve on the (x, y) projection of the hemisphere; the rim is the equator."""
    fig, ax = _disk(RADIUS, "base")
    _curve(ax, x, y, color="C0")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    return _save(fig, path)


def spin_plot(x1, x2, s, path):
    fig, ax = _disk(s, "spin")
    _curve(ax, x1, x2, color="C1")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    return _save(fig, path)


def energy_plot(t, energy, path):
    fig, ax = plt.subplots(figsize=(5, 3))
    t, energy = np.asarray(t), np.asarray(energy)
    if len(t) == 1:
        ax.plot(t, energy, "o", markersize=4, color="C2")
    else:
        ax.plot(t, energy, "-", linewidth=1.0, color="C2")
    scale = max(1.0, float(np.max(np.abs(energy))))
    if np.ptp(energy) < 1e-9 * scale:
        # Round-off only: keep the line flat instead of zooming into it.
        mid = float(np.mean(energy))
        ax.set_ylim(mid - 0.05 * scale, mid + 0.05 * scale)
    ax.ticklabel_format(useOffset=False)
    ax.set_xlabel("t")
    ax.set_ylabel("energy")
    ax.set_title("energy")
    fig.tight_layout()
    return _save(fig, path)
