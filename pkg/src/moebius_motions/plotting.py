"""Static SVG figures of disc trajectories."""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .geodesic_engine import GeodesicPath, HypocycloidFit, hypocycloid  # noqa: E402

SVG_SCHEMA = "moebius-motions/plot v1"
OVERLAY_TOL = 1e-3


def _finish(fig, dest) -> None:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    svg = buf.getvalue()
    # schema tag right after the XML declaration
    head, sep, rest = svg.partition("?>")
    svg = f"{head}{sep}\n<!-- {SVG_SCHEMA} -->{rest}" if sep else f"<!-- {SVG_SCHEMA} -->\n{svg}"
    with open(dest, "w") as fh:
        fh.write(svg)


def _disc_axes():
    plt.rcParams["svg.hashsalt"] = "moebius-motions"
    fig, ax = plt.subplots(figsize=(5, 5))
    phi = np.linspace(0.0, 2.0 * np.pi, 721)
    ax.plot(np.cos(phi), np.sin(phi), color="black", lw=1.0, label="boundary")
    ax.set_aspect("equal")
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_xticks([])
    ax.set_yticks([])
    return fig, ax


def plot_path(path: GeodesicPath, dest, fit: HypocycloidFit | None = None, rho_min: float | None = None) -> None:
    """Disc trajectory, optional tangency circle and hypocycloid overlay."""
    fig, ax = _disc_axes()
    z = path.disc_points
    ax.plot(z.real, z.imag, color="tab:blue", lw=1.2, label="trajectory")
    if rho_min is not None:
        phi = np.linspace(0.0, 2.0 * np.pi, 361)
        ax.plot(rho_min * np.cos(phi), rho_min * np.sin(phi), ls="--", color="tab:gray", lw=0.8,
                label=f"rho_min = {rho_min:.6f}")
    if fit is not None and fit.max_deviation < OVERLAY_TOL:
        h = hypocycloid(fit.k, np.linspace(0.0, 2.0 * np.pi, 2001)) * np.exp(1j * fit.phase)
        ax.plot(h.real, h.imag, color="tab:red", lw=0.6, alpha=0.7, label=f"hypocycloid k={fit.k:.4f}")
    ax.legend(loc="lower left", fontsize=7)
    _finish(fig, dest)


def plot_motion(alpha: np.ndarray, dest) -> None:
    """Trajectory of the transvection parameter of a motion."""
    fig, ax = _disc_axes()
    ax.plot(alpha.real, alpha.imag, color="tab:blue", lw=1.2, label="alpha(t)")
    ax.legend(loc="lower left", fontsize=7)
    _finish(fig, dest)
