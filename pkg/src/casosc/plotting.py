"""Figure rendering for sweep output.

Thermodynamic sweeps get a two-panel figure (F and U on top, S below,
negative-entropy intervals shaded); dipole sweeps get a log-log plot of
|F| against separation.  Rendering is headless and file-only.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)


def render_thermo_plot(curve, path: str, log_t: bool = True) -> None:
    """Write an F/U/S-versus-T figure for a ThermoCurve."""
    ts = [row.T for row in curve.rows]
    fig, (ax_energy, ax_entropy) = plt.subplots(
        2, 1, sharex=True, figsize=(6.4, 6.0), constrained_layout=True)
    ax_energy.plot(ts, [row.F for row in curve.rows], "o-", ms=3, label="F")
    ax_energy.plot(ts, [row.U for row in curve.rows], "s--", ms=3, label="U")
    ax_energy.axhline(0.0, color="0.6", lw=0.8)
    ax_energy.set_ylabel("interaction energy")
    ax_energy.legend(frameon=False)
    ax_entropy.plot(ts, [row.S for row in curve.rows], "o-", ms=3, color="C3")
    ax_entropy.axhline(0.0, color="0.6", lw=0.8)
    for interval in curve.intervals:
        ax_entropy.axvspan(interval.t_low, interval.t_high, color="C3", alpha=0.15)
    ax_entropy.set_xlabel("T")
    ax_entropy.set_ylabel("S")
    if log_t:
        ax_entropy.set_xscale("log")
    ax_energy.set_title(f"{curve.model_descriptor['kind']} interaction thermodynamics")
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_dipole_plot(rs, fs, temperature: float, path: str) -> None:
    """Write a log-log |F(r)| figure for a dipole separation sweep."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2), constrained_layout=True)
    ax.loglog(rs, [abs(f) for f in fs], "o-", ms=3)
    ax.set_xlabel("r")
    ax.set_ylabel("|F|")
    ax.set_title(f"dipole pair free energy, T = {temperature:g}")
    fig.savefig(path, dpi=150)
    plt.close(fig)
