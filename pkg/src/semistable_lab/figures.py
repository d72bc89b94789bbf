"""Matplotlib rendering of scan and probe series to image files.

Figures are sidecars of the delimited output: whatever lands in a CSV can also
be rendered next to it.  All rendering uses the Agg backend and never opens a
window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_SAVE_KW = {"dpi": 130, "bbox_inches": "tight", "metadata": {"Software": None}}


def envelope_figure(report, path):
    """Ratio envelopes of the exponent scan on a log-log radius axis."""
    r = np.asarray(report.r_grid)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(r, report.inf_ratio_F, "o-", ms=3, label="inf ratio F")
    ax.loglog(r, report.sup_ratio_F, "s-", ms=3, label="sup ratio F")
    supG = np.asarray(report.sup_ratio_G)
    if np.any(supG > 0):
        ax.loglog(r, np.maximum(supG, 1e-300), "^-", ms=3, label="sup ratio G")
    ax.axhline(report.K2, color="gray", lw=0.8, ls="--", label=f"K2={report.K2:.3g}")
    ax.set_xlabel("shell radius r")
    ax.set_ylabel("exponent / anisotropy gauge")
    ax.legend(fontsize=8)
    ax.set_title("envelope scan")
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def resolvent_figure(report, path):
    r = np.asarray(report.r_grid)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(r, report.inf_resolvent_ratio, "o-", ms=3, label="inf ratio")
    ax.loglog(r, report.sup_resolvent_ratio, "s-", ms=3, label="sup ratio")
    ax.set_xlabel("shell radius r")
    ax.set_ylabel("Re(1/(1+psi)) * gauge")
    ax.legend(fontsize=8)
    ax.set_title("resolvent scan")
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def probe_figure(estimate, path, xlabel="r", ylabel="statistic"):
    """Log-log series with the fitted slope segment overlaid."""
    r = np.asarray(estimate.grid)
    y = np.asarray(estimate.statistic)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    pos = y > 0
    ax.loglog(r[pos], y[pos], "o", ms=3)
    lo, hi = estimate.r_window
    mask = (r >= lo) & (r <= hi) & pos
    if mask.sum() >= 2:
        anchor = float(np.median(np.log(y[mask]) - estimate.slope * np.log(r[mask])))
        xs = np.array([lo, hi])
        ax.loglog(xs, np.exp(anchor) * xs**estimate.slope, "r-", lw=1.2,
                  label=f"slope {estimate.slope:.3f} -> {estimate.value:.3f}")
        ax.legend(fontsize=8)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(estimate.method)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def recurrence_figure(probe, path):
    q = np.asarray(probe.q_values)
    vals = np.asarray(probe.integrals)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogx(q, vals, "o-", ms=3)
    ax.invert_xaxis()
    ax.set_xlabel("q")
    ax.set_ylabel("small-ball resolvent integral")
    ax.set_title(f"recurrence ladder: {probe.verdict}")
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def path_figure(sample, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if sample.dim == 1:
        ax.plot(sample.times, sample.values[:, 0], lw=0.4)
        ax.set_xlabel("t")
        ax.set_ylabel("X(t)")
    else:
        ax.plot(sample.values[:, 0], sample.values[:, 1], lw=0.3)
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
    ax.set_title(f"sample path (jumps: {sample.meta.get('n_jumps', 0)})")
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def psi_figure(r_values, per_direction, path):
    """Radial profiles of Re(psi) along tabulated directions."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name, vals in per_direction.items():
        vals = np.asarray(vals)
        pos = vals > 0
        ax.loglog(np.asarray(r_values)[pos], vals[pos], lw=1.0, label=name)
    ax.set_xlabel("|xi|")
    ax.set_ylabel("Re psi")
    ax.legend(fontsize=8)
    ax.set_title("exponent radial profile")
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
