"""Empirical envelope scans for the exponent tail bounds.

The scans measure, over log-spaced shells of radius r and sampled directions,
the ratios of Re/Im of the exponent against the block anisotropy gauge

    ratio_F = F(r x) / sum_i ||(r x)_i||^alpha_i,

and report the realized envelope constants: a lower constant K2 for ratio_F, and
upper envelopes K1, K3 after discounting the r^(eps/2) slack that absorbs the
log corrections of nontrivial Jordan blocks.  The resolvent scan does the same
for Re(1/(1 + psi)) against the reciprocal gauge.  Constants are empirical
envelopes over the scanned grid, not proofs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ModelNotStrict
from .models import resolvent_re
from .sampling import sphere_points, substream
from .spectral import anisotropy_norm

DEFAULT_R_GRID = (10.0, 1e6, 40)
DEFAULT_SPHERE_SAMPLES = 512
DEFAULT_EPSILON = 0.2


def default_r_grid(r_min=None, r_max=None, points=None):
    lo, hi, n = DEFAULT_R_GRID
    lo = lo if r_min is None else r_min
    hi = hi if r_max is None else r_max
    n = n if points is None else points
    return np.logspace(np.log10(lo), np.log10(hi), int(n))


@dataclass
class EnvelopeReport:
    epsilon: float
    tau: float
    r_grid: list[float]
    inf_ratio_F: list[float]
    sup_ratio_F: list[float]
    sup_ratio_G: list[float]
    K1: float
    K2: float
    K3: float
    passed: bool
    sphere_samples: int
    seed: int
    # diagnostic: upper ratio divided by the top block's log envelope
    sup_ratio_F_log_discounted: list[float] = field(default_factory=list)

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "tau": self.tau,
            "r_grid": self.r_grid,
            "inf_ratio_F": self.inf_ratio_F,
            "sup_ratio_F": self.sup_ratio_F,
            "sup_ratio_G": self.sup_ratio_G,
            "K1": self.K1,
            "K2": self.K2,
            "K3": self.K3,
            "pass": self.passed,
            "sphere_samples": self.sphere_samples,
            "seed": self.seed,
            "sup_ratio_F_log_discounted": self.sup_ratio_F_log_discounted,
        }

    def rows(self):
        header = ["r", "inf_ratio_F", "sup_ratio_F", "sup_ratio_G"]
        data = zip(self.r_grid, self.inf_ratio_F, self.sup_ratio_F, self.sup_ratio_G)
        return header, [list(row) for row in data]


@dataclass
class ResolventReport:
    epsilon: float
    tau: float
    r_grid: list[float]
    inf_resolvent_ratio: list[float]
    sup_resolvent_ratio: list[float]
    K: float
    passed: bool
    sphere_samples: int
    seed: int

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "tau": self.tau,
            "r_grid": self.r_grid,
            "inf_resolvent_ratio": self.inf_resolvent_ratio,
            "sup_resolvent_ratio": self.sup_resolvent_ratio,
            "K": self.K,
            "pass": self.passed,
            "sphere_samples": self.sphere_samples,
            "seed": self.seed,
        }

    def rows(self):
        header = ["r", "inf_resolvent_ratio", "sup_resolvent_ratio"]
        data = zip(self.r_grid, self.inf_resolvent_ratio, self.sup_resolvent_ratio)
        return header, [list(row) for row in data]


def _require_strict_full(model):
    diag = model.validate()
    if not diag.strict:
        raise ModelNotStrict("envelope scans require a strict symmetric model")
    if not diag.full:
        raise ModelNotStrict("envelope scans require a full model")
    return diag


def _shell_stats(model, dec, r_grid, sphere_samples, seed, label):
    """Per-shell F/G/anisotropy samples; directions drawn per shell substream."""
    stats = []
    for idx, r in enumerate(r_grid):
        rng = substream(seed, label, idx)
        dirs = sphere_points(dec.d, sphere_samples, rng)
        xi = r * dirs
        vals = model.psi(xi)
        gauge = anisotropy_norm(dec, xi)
        stats.append((np.real(vals), np.imag(vals), gauge))
    return stats


def envelope_scan(
    model,
    dec=None,
    epsilon=DEFAULT_EPSILON,
    r_grid=None,
    sphere_samples=DEFAULT_SPHERE_SAMPLES,
    seed=0,
):
    """Scan the two-sided exponent envelope over log-spaced shells.

    Realized constants: K2 as the scan infimum of ratio_F, K1 and K3 as the
    suprema of the r^(eps/2)-discounted upper ratios.  pass requires K2 > 0
    with all statistics finite; tau is the smallest scanned radius.
    """
    _require_strict_full(model)
    dec = dec if dec is not None else model.decomposition
    r_grid = default_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    if r_grid.min() <= 1.0:
        raise ValueError("envelope scans need radii above 1")

    inf_F, sup_F, sup_G, discounted = [], [], [], []
    top_block = dec.blocks[-1]
    log_power = top_block.alpha * (top_block.q - 1)
    for re, im, gauge in _shell_stats(
        model, dec, r_grid, sphere_samples, seed, "envelope"
    ):
        ratio_F = re / gauge
        ratio_G = np.abs(im) / gauge
        inf_F.append(float(ratio_F.min()))
        sup_F.append(float(ratio_F.max()))
        sup_G.append(float(ratio_G.max()))
    for r, sF in zip(r_grid, sup_F):
        denom = max(np.log(r), 1.0) ** log_power
        discounted.append(float(sF / denom))

    slack = r_grid ** (epsilon / 2.0)
    K2 = float(np.min(inf_F))
    K1 = float(np.max(np.asarray(sup_F) / slack))
    K3 = float(np.max(np.asarray(sup_G) / slack))
    finite = all(np.isfinite([K1, K2, K3]))
    passed = bool(finite and K2 > 0.0)
    return EnvelopeReport(
        epsilon=float(epsilon),
        tau=float(r_grid.min()),
        r_grid=[float(r) for r in r_grid],
        inf_ratio_F=inf_F,
        sup_ratio_F=sup_F,
        sup_ratio_G=sup_G,
        K1=K1,
        K2=K2,
        K3=K3,
        passed=passed,
        sphere_samples=int(sphere_samples),
        seed=int(seed),
        sup_ratio_F_log_discounted=discounted,
    )


def resolvent_scan(
    model,
    dec=None,
    epsilon=DEFAULT_EPSILON,
    r_grid=None,
    sphere_samples=DEFAULT_SPHERE_SAMPLES,
    seed=0,
):
    """Scan Re(1/(1+psi)) against the reciprocal anisotropy gauge.

    Per shell the statistic is Re(1/(1+psi(xi))) * gauge(xi); the single
    realized constant K covers the upper envelope directly and the lower one
    after the r^eps discount.
    """
    _require_strict_full(model)
    dec = dec if dec is not None else model.decomposition
    r_grid = default_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    if r_grid.min() <= 1.0:
        raise ValueError("resolvent scans need radii above 1")

    inf_ratio, sup_ratio = [], []
    for idx, r in enumerate(r_grid):
        rng = substream(seed, "resolvent", idx)
        dirs = sphere_points(dec.d, sphere_samples, rng)
        xi = r * dirs
        stat = resolvent_re(model, xi, 1.0) * anisotropy_norm(dec, xi)
        inf_ratio.append(float(stat.min()))
        sup_ratio.append(float(stat.max()))

    slack = r_grid ** (-float(epsilon))
    K_upper = float(np.max(sup_ratio))
    K_lower = float(np.max(slack / np.asarray(inf_ratio)))
    K = max(K_upper, K_lower)
    passed = bool(np.min(inf_ratio) > 0.0 and np.isfinite(K))
    return ResolventReport(
        epsilon=float(epsilon),
        tau=float(r_grid.min()),
        r_grid=[float(r) for r in r_grid],
        inf_resolvent_ratio=inf_ratio,
        sup_resolvent_ratio=sup_ratio,
        K=K,
        passed=passed,
        sphere_samples=int(sphere_samples),
        seed=int(seed),
    )
