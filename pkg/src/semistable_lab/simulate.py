"""Sample-path simulation and box-counting dimension estimates.

Paths of the atomic models are generated as compound-Poisson jumps from the
retained orbit (norm above a threshold delta), an exact Gaussian part, an
optional Brownian substitute matching the covariance of the discarded small
jumps, and the deterministic drift implied by the exponent's centering term.
Box counting over dyadic scales then estimates range and graph dimensions as a
third, fully independent check on the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ModelSpecError, ThresholdTooSmall
from .models import BrownianModel, SemistableModel
from .probes import SLOPE_RESIDUAL_TOL, ProbeEstimate, _loglog_fit
from .sampling import substream

GAUSSIAN_SUBSTITUTE = "gaussian_substitute"
DROP = "drop"

# orbit entries whose expected jump count over the horizon falls below this
# are dropped outright (astronomically rare events)
RATE_FLOOR = 1e-14
_MAX_SCAN = 10_000


@dataclass
class PathSample:
    times: np.ndarray
    values: np.ndarray
    jump_threshold: float
    small_jump_policy: str
    seed: int
    meta: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.values.shape[1]

    def rows(self):
        header = ["t"] + [f"x{i + 1}" for i in range(self.dim)]
        data = [
            [float(t)] + [float(v) for v in row]
            for t, row in zip(self.times, self.values)
        ]
        return header, data


def _retained_orbit(model: SemistableModel, delta: float):
    """Orbit points with norm >= delta plus small-jump moments below it.

    Returns (points, rates, small_cov, small_drift, discarded_rate).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    d = model.dim
    base = model.atom_xs
    wts = model.atom_ws
    if len(wts) == 0:
        return (
            np.zeros((0, d)),
            np.zeros(0),
            np.zeros((d, d)),
            np.zeros(d),
            0.0,
        )
    fwd = model._scale_map
    inv = model._scale_map_inv

    pts, rates = [], []
    small_cov = np.zeros((d, d))
    small_drift = np.zeros(d)

    def absorb_small(mass, sub):
        nonlocal small_cov, small_drift
        if not len(sub):
            return
        small_cov += np.einsum("a,ai,aj->ij", mass, sub, sub)
        if not model.symmetric:
            norms2 = np.sum(sub**2, axis=1)
            small_drift += mass @ (sub * (norms2 / (1.0 + norms2))[:, None])

    # upward: rates w c^-k shrink geometrically, stop at the rate floor
    total_w = float(wts.sum())
    k_cap = int(math.ceil(math.log(total_w / RATE_FLOOR) / math.log(model.c))) + 1
    cur = base.copy()
    for k in range(0, k_cap + 1):
        mass = wts * model.c ** (-k)
        keep = np.linalg.norm(cur, axis=1) >= delta
        pts.append(cur[keep])
        rates.append(mass[keep])
        absorb_small(mass[~keep], cur[~keep])
        cur = cur @ fwd.T
    discarded = total_w * model.c ** (-k_cap) / (model.c - 1.0)

    # downward: continue until everything is below delta, then accumulate the
    # small-jump second moment of the remaining geometric tail
    cur = base @ inv.T
    k = -1
    while True:
        norms = np.linalg.norm(cur, axis=1)
        mass = wts * model.c ** (-k)
        keep = norms >= delta
        if np.any(keep):
            pts.append(cur[keep])
            rates.append(mass[keep])
            absorb_small(mass[~keep], cur[~keep])
        else:
            break
        cur = cur @ inv.T
        k -= 1
        if -k > _MAX_SCAN:
            raise ThresholdTooSmall(
                f"orbit norms do not fall below delta={delta} within {_MAX_SCAN} scales"
            )
    # tail below the first all-small level, summed until negligible
    guard = 0
    while True:
        before = np.trace(small_cov)
        absorb_small(wts * model.c ** (-k), cur)
        added = np.trace(small_cov) - before
        if added < 1e-14 * max(np.trace(small_cov), 1e-300):
            break
        cur = cur @ inv.T
        k -= 1
        guard += 1
        if guard > _MAX_SCAN:
            raise ThresholdTooSmall("small-jump moment sum does not converge")

    points = np.concatenate(pts, axis=0) if pts else np.zeros((0, d))
    rate_arr = np.concatenate(rates) if rates else np.zeros(0)
    if model.symmetric:
        small_drift = np.zeros(d)
    return points, rate_arr, small_cov, small_drift, discarded


def _drift_vector(model: SemistableModel, points, rates, small_drift):
    """Deterministic drift making the simulated triplet match the exponent.

    The exponent's centering term i<xi,y>/(1+||y||^2) contributes
    -sum rates * y/(1+||y||^2) for retained jumps; substituted small jumps
    contribute their centered-mean correction; the explicit drift b enters
    with a minus sign (characteristic function exp(-t psi)).
    """
    if model.symmetric:
        return np.zeros(model.dim)
    v = -model.drift.copy()
    if len(rates):
        v -= rates @ (points / (1.0 + np.sum(points**2, axis=1))[:, None])
    v += small_drift
    return v


def _gaussian_root(cov):
    if not np.any(cov):
        return None
    vals, vecs = np.linalg.eigh(cov)
    vals = np.clip(vals, 0.0, None)
    return vecs * np.sqrt(vals)


def _prepare(model, delta, policy):
    if policy not in (GAUSSIAN_SUBSTITUTE, DROP):
        raise ValueError(f"unknown small-jump policy {policy!r}")
    if isinstance(model, BrownianModel):
        d = model.dim
        return (
            np.zeros((0, d)),
            np.zeros(0),
            model.sigma_matrix,
            np.zeros(d),
            0.0,
        )
    if not isinstance(model, SemistableModel):
        raise ModelSpecError(
            "simulation supports atomic scale-invariant and brownian models"
        )
    model.validate()
    points, rates, small_cov, small_drift, discarded = _retained_orbit(model, delta)
    cov = model.gaussian.copy()
    if policy == GAUSSIAN_SUBSTITUTE:
        cov = cov + small_cov
        drift = _drift_vector(model, points, rates, small_drift)
    else:
        drift = _drift_vector(model, points, rates, np.zeros(model.dim))
    return points, rates, cov, drift, discarded


def sample_path(
    model,
    T=1.0,
    n_steps=100_000,
    delta=1e-3,
    policy=GAUSSIAN_SUBSTITUTE,
    seed=0,
):
    """One path on a uniform grid over [0, T]; reproducible from the seed."""
    points, rates, cov, drift, discarded = _prepare(model, delta, policy)
    d = cov.shape[0]
    rng = substream(seed, "path")
    dt = T / n_steps
    times = np.linspace(0.0, T, n_steps + 1)
    values = np.zeros((n_steps + 1, d))

    root = _gaussian_root(cov)
    if root is not None:
        incr = rng.standard_normal((n_steps, d)) @ root.T * math.sqrt(dt)
        values[1:] = np.cumsum(incr, axis=0)
    values[1:] += drift * times[1:, None]

    total_rate = float(rates.sum()) if len(rates) else 0.0
    n_jumps = 0
    if total_rate > 0:
        n_jumps = int(rng.poisson(total_rate * T))
        if n_jumps:
            jump_times = rng.uniform(0.0, T, n_jumps)
            which = rng.choice(len(rates), size=n_jumps, p=rates / total_rate)
            # a jump at time s moves every grid point at or after s; the origin
            # itself never moves
            slots = np.maximum(np.searchsorted(times, jump_times, side="left"), 1)
            jump_acc = np.zeros((n_steps + 1, d))
            np.add.at(jump_acc, slots, points[which])
            values += np.cumsum(jump_acc, axis=0)

    base_cov = (
        model.gaussian if isinstance(model, SemistableModel) else cov
    )
    return PathSample(
        times=times,
        values=values,
        jump_threshold=float(delta),
        small_jump_policy=policy,
        seed=int(seed),
        meta={
            "n_jumps": n_jumps,
            "total_jump_rate": total_rate,
            "discarded_rate": float(discarded),
            "substituted_cov_trace": float(np.trace(cov - base_cov)),
            "drift": [float(v) for v in drift],
        },
    )


def sample_marginal(
    model,
    t=1.0,
    n_paths=10_000,
    delta=1e-3,
    policy=GAUSSIAN_SUBSTITUTE,
    seed=0,
    chunk=2000,
):
    """iid draws of the path value at time t (exact marginal, no grid error)."""
    points, rates, cov, drift, _ = _prepare(model, delta, policy)
    d = cov.shape[0]
    out = np.empty((n_paths, d))
    root = _gaussian_root(cov)
    total_rate = float(rates.sum()) if len(rates) else 0.0
    done = 0
    shard = 0
    while done < n_paths:
        m = min(chunk, n_paths - done)
        rng = substream(seed, "marginal", shard)
        block = np.tile(drift * t, (m, 1))
        if root is not None:
            block += rng.standard_normal((m, d)) @ root.T * math.sqrt(t)
        if total_rate > 0:
            counts = rng.poisson(total_rate * t, m)
            total = int(counts.sum())
            if total:
                which = rng.choice(len(rates), size=total, p=rates / total_rate)
                owner = np.repeat(np.arange(m), counts)
                np.add.at(block, owner, points[which])
        out[done : done + m] = block
        done += m
        shard += 1
    return out


def empirical_char_check(
    model,
    frequencies,
    t=1.0,
    n_paths=10_000,
    delta=1e-3,
    policy=GAUSSIAN_SUBSTITUTE,
    seed=0,
):
    """Compare the empirical characteristic function against exp(-t psi).

    Returns per-frequency dict rows with real/imag discrepancies in units of
    the empirical standard error.
    """
    samples = sample_marginal(model, t, n_paths, delta, policy, seed)
    freqs = np.atleast_2d(np.asarray(frequencies, dtype=float))
    if freqs.shape[0] == 1 and freqs.shape[1] != model.dim:
        freqs = freqs.reshape(-1, 1)
    model.validate()
    target = np.exp(-t * np.asarray(model.psi(freqs)))
    rows = []
    for xi, tgt in zip(freqs, np.atleast_1d(target)):
        phase = samples @ xi
        re, im = np.cos(phase), np.sin(phase)
        ecf = complex(re.mean(), im.mean())
        se_re = float(re.std(ddof=1) / math.sqrt(n_paths))
        se_im = float(im.std(ddof=1) / math.sqrt(n_paths))
        rows.append(
            {
                "xi": [float(v) for v in xi],
                "ecf_re": ecf.real,
                "ecf_im": ecf.imag,
                "target_re": float(np.real(tgt)),
                "target_im": float(np.imag(tgt)),
                "z_re": (ecf.real - float(np.real(tgt))) / se_re if se_re else 0.0,
                "z_im": (ecf.imag - float(np.imag(tgt))) / se_im if se_im else 0.0,
                "stderr_re": se_re,
                "stderr_im": se_im,
            }
        )
    return rows


# -- box counting ------------------------------------------------------------------


def _robust_extent(values):
    lo = np.quantile(values, 0.005, axis=0)
    hi = np.quantile(values, 0.995, axis=0)
    return float(np.max(hi - lo))


def _count_boxes(coords, eps):
    """Number of occupied eps-boxes for an (n, m) point cloud."""
    idx = np.floor(coords / eps).astype(np.int64)
    if idx.shape[1] == 1:
        return len(np.unique(idx[:, 0]))
    # pack up to three coordinates into one key; extents are bounded by scale choice
    key = idx[:, 0]
    for col in range(1, idx.shape[1]):
        key = key * np.int64(2**21) + (idx[:, col] + np.int64(2**20))
    return len(np.unique(key))


def _box_fit(coords, scale_grid, lo_dim, hi_dim, method, seed):
    # heavy-tailed excursions would overflow the integer box indices; clamping
    # to a widened robust window merges each stray point into a boundary box,
    # an O(1) perturbation of the counts
    lo_q = np.quantile(coords, 0.005, axis=0)
    hi_q = np.quantile(coords, 0.995, axis=0)
    pad = np.maximum(hi_q - lo_q, 1e-12)
    coords = np.clip(coords, lo_q - pad, hi_q + pad)
    counts = []
    for eps in scale_grid:
        counts.append(_count_boxes(coords, eps))
    eps_arr = np.asarray(scale_grid, dtype=float)
    # central fit window: drop the coarsest and finest quarter of the scales
    n = len(eps_arr)
    lo = max(0, n // 4)
    hi = max(lo + 3, n - max(1, n // 4))
    slope, stderr, rms = _loglog_fit(eps_arr, np.asarray(counts, dtype=float), lo, hi)
    raw = -slope
    value = float(min(max(raw, lo_dim), hi_dim))
    return ProbeEstimate(
        value=value,
        slope=slope,
        stderr=stderr,
        r_window=(float(eps_arr[lo]), float(eps_arr[hi - 1])),
        samples_per_point=coords.shape[0],
        method=method,
        seed=seed,
        clamped=raw < lo_dim or raw > hi_dim,
        slope_unstable=rms > SLOPE_RESIDUAL_TOL,
        grid=[float(e) for e in eps_arr],
        statistic=[float(c) for c in counts],
    )


def default_scale_grid(extent, n_steps, levels=9):
    """Dyadic scales from extent/8 down, floored above the sampling resolution."""
    finest = max(extent / 2 ** (levels + 2), 4.0 * extent / max(n_steps, 16))
    top = extent / 8.0
    n = max(4, int(math.floor(math.log2(max(top / finest, 2.0)))) + 1)
    return [top / 2**j for j in range(n)]


def box_dim_range(path: PathSample, scale_grid=None):
    """Box-counting dimension of the set of visited points."""
    values = path.values
    extent = max(_robust_extent(values), 1e-12)
    if scale_grid is None:
        scale_grid = default_scale_grid(extent, len(values))
    return _box_fit(
        values,
        scale_grid,
        0.0,
        float(values.shape[1]),
        "box-count range",
        path.seed,
    )


def box_dim_graph(path: PathSample, scale_grid=None):
    """Box-counting dimension of the space-time graph (t, X_t)."""
    T = float(path.times[-1]) or 1.0
    extent = max(_robust_extent(path.values), 1e-12)
    # normalize time so both axes share the box scale; dimension is invariant
    # under this per-axis affine change
    coords = np.column_stack([path.times / T * extent, path.values])
    if scale_grid is None:
        scale_grid = default_scale_grid(extent, len(coords))
    return _box_fit(
        coords,
        scale_grid,
        1.0,
        float(path.values.shape[1] + 1),
        "box-count graph",
        path.seed,
    )
