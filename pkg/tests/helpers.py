"""Shared model builders and independent oracles for the test suite."""

import numpy as np

from semistable_lab import SemistableModel


def stable_like_atomic(alpha, c=2.0):
    """1-d atomic model with tail index alpha: atoms at +-1, scale c."""
    return SemistableModel(c=c, E=[[1.0 / alpha]], atoms=[([1.0], 1.0), ([-1.0], 1.0)])


def axis_atomic(diag, c=2.0):
    """Per-axis symmetric atoms for a diagonal exponent."""
    d = len(diag)
    atoms = []
    for i in range(d):
        e = [0.0] * d
        e[i] = 1.0
        atoms.append((list(e), 1.0))
        atoms.append(([-v for v in e], 1.0))
    return SemistableModel(c=c, E=np.diag(diag), atoms=atoms)


def jordan_atomic(a=0.75, c=2.0):
    """2-d model with a single Jordan block; the orbit of e2 spans the plane."""
    return SemistableModel(
        c=c, E=[[a, 1.0], [0.0, a]], atoms=[([0.0, 1.0], 1.0), ([0.0, -1.0], 1.0)]
    )


def rotation_atomic(a=1.0, b=2.0, c=2.0):
    """2-d model whose exponent has a complex pair a +- bi."""
    return SemistableModel(
        c=c, E=[[a, -b], [b, a]], atoms=[([1.0, 0.0], 1.0), ([-1.0, 0.0], 1.0)]
    )


def series_psi_1d(xi, c, alpha, k_lo=-40, k_hi=40):
    """Direct orbit-series oracle for the 1-d atoms +-1 model (real part).

    2 - 2 cos(z) is evaluated as 4 sin^2(z/2); the deep-orbit terms carry huge
    masses against tiny phases and the plain cosine form loses ~1e-8 there.
    """
    a = 1.0 / alpha
    total = 0.0
    for k in range(k_lo, k_hi + 1):
        y = c ** (k * a)
        total += c ** (-k) * 4.0 * np.sin(0.5 * y * xi) ** 2
    return total


def density_trapezoid_oracle(xi, alpha, beta, n_local=400_000, n_tail=480_000):
    """Brute-force trapezoid evaluation of the two-regime density exponent.

    Local piece via the substitution x = u^p (regularizes the origin), tail
    resolved to thousands of points per oscillation with the integral beyond
    the cutoff handled analytically (exact mean part plus the first two
    integration-by-parts oscillatory terms).
    """
    xi = float(xi)
    p = int(np.ceil(2.0 / (2.0 - beta))) + 2
    u = np.linspace(0.0, 1.0, n_local)
    f = np.zeros_like(u)
    pos = u > 0
    f[pos] = (
        2.0
        * np.sin(0.5 * xi * u[pos] ** p) ** 2
        * u[pos] ** (-p * (beta + 1.0))
        * p
        * u[pos] ** (p - 1.0)
    )
    local = np.trapezoid(f, u)

    a = alpha
    per = 2.0 * np.pi / xi
    X = 1.0 + 60.0 * per
    x = np.linspace(1.0, X, n_tail)
    tail_num = np.trapezoid(2.0 * np.sin(0.5 * xi * x) ** 2 * x ** (-a - 1.0), x)
    mean_tail = X ** (-a) / a
    osc_tail = (
        np.sin(xi * X) / xi * X ** (-a - 1.0)
        - (a + 1.0) / xi**2 * np.cos(xi * X) * X ** (-a - 2.0)
    )
    return 2.0 * (local + tail_num + mean_tail + osc_tail)


def random_known_exponent(rng):
    """Orthogonally conjugated block exponent with known (a_i, d_i, q_i)."""
    p = rng.integers(1, 4)
    a_vals = []
    while len(a_vals) < p:
        cand = rng.uniform(0.5, 2.5)
        if all(abs(cand - a) > 0.15 for a in a_vals):
            a_vals.append(cand)
    a_vals.sort()
    blocks, truth = [], []
    for a in a_vals:
        kind = rng.integers(0, 3)
        if kind == 0:
            m = int(rng.integers(1, 3))
            blocks.append(np.eye(m) * a)
            truth.append((a, m, 1))
        elif kind == 1:
            q = int(rng.integers(2, 4))
            blocks.append(np.eye(q) * a + np.diag(np.ones(q - 1), 1))
            truth.append((a, q, q))
        else:
            b = rng.uniform(0.3, 2.0)
            blocks.append(np.array([[a, -b], [b, a]]))
            truth.append((a, 2, 1))
    d = sum(t[1] for t in truth)
    D = np.zeros((d, d))
    pos = 0
    for B in blocks:
        k = B.shape[0]
        D[pos : pos + k, pos : pos + k] = B
        pos += k
    Q, _ = np.linalg.qr(rng.normal(size=(d, d)))
    return Q @ D @ Q.T, truth
