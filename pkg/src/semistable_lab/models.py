"""Exponent models: atomic discretely scale-invariant triplets and closed forms.

The atomic family places point masses on the orbit {c^{kE} x_a : k in Z} with
mass w_a c^{-k}, the minimal jump measure compatible with the discrete scaling
relation.  Closed-form models (isotropic stable, Brownian, a two-regime
density) are provided for oracles and for the probe suite.

Exponent convention: the characteristic function is exp(-t psi(xi)) with

    psi(xi) = i<xi,b> + (1/2)<xi,Sigma xi>
              + integral of (1 - e^{i<xi,x>} + i<xi,x>/(1+||x||^2)) d(jump measure),

so Re(psi) >= 0 everywhere and psi(0) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import (
    DimensionMismatch,
    ModelSpecError,
    NotValidated,
    ThresholdTooSmall,
)
from .spectral import SpectralDecomposition, anisotropy_norm, decompose, matrix_power

DEFAULT_TAIL_TOL = 1e-8
# Hard cap on orbit extension when hunting truncation bounds; hitting it means
# the model decays too slowly for the requested tolerance.
MAX_ORBIT_STEPS = 2000


@dataclass(frozen=True)
class Truncation:
    """Orbit truncation policy: fixed k-range or adaptive tail tolerance."""

    tail_tol: float | None = DEFAULT_TAIL_TOL
    k_min: int | None = None
    k_max: int | None = None

    def fixed(self) -> bool:
        return self.k_min is not None and self.k_max is not None

    def to_dict(self):
        if self.fixed():
            return {"k_min": self.k_min, "k_max": self.k_max}
        return {"tail_tol": self.tail_tol}


@dataclass
class ModelDiagnostics:
    full: bool
    integrable: bool
    strict: bool
    truncation_tail_bound: float
    gaussian_consistent: bool = True
    messages: list[str] = field(default_factory=list)

    def to_dict(self):
        return {
            "full": self.full,
            "integrable": self.integrable,
            "strict": self.strict,
            "truncation_tail_bound": self.truncation_tail_bound,
            "gaussian_consistent": self.gaussian_consistent,
            "messages": list(self.messages),
        }


def _as_batch(xi, d):
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0:
        if d != 1:
            raise DimensionMismatch(f"scalar frequency given for a {d}-dim model")
        return xi.reshape(1, 1), True
    if xi.ndim == 1:
        if d == 1 and xi.shape[0] != 1:
            # a 1-dim model may take a flat array of frequencies
            return xi.reshape(-1, 1), False
        if xi.shape[0] != d:
            raise DimensionMismatch(f"expected length-{d} vector, got {xi.shape}")
        return xi.reshape(1, d), True
    if xi.ndim == 2 and xi.shape[1] == d:
        return xi, False
    raise DimensionMismatch(f"expected (n, {d}) batch, got {xi.shape}")


class SemistableModel:
    """Strictly scale-invariant model with an atomic jump measure.

    Parameters
    ----------
    c : float
        Discrete scale, c > 1.
    E : array
        Exponent matrix; eigenvalue real parts must be >= 1/2.
    atoms : sequence of (x, w)
        Jump atoms on a fundamental scale cell with positive weights.
    gaussian : array, optional
        Symmetric nonnegative-definite covariance of the Gaussian part
        (supported on blocks with a = 1/2).
    drift : array, optional
    truncation : Truncation, optional
    symmetric : bool, optional
        If True the atom set must be closed under negation with equal weights
        and the drift must vanish; the exponent is then real.  If omitted it is
        detected from the atoms.
    """

    def __init__(
        self,
        c,
        E,
        atoms,
        gaussian=None,
        drift=None,
        truncation=None,
        symmetric=None,
        tol_cluster=1e-8,
    ):
        if c <= 1:
            raise ModelSpecError("scale c must exceed 1", field="c")
        self.c = float(c)
        self.E = np.asarray(E, dtype=float)
        self.decomposition: SpectralDecomposition = decompose(self.E, tol_cluster)
        self.dim = self.decomposition.d

        xs, ws = [], []
        for entry in atoms:
            x, w = entry
            x = np.asarray(x, dtype=float).reshape(-1)
            if x.shape[0] != self.dim:
                raise ModelSpecError(
                    f"atom has dimension {x.shape[0]}, model is {self.dim}-dim",
                    field="atoms",
                )
            if w <= 0:
                raise ModelSpecError("atom weights must be positive", field="atoms")
            if not np.any(x):
                raise ModelSpecError("atoms must be nonzero", field="atoms")
            xs.append(x)
            ws.append(float(w))
        self.atom_xs = np.array(xs) if xs else np.zeros((0, self.dim))
        self.atom_ws = np.array(ws)

        self.gaussian = (
            np.zeros((self.dim, self.dim))
            if gaussian is None
            else np.asarray(gaussian, dtype=float)
        )
        if self.gaussian.shape != (self.dim, self.dim):
            raise ModelSpecError("gaussian must be d x d", field="gaussian")
        if not np.allclose(self.gaussian, self.gaussian.T, atol=1e-12):
            raise ModelSpecError("gaussian must be symmetric", field="gaussian")
        if len(self.gaussian) and np.linalg.eigvalsh(self.gaussian).min() < -1e-10:
            raise ModelSpecError("gaussian must be nonnegative definite", field="gaussian")

        self.drift = (
            np.zeros(self.dim) if drift is None else np.asarray(drift, dtype=float)
        )
        if self.drift.shape != (self.dim,):
            raise ModelSpecError("drift must have length d", field="drift")

        self.truncation = truncation if truncation is not None else Truncation()

        pairing = self._pair_atoms()
        detected_symmetric = pairing is not None and not np.any(self.drift)
        if symmetric is None:
            self.symmetric = detected_symmetric
        else:
            self.symmetric = bool(symmetric)
            if self.symmetric and not detected_symmetric:
                raise ModelSpecError(
                    "symmetric=True requires atoms closed under negation with equal "
                    "weights and zero drift",
                    field="symmetric",
                )
        self._pair_reps = pairing
        self._scale_map = matrix_power(self.E, self.c)
        self._scale_map_inv = np.linalg.inv(self._scale_map)
        self.diagnostics: ModelDiagnostics | None = None

    # -- construction helpers -------------------------------------------------

    def _pair_atoms(self):
        """Indices of one representative per (x, -x) pair, or None if unpaired."""
        n = len(self.atom_ws)
        if n == 0:
            return []
        used = np.zeros(n, dtype=bool)
        reps = []
        scale = max(1.0, float(np.abs(self.atom_xs).max()))
        for i in range(n):
            if used[i]:
                continue
            match = None
            for j in range(n):
                if j == i or used[j]:
                    continue
                if (
                    np.allclose(self.atom_xs[i], -self.atom_xs[j], atol=1e-12 * scale)
                    and abs(self.atom_ws[i] - self.atom_ws[j]) <= 1e-12
                ):
                    match = j
                    break
            if match is None:
                return None
            used[i] = used[match] = True
            reps.append(i)
        return reps

    # -- orbit and truncation --------------------------------------------------

    def orbit(self, k_min, k_max, reps_only=False):
        """Orbit points c^{kE} x_a and masses w_a c^{-k} for k in [k_min, k_max]."""
        idx = (
            self._pair_reps
            if (reps_only and self._pair_reps is not None)
            else range(len(self.atom_ws))
        )
        base = self.atom_xs[list(idx)]
        wts = self.atom_ws[list(idx)]
        pts, masses, ks = [], [], []
        cur = base @ matrix_power(self.E, self.c**k_min).T
        for k in range(k_min, k_max + 1):
            pts.append(cur)
            masses.append(wts * self.c ** (-k))
            ks.append(np.full(len(wts), k))
            cur = cur @ self._scale_map.T
        return (
            np.concatenate(pts, axis=0),
            np.concatenate(masses),
            np.concatenate(ks),
        )

    def _lower_tail_s2(self, k_stop):
        """sum_a w_a c^-k ||c^{kE} x_a||^2 at k = k_stop, walked multiplicatively."""
        cur = self.atom_xs.copy()
        mass = self.atom_ws.copy()
        k = 0
        while k > k_stop:
            cur = cur @ self._scale_map_inv.T
            mass = mass * self.c
            k -= 1
        return float(np.sum(mass * np.sum(cur**2, axis=1)))

    def truncation_range(self, xi_max):
        """k-range and tail bound so dropped orbit terms perturb psi < tail_tol.

        Upper tail uses |term| <= (2 + ||xi|| / 2) per unit mass, lower tail the
        quadratic bound with the actual orbit norms, both summed geometrically.
        """
        if self.truncation.fixed():
            k_min, k_max = self.truncation.k_min, self.truncation.k_max
            return k_min, k_max, self._tail_bound(k_min, k_max, xi_max)
        tol = self.truncation.tail_tol or DEFAULT_TAIL_TOL
        xi_max = max(float(xi_max), 1e-12)
        w_total = float(self.atom_ws.sum()) if len(self.atom_ws) else 0.0
        if w_total == 0.0:
            return 0, 0, 0.0

        per_mass = 4.0 if self.symmetric else 2.0 + 0.5 * xi_max
        # sum_{k > K} c^-k = c^-K / (c - 1)
        k_max = 0
        while per_mass * w_total * self.c ** (-k_max) / (self.c - 1.0) > 0.5 * tol:
            k_max += 1
            if k_max > MAX_ORBIT_STEPS:
                raise ThresholdTooSmall("upper orbit tail does not reach tolerance")

        # downward walk kept multiplicative: mass factors c^-k overflow float64
        # beyond ~1000 scale steps, which bounds how close to the Gaussian index
        # the adaptive truncation can operate
        quad = xi_max**2 if self.symmetric else 0.5 * xi_max**2 + xi_max
        k_hard = int(1000.0 * math.log(2.0) / math.log(self.c))
        cur = self.atom_xs.copy()
        mass = self.atom_ws.copy()
        k_min = 0
        prev = None
        ratio = 0.5
        stall = 0
        while True:
            s2 = float(np.sum(mass * np.sum(cur**2, axis=1)))
            if prev is not None and prev > 0:
                step_ratio = s2 / prev
                stall = stall + 1 if step_ratio > 0.9999 else 0
                if stall >= 12:
                    raise ThresholdTooSmall(
                        "lower orbit tail is not summable; atoms sit on an index-1/2 "
                        "block"
                    )
                ratio = min(max(step_ratio, 1e-6), 0.995)
            bound = quad * s2 / (1.0 - ratio)
            if bound <= 0.5 * tol:
                break
            prev = s2
            cur = cur @ self._scale_map_inv.T
            mass = mass * self.c
            k_min -= 1
            if -k_min > k_hard:
                raise ThresholdTooSmall(
                    "lower orbit tail decays too slowly for the requested tolerance "
                    "(index too close to 1/2)"
                )
        upper = per_mass * w_total * self.c ** (-k_max) / (self.c - 1.0)
        return k_min, k_max, upper + bound

    def _tail_bound(self, k_min, k_max, xi_max):
        w_total = float(self.atom_ws.sum()) if len(self.atom_ws) else 0.0
        if w_total == 0.0:
            return 0.0
        per_mass = 4.0 if self.symmetric else 2.0 + 0.5 * xi_max
        upper = per_mass * w_total * self.c ** (-k_max) / (self.c - 1.0)
        s2 = self._lower_tail_s2(k_min - 1)
        quad = xi_max**2 if self.symmetric else 0.5 * xi_max**2 + xi_max
        lower = quad * s2 / (1.0 - 0.5)
        return upper + lower

    # -- validation --------------------------------------------------------------

    def validate(self):
        """Fullness, integrability and strictness diagnostics (never raises)."""
        dec = self.decomposition
        messages = []

        # integrability: atoms must avoid blocks with a = 1/2
        integrable = True
        half_blocks = [i for i, b in enumerate(dec.blocks) if b.a <= 0.5 + 1e-9]
        if half_blocks and len(self.atom_xs):
            coords = self.atom_xs @ dec.basis_inv.T
            for i in half_blocks:
                sl = dec.slices[i]
                if np.linalg.norm(coords[:, sl]) > 1e-10 * max(
                    1.0, float(np.abs(self.atom_xs).max())
                ):
                    integrable = False
                    messages.append(
                        f"atoms touch the a={dec.blocks[i].a:.4g} block; the orbit mass "
                        "sum diverges there"
                    )

        # Gaussian part must sit on a = 1/2 blocks to respect the scaling
        gaussian_consistent = True
        if np.any(self.gaussian):
            keep = np.zeros_like(self.gaussian)
            for i in half_blocks:
                P = dec.projector(i)
                keep = keep + P @ self.gaussian @ P.T
            if not np.allclose(keep, self.gaussian, atol=1e-10 * max(1.0, np.abs(self.gaussian).max())):
                gaussian_consistent = False
                messages.append("gaussian covariance leaks outside the a=1/2 blocks")

        # fullness: Krylov span of the atoms under the scale map plus the
        # Gaussian directions must cover R^d
        cols = []
        if len(self.atom_xs):
            K = self.atom_xs.T
            blockcols = [K]
            for _ in range(self.dim - 1):
                K = self._scale_map @ K
                blockcols.append(K)
            cols.append(np.hstack(blockcols))
        if np.any(self.gaussian):
            cols.append(self.gaussian)
        if cols:
            stacked = np.hstack(cols)
            sv = np.linalg.svd(stacked, compute_uv=False)
            full = len(sv) >= self.dim and sv[self.dim - 1] > 1e-10 * max(1.0, sv[0])
        else:
            full = False
        if not full:
            messages.append("support spans a proper subspace; model is not full")

        strict = self.symmetric and not np.any(self.drift)
        if not strict:
            messages.append(
                "model is not certified strict; scaling-law checks are advisory"
            )

        try:
            _, _, tail = self.truncation_range(1.0)
        except ThresholdTooSmall as exc:
            tail = math.inf
            messages.append(str(exc))
        self.diagnostics = ModelDiagnostics(
            full=bool(full),
            integrable=bool(integrable),
            strict=bool(strict),
            truncation_tail_bound=float(tail),
            gaussian_consistent=bool(gaussian_consistent),
            messages=messages,
        )
        return self.diagnostics

    def _require_validated(self):
        if self.diagnostics is None:
            raise NotValidated("call validate() before evaluating the exponent")

    # -- exponent evaluation ----------------------------------------------------

    def psi(self, xi):
        """Levy exponent on a frequency batch; complex array (or scalar)."""
        self._require_validated()
        batch, single = _as_batch(xi, self.dim)
        xi_max = float(np.linalg.norm(batch, axis=1).max()) if batch.size else 0.0
        out = np.zeros(batch.shape[0], dtype=complex)

        if len(self.atom_ws):
            k_min, k_max, _ = self.truncation_range(max(xi_max, 1.0))
            # 1 - cos(z) as 2 sin^2(z/2): exact for tiny phases, whose orbit
            # masses c^-k can be enormous
            if self.symmetric:
                Y, W, _ = self.orbit(k_min, k_max, reps_only=True)
                phases = batch @ Y.T
                out += (4.0 * W * np.sin(0.5 * phases) ** 2).sum(axis=1)
            else:
                Y, W, _ = self.orbit(k_min, k_max)
                phases = batch @ Y.T
                centering = 1.0 / (1.0 + np.sum(Y**2, axis=1))
                re = (2.0 * W * np.sin(0.5 * phases) ** 2).sum(axis=1)
                im = (W * (phases * centering - np.sin(phases))).sum(axis=1)
                out += re + 1j * im

        if np.any(self.gaussian):
            out += 0.5 * np.einsum("ni,ij,nj->n", batch, self.gaussian, batch)
        if np.any(self.drift):
            out += 1j * (batch @ self.drift)
        return out[0] if single else out

    def scale_dual(self):
        """c^{E^T}: the frequency-side scale map for the discrete scaling law."""
        return self._scale_map.T

    def spectrum_summary(self):
        from .dimensions import SpectrumSummary

        return SpectrumSummary.from_decomposition(self.decomposition)

    def to_dict(self):
        return {
            "c": self.c,
            "E": self.E.tolist(),
            "atoms": [
                {"x": x.tolist(), "w": float(w)}
                for x, w in zip(self.atom_xs, self.atom_ws)
            ],
            "gaussian": self.gaussian.tolist(),
            "drift": self.drift.tolist(),
            "truncation": self.truncation.to_dict(),
            "symmetric": self.symmetric,
        }


class _ClosedFormBase:
    """Shared plumbing for closed-form exponents (always valid and strict)."""

    symmetric = True

    def validate(self):
        self.diagnostics = ModelDiagnostics(
            full=True,
            integrable=True,
            strict=True,
            truncation_tail_bound=0.0,
            messages=[],
        )
        return self.diagnostics

    def spectrum_summary(self):
        from .dimensions import SpectrumSummary

        return SpectrumSummary.from_decomposition(self.decomposition)


class SymmetricStableModel(_ClosedFormBase):
    """Isotropic stable exponent psi(xi) = (sigma ||xi||)^alpha, 0 < alpha <= 2."""

    def __init__(self, alpha, sigma=1.0, dim=1):
        if not 0 < alpha <= 2:
            raise ModelSpecError("alpha must lie in (0, 2]", field="alpha")
        if sigma <= 0:
            raise ModelSpecError("sigma must be positive", field="sigma")
        self.alpha = float(alpha)
        self.sigma = float(sigma)
        self.dim = int(dim)
        self.E = np.eye(self.dim) / self.alpha
        self.decomposition = decompose(self.E)
        self.diagnostics = None

    def psi(self, xi):
        batch, single = _as_batch(xi, self.dim)
        out = (self.sigma * np.linalg.norm(batch, axis=1)) ** self.alpha + 0j
        return out[0] if single else out

    def to_dict(self):
        return {
            "kind": "symmetric_stable",
            "alpha": self.alpha,
            "sigma": self.sigma,
            "dim": self.dim,
        }


class BrownianModel(_ClosedFormBase):
    """Gaussian exponent psi(xi) = (1/2) <xi, Sigma xi>."""

    def __init__(self, sigma_matrix):
        S = np.asarray(sigma_matrix, dtype=float)
        if S.ndim == 0:
            S = S.reshape(1, 1)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise ModelSpecError("sigma_matrix must be square", field="sigma_matrix")
        if not np.allclose(S, S.T, atol=1e-12):
            raise ModelSpecError("sigma_matrix must be symmetric", field="sigma_matrix")
        if np.linalg.eigvalsh(S).min() < -1e-12:
            raise ModelSpecError(
                "sigma_matrix must be nonnegative definite", field="sigma_matrix"
            )
        self.sigma_matrix = S
        self.dim = S.shape[0]
        self.E = 0.5 * np.eye(self.dim)
        self.decomposition = decompose(self.E)
        self.diagnostics = None

    def psi(self, xi):
        batch, single = _as_batch(xi, self.dim)
        out = 0.5 * np.einsum("ni,ij,nj->n", batch, self.sigma_matrix, batch) + 0j
        return out[0] if single else out

    def to_dict(self):
        return {"kind": "brownian", "sigma_matrix": self.sigma_matrix.tolist()}


class DensityExampleModel(_ClosedFormBase):
    """One-dimensional symmetric jump density with split tail/local exponents.

    Density |x|^{-(beta+1)} on 0 < |x| <= 1 and |x|^{-(alpha+1)} on |x| > 1,
    requiring alpha > 0 and beta < 2.  The exponent
    psi(xi) = 2 * integral_0^inf (1 - cos(xi x)) g(x) dx
    is evaluated by adaptive quadrature with oscillatory weights.
    """

    dim = 1

    def __init__(self, alpha, beta):
        if alpha <= 0:
            raise ModelSpecError("alpha must be positive", field="alpha")
        if beta >= 2:
            raise ModelSpecError("beta must be below 2", field="beta")
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.decomposition = None
        self.diagnostics = None

    def spectrum_summary(self):
        return None

    @staticmethod
    def _unit_interval_piece(gamma, xi):
        """integral_0^1 (1 - cos(xi x)) x^(-gamma-1) dx for gamma < 2.

        Alternating series below xi = 1/2 (keeps tiny values relatively
        accurate); otherwise plain adaptive quadrature below the first
        oscillation (with 2 sin^2 to dodge cancellation) and cosine-weighted
        quadrature above it.
        """
        if xi <= 0.5:
            total = 0.0
            term = 1.0
            for k in range(1, 30):
                term = term * xi * xi / ((2 * k) * (2 * k - 1))
                contrib = term / (2 * k - gamma)
                total += contrib if k % 2 == 1 else -contrib
                if term < 1e-18 * max(abs(total), 1e-300):
                    break
            return total
        x0 = min(1.0, 1.0 / xi)
        val, _ = integrate.quad(
            lambda x: 2.0 * math.sin(0.5 * xi * x) ** 2 * x ** (-gamma - 1.0),
            0.0,
            x0,
            limit=200,
        )
        if x0 < 1.0:
            osc, _ = integrate.quad(
                lambda x: x ** (-gamma - 1.0), x0, 1.0, weight="cos", wvar=xi, limit=200
            )
            if gamma != 0.0:
                const = (x0 ** (-gamma) - 1.0) / gamma
            else:
                const = -math.log(x0)
            val += const - osc
        return val

    def _psi_scalar(self, xi):
        xi = abs(float(xi))
        if xi == 0.0:
            return 0.0
        a, b = self.alpha, self.beta
        inner = self._unit_interval_piece(b, xi)
        if a < 2.0:
            # integral_0^inf (1 - cos u) u^(-a-1) du in closed form, so the tail
            # reduces to another unit-interval piece and nothing oscillates to
            # infinity
            full = math.pi / (2.0 * math.gamma(a + 1.0) * math.sin(0.5 * math.pi * a))
            tail = xi**a * full - self._unit_interval_piece(a, xi)
        else:
            tail_osc, _ = integrate.quad(
                lambda u: u ** (-a - 1.0), xi, np.inf, weight="cos", wvar=1.0, limit=200
            )
            tail = 1.0 / a - xi**a * tail_osc
        return 2.0 * (inner + tail)

    def psi(self, xi):
        batch, single = _as_batch(xi, 1)
        out = np.array([self._psi_scalar(v) for v in batch[:, 0]], dtype=complex)
        return out[0] if single else out

    def to_dict(self):
        return {"kind": "density_example", "alpha": self.alpha, "beta": self.beta}


# -- exponent-derived quantities ------------------------------------------------


def eval_psi(model, xi):
    return model.psi(xi)


def eval_F(model, xi):
    """Real part of the exponent."""
    return np.real(model.psi(xi))


def eval_G(model, xi):
    """Imaginary part of the exponent."""
    return np.imag(model.psi(xi))


def graph_exponent(model, xi0, xi):
    """Exponent of the space-time (graph) process: psi(xi) - i xi0."""
    return model.psi(xi) - 1j * np.asarray(xi0, dtype=float)


def graph_H(model, xi0, xi):
    """Resolvent real part of the graph process.

    H(xi0, xi) = (1 + F) / ((1 + F)^2 + (G - xi0)^2).
    """
    val = model.psi(xi)
    F = np.real(val)
    G = np.imag(val)
    xi0 = np.asarray(xi0, dtype=float)
    return (1.0 + F) / ((1.0 + F) ** 2 + (G - xi0) ** 2)


def resolvent_re(model, xi, q):
    """Re(1/(q + psi(xi))) = (q + F)/((q + F)^2 + G^2); positive and <= 1/q."""
    if q <= 0:
        raise ValueError("q must be positive")
    val = model.psi(xi)
    F = np.real(val)
    G = np.imag(val)
    return (q + F) / ((q + F) ** 2 + G**2)


def is_gaussian_full(model) -> bool:
    """Whether the model is purely Gaussian with full-rank covariance."""
    if isinstance(model, BrownianModel):
        sv = np.linalg.svd(model.sigma_matrix, compute_uv=False)
        return bool(sv[-1] > 1e-12 * max(1.0, sv[0]))
    if isinstance(model, SymmetricStableModel):
        return model.alpha == 2.0
    if isinstance(model, SemistableModel):
        if len(model.atom_ws):
            return False
        sv = np.linalg.svd(model.gaussian, compute_uv=False)
        return bool(len(sv) and sv[-1] > 1e-12 * max(1.0, sv[0]))
    return False


def anisotropy_for(model, xi):
    """Anisotropy gauge of the model's decomposition (requires a spectrum)."""
    if model.decomposition is None:
        raise ModelSpecError("model has no spectral decomposition")
    return anisotropy_norm(model.decomposition, xi)


# -- model spec parsing -----------------------------------------------------------

_SEMISTABLE_KEYS = {
    "c",
    "E",
    "atoms",
    "gaussian",
    "drift",
    "truncation",
    "symmetric",
}
_CLOSED_FORM_KEYS = {
    "symmetric_stable": {"kind", "alpha", "sigma", "dim"},
    "brownian": {"kind", "sigma_matrix"},
    "density_example": {"kind", "alpha", "beta"},
}


def model_from_dict(spec):
    """Build a model from a JSON-style dict; unknown keys are rejected."""
    if not isinstance(spec, dict):
        raise ModelSpecError("model spec must be a JSON object")
    if "kind" in spec:
        kind = spec["kind"]
        allowed = _CLOSED_FORM_KEYS.get(kind)
        if allowed is None:
            raise ModelSpecError(f"unknown closed-form kind {kind!r}", field="kind")
        unknown = set(spec) - allowed
        if unknown:
            raise ModelSpecError(
                f"unknown keys {sorted(unknown)} for kind {kind!r}", field="kind"
            )
        if kind == "symmetric_stable":
            return SymmetricStableModel(
                alpha=spec["alpha"], sigma=spec.get("sigma", 1.0), dim=spec.get("dim", 1)
            )
        if kind == "brownian":
            return BrownianModel(spec["sigma_matrix"])
        return DensityExampleModel(alpha=spec["alpha"], beta=spec["beta"])

    unknown = set(spec) - _SEMISTABLE_KEYS
    if unknown:
        raise ModelSpecError(f"unknown keys {sorted(unknown)}")
    for key in ("c", "E", "atoms"):
        if key not in spec:
            raise ModelSpecError("required key missing", field=key)
    trunc_spec = spec.get("truncation")
    truncation = None
    if trunc_spec is not None:
        allowed = {"tail_tol", "k_min", "k_max"}
        unknown = set(trunc_spec) - allowed
        if unknown:
            raise ModelSpecError(f"unknown keys {sorted(unknown)}", field="truncation")
        truncation = Truncation(
            tail_tol=trunc_spec.get("tail_tol", DEFAULT_TAIL_TOL),
            k_min=trunc_spec.get("k_min"),
            k_max=trunc_spec.get("k_max"),
        )
    atoms = []
    for i, entry in enumerate(spec["atoms"]):
        if not isinstance(entry, dict) or set(entry) - {"x", "w"}:
            raise ModelSpecError(
                "atoms must be objects with keys 'x' and 'w'", field=f"atoms[{i}]"
            )
        atoms.append((entry["x"], entry.get("w", 1.0)))
    return SemistableModel(
        c=spec["c"],
        E=spec["E"],
        atoms=atoms,
        gaussian=spec.get("gaussian"),
        drift=spec.get("drift"),
        truncation=truncation,
        symmetric=spec.get("symmetric"),
    )
