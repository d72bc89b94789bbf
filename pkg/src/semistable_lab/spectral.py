"""Spectral decomposition of scaling exponents and associated scale arithmetic.

The exponent matrix E of a discretely scale-invariant model is split into
invariant blocks grouped by the distinct real parts a_1 < ... < a_p of its
eigenvalues.  Each block carries a tail index alpha_i = 1/a_i and a nilpotent
(Jordan) refinement.  All anisotropic norms, component projections and the
asymptotic-inverse diagnostics downstream are expressed in the adapted basis
produced here, in which the blocks are mutually orthogonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla

from .errors import (
    ClusterAmbiguous,
    DimensionMismatch,
    EigenRealPartBelowHalf,
    NonInvertible,
    RadiusTooSmall,
    RangeOverflow,
)

DEFAULT_TOL_CLUSTER = 1e-8
DEFAULT_TOL_EIG = 1e-9
# Rank tolerance for the nilpotent kernel chains; exact Jordan structure does
# not survive floating point, so ranks are read off singular values.
RANK_TOL = 1e-9
PROJECTOR_TOL = 1e-10


def validate_exponent(E, tol_eig=DEFAULT_TOL_EIG):
    """Check that E is a d x d invertible matrix with eigenvalue real parts >= 1/2.

    Returns the eigenvalues.  Raises NonInvertible or EigenRealPartBelowHalf.
    """
    E = np.asarray(E, dtype=float)
    if E.ndim != 2 or E.shape[0] != E.shape[1]:
        raise DimensionMismatch(f"exponent must be square, got shape {E.shape}")
    eigvals = np.linalg.eigvals(E)
    smin = np.linalg.svd(E, compute_uv=False)[-1]
    if smin <= 1e-12 * max(1.0, float(np.abs(E).max())):
        raise NonInvertible("exponent matrix is numerically singular")
    bad = [complex(z) for z in eigvals if z.real < 0.5 - tol_eig]
    if bad:
        raise EigenRealPartBelowHalf([z.real for z in bad])
    return eigvals


@dataclass(frozen=True)
class SpectralBlock:
    """One invariant block: common real part a, index alpha = 1/a, and Jordan data.

    jordan_orders lists the nilpotent chain lengths (real bookkeeping: a complex
    conjugate pair contributes chains of combined real dimension), so
    sum(order * multiplicity) == dim_block and max(jordan_orders) == q.
    """

    a: float
    dim_block: int
    jordan_orders: tuple[int, ...]
    basis_columns: tuple[int, int]

    @property
    def alpha(self) -> float:
        return 1.0 / self.a

    @property
    def q(self) -> int:
        return max(self.jordan_orders)

    def to_dict(self):
        return {
            "a": self.a,
            "alpha": self.alpha,
            "dim": self.dim_block,
            "jordan_orders": list(self.jordan_orders),
        }


@dataclass
class SpectralDecomposition:
    """Invariant-block decomposition of an exponent matrix.

    ``basis`` holds per-block orthonormal columns spanning the invariant
    subspaces, ordered by increasing a.  The inner product in which the blocks
    are mutually orthogonal is the one that declares this basis orthonormal;
    it coincides with the Euclidean one exactly when ``basis`` is orthogonal
    (e.g. for block-diagonal or orthogonally conjugated exponents).
    """

    blocks: tuple[SpectralBlock, ...]
    basis: np.ndarray
    basis_inv: np.ndarray
    tol_cluster: float
    block_matrices: tuple[np.ndarray, ...]
    # Per block: list of (order j, orthonormal d_i x m basis of the order-j
    # component of the transposed block).  Used by the asymptotic inverse.
    dual_order_bases: tuple[tuple[tuple[int, np.ndarray], ...], ...] = field(repr=False)

    @property
    def d(self) -> int:
        return self.basis.shape[0]

    @property
    def p(self) -> int:
        return len(self.blocks)

    @property
    def alphas(self) -> tuple[float, ...]:
        return tuple(b.alpha for b in self.blocks)

    @property
    def slices(self) -> tuple[slice, ...]:
        return tuple(slice(*b.basis_columns) for b in self.blocks)

    def projector(self, i: int) -> np.ndarray:
        sl = self.slices[i]
        return self.basis[:, sl] @ self.basis_inv[sl, :]

    @property
    def basis_orthogonal(self) -> bool:
        d = self.d
        return bool(np.allclose(self.basis.T @ self.basis, np.eye(d), atol=1e-10))

    def dual_coords(self, xi):
        """Frequency-side coordinates of xi in the adapted basis."""
        return self.basis.T @ np.asarray(xi, dtype=float)

    def to_dict(self):
        return {
            "blocks": [b.to_dict() for b in self.blocks],
            "basis": self.basis.tolist(),
        }


# Computed eigenvalues of a Jordan chain of order q scatter by ~eps^(1/q)
# around the true value; linkage below this floor would shred such chains, so
# the effective threshold never drops under it.  Chains up to order ~3 are
# resolved; real parts closer than the floor are declared ambiguous.
JORDAN_SCATTER_FLOOR = 2e-5


def _cluster_real_parts(re_parts, tol_cluster, scale=1.0):
    """Single-linkage grouping of eigenvalue real parts; raises on ambiguous gaps."""
    tol_eff = max(tol_cluster, JORDAN_SCATTER_FLOOR * max(1.0, scale))
    order = np.argsort(re_parts)
    sorted_re = re_parts[order]
    groups = [[order[0]]]
    for idx, prev, cur in zip(order[1:], sorted_re[:-1], sorted_re[1:]):
        if cur - prev <= tol_eff:
            groups[-1].append(idx)
        else:
            if cur - prev < 2.0 * tol_eff:
                raise ClusterAmbiguous(
                    f"real-part gap {cur - prev:.3e} is between the effective tol and "
                    f"twice it ({tol_eff:.1e}); refusing to guess the partition"
                )
            groups.append([idx])
    for g in groups:
        spread = re_parts[g].max() - re_parts[g].min()
        if spread > tol_eff:
            raise ClusterAmbiguous(
                f"in-group real-part spread {spread:.3e} exceeds tol {tol_eff:.1e}"
            )
    return groups


def _nullspace_dims(M, max_order, rank_tol=RANK_TOL):
    """Nullity of M^j for j = 1..max_order, read off singular values."""
    dims = []
    n = M.shape[0]
    P = np.eye(n)
    scale = max(1.0, float(np.linalg.norm(M, 2)))
    for _ in range(max_order):
        P = P @ (M / scale)
        sv = np.linalg.svd(P, compute_uv=False)
        nullity = int(np.sum(sv <= rank_tol * max(1.0, sv[0] if len(sv) else 1.0)))
        dims.append(nullity)
        if nullity == n:
            break
    return dims


# Eigenvalues of a perturbed Jordan block of order q scatter by ~eps^(1/q), so
# grouping eigenvalues *within* one spectral block needs a coarser tolerance
# than the rank cutoffs; cluster means are then accurate to O(eps).
BLOCK_EIG_TOL = 1e-4


def _nilpotent_witness(A, rank_tol=RANK_TOL):
    """Matrix M with Ker(M^j) equal to the order-<=j subspace of A's nilpotent part.

    Built as the product of (A - lam I) over distinct real eigenvalues and
    (A^2 - 2 Re(lam) A + |lam|^2 I) over conjugate pairs, i.e. the square-free
    part of the characteristic polynomial evaluated at A, using eigenvalue
    cluster means to absorb Jordan round-off scatter.
    """
    n = A.shape[0]
    eig = np.linalg.eigvals(A)
    scale = max(1.0, float(np.abs(eig).max()))
    tol = BLOCK_EIG_TOL * scale
    remaining = list(eig)
    means = []
    while remaining:
        seed_val = remaining.pop(0)
        cluster = [seed_val]
        changed = True
        while changed:
            changed = False
            for z in list(remaining):
                if any(abs(z - w) <= tol for w in cluster):
                    cluster.append(z)
                    remaining.remove(z)
                    changed = True
        means.append(complex(np.mean(cluster)))
    distinct = []
    for lam in means:
        if abs(lam.imag) <= tol:
            lam = complex(lam.real, 0.0)
        if any(
            abs(lam - mu) <= tol or abs(lam - mu.conjugate()) <= tol for mu in distinct
        ):
            continue
        distinct.append(lam)
    M = np.eye(n)
    for lam in distinct:
        if lam.imag == 0.0:
            M = M @ (A - lam.real * np.eye(n))
        else:
            M = M @ (A @ A - 2.0 * lam.real * A + (abs(lam) ** 2) * np.eye(n))
    return M


def _jordan_orders(A, rank_tol=RANK_TOL):
    """Chain lengths of the nilpotent part of A, with real-dimension bookkeeping."""
    n = A.shape[0]
    M = _nilpotent_witness(A, rank_tol)
    nullities = _nullspace_dims(M, n, rank_tol)
    if not nullities or nullities[-1] != n:
        # nullity chain failed to exhaust the block; fall back to semisimple
        return (1,) * n
    increments = [nullities[0]] + [b - a for a, b in zip(nullities[:-1], nullities[1:])]
    orders = []
    for j in range(len(increments), 0, -1):
        nxt = increments[j] if j < len(increments) else 0
        count = increments[j - 1] - nxt
        orders.extend([j] * count)
    return tuple(sorted(orders))


def _order_components(A, rank_tol=RANK_TOL):
    """Orthonormal bases of the order-j components of A's nilpotent filtration.

    Returns [(j, Q_j)] with K_j = Ker(M^j) split as K_{j-1} + range(Q_j); the
    Q_j are mutually orthogonal and stack to the identity.
    """
    n = A.shape[0]
    M = _nilpotent_witness(A, rank_tol)
    comps = []
    prev = np.zeros((n, 0))
    P = np.eye(n)
    scale = max(1.0, float(np.linalg.norm(M, 2)))
    for j in range(1, n + 1):
        P = P @ (M / scale)
        K = _nullspace_basis(P, rank_tol)
        if K.shape[1] > prev.shape[1]:
            resid = K - prev @ (prev.T @ K)
            Q = _orth(resid, rank_tol)
            comps.append((j, Q))
            prev = np.hstack([prev, Q])
        if prev.shape[1] == n:
            break
    if prev.shape[1] != n:
        # nothing nilpotent detected beyond what was found; remaining directions
        # are order-1 by convention
        resid = np.eye(n) - prev @ prev.T
        Q = _orth(resid, rank_tol)
        if Q.shape[1]:
            comps.insert(0, (1, Q))
    return tuple(comps)


def _nullspace_basis(M, rank_tol):
    u, sv, vt = np.linalg.svd(M)
    top = sv[0] if len(sv) else 1.0
    nullity = int(np.sum(sv <= rank_tol * max(1.0, top)))
    if nullity == 0:
        return np.zeros((M.shape[1], 0))
    return vt[len(sv) - nullity:].T


def _orth(V, rank_tol):
    if V.size == 0:
        return np.zeros((V.shape[0], 0))
    u, sv, _ = np.linalg.svd(V, full_matrices=False)
    keep = int(np.sum(sv > rank_tol * max(1.0, sv[0] if len(sv) else 1.0)))
    return u[:, :keep]


def decompose(E, tol_cluster=DEFAULT_TOL_CLUSTER, tol_eig=DEFAULT_TOL_EIG):
    """Split the exponent E into invariant blocks by distinct eigenvalue real parts.

    Blocks come back ordered by strictly increasing a_i with per-block
    orthonormal bases from sorted real Schur factorizations.  Raises
    NonInvertible, EigenRealPartBelowHalf, or ClusterAmbiguous.
    """
    E = np.asarray(E, dtype=float)
    if tol_cluster <= 0:
        raise ValueError("tol_cluster must be positive")
    eigvals = validate_exponent(E, tol_eig)
    scale = float(np.linalg.norm(E, 2))
    groups = _cluster_real_parts(eigvals.real, tol_cluster, scale)
    groups.sort(key=lambda g: eigvals.real[g].mean())
    centers = [eigvals.real[g].mean() for g in groups]
    # selection windows at midpoints between neighbouring cluster centers
    bounds = [-np.inf]
    for lo, hi in zip(centers[:-1], centers[1:]):
        bounds.append(0.5 * (lo + hi))
    bounds.append(np.inf)

    cols = []
    blocks = []
    col_start = 0
    for i, g in enumerate(groups):
        lo, hi = bounds[i], bounds[i + 1]
        T, Z, sdim = sla.schur(
            E, output="real", sort=lambda re, im: (re > lo) & (re < hi)
        )
        if sdim != len(g):
            raise ClusterAmbiguous(
                f"Schur reordering selected {sdim} eigenvalues for the cluster at "
                f"a={centers[i]:.6g}, expected {len(g)}"
            )
        cols.append(Z[:, :sdim])
        blocks.append((centers[i], sdim, col_start))
        col_start += sdim

    basis = np.hstack(cols)
    basis_inv = np.linalg.inv(basis)
    E_adapted = basis_inv @ E @ basis

    spectral_blocks = []
    block_mats = []
    dual_bases = []
    for a_i, d_i, start in blocks:
        sl = slice(start, start + d_i)
        A = E_adapted[sl, sl]
        block_mats.append(A)
        orders = _jordan_orders(A)
        spectral_blocks.append(
            SpectralBlock(
                a=float(a_i),
                dim_block=int(d_i),
                jordan_orders=orders,
                basis_columns=(start, start + d_i),
            )
        )
        dual_bases.append(_order_components(A.T))

    dec = SpectralDecomposition(
        blocks=tuple(spectral_blocks),
        basis=basis,
        basis_inv=basis_inv,
        tol_cluster=tol_cluster,
        block_matrices=tuple(block_mats),
        dual_order_bases=tuple(dual_bases),
    )
    _check_invariants(E, dec)
    return dec


def _check_invariants(E, dec):
    d = dec.d
    total = np.zeros((d, d))
    for i in range(dec.p):
        P = dec.projector(i)
        if np.linalg.norm(P @ P - P, 2) > PROJECTOR_TOL * max(1.0, np.linalg.norm(P, 2) ** 2):
            raise ClusterAmbiguous("projector idempotency failed; clusters too close")
        comm = np.linalg.norm(E @ P - P @ E, 2)
        if comm > max(10.0 * dec.tol_cluster, 1e-9 * np.linalg.norm(E, 2)):
            raise ClusterAmbiguous(
                f"projector does not commute with E (||[E,P]|| = {comm:.3e})"
            )
        total += P
    if np.linalg.norm(total - np.eye(d), 2) > PROJECTOR_TOL * d:
        raise ClusterAmbiguous("projectors do not sum to the identity")


def matrix_power(E, t):
    """t^E = exp(log(t) E) by scaling-and-squaring Pade approximation."""
    if t <= 0:
        raise ValueError("t must be positive")
    E = np.asarray(E, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = sla.expm(math.log(t) * E)
    if not np.all(np.isfinite(out)):
        raise RangeOverflow(f"t^E overflowed at t={t:.3e}")
    return out


def split_scale(t, c):
    """Write t = c**k * m with integer k and m in [1, c)."""
    if t <= 0:
        raise ValueError("t must be positive")
    if c <= 1:
        raise ValueError("c must exceed 1")
    k = math.floor(math.log(t) / math.log(c))
    m = t / c**k
    # guard against log round-off at exact powers
    while m >= c:
        k += 1
        m = t / c**k
    while m < 1.0:
        k -= 1
        m = t / c**k
    return k, m


def component_project(dec, x):
    """Split x into its invariant-block components (summing back to x)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (dec.d,):
        raise DimensionMismatch(f"expected vector of length {dec.d}, got {x.shape}")
    u = dec.basis_inv @ x
    parts = []
    for sl in dec.slices:
        ui = np.zeros_like(u)
        ui[sl] = u[sl]
        parts.append(dec.basis @ ui)
    return parts


def anisotropy_norm(dec, xi):
    """Block-wise gauge sum_i ||xi_i||^alpha_i on the frequency side.

    Components are taken in the adapted basis (dual coordinates), the frame in
    which the tail bounds of the exponent are stated.
    """
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] != dec.d:
        raise DimensionMismatch(f"expected last axis {dec.d}, got {xi.shape}")
    u = xi @ dec.basis
    total = np.zeros(u.shape[:-1])
    for blk, sl in zip(dec.blocks, dec.slices):
        norms = np.linalg.norm(u[..., sl], axis=-1)
        total = total + norms**blk.alpha
    return total if total.shape else float(total)


def asymptotic_inverse(dec, r, x):
    """Scale t(r) matching radius r along direction x, with Jordan log corrections.

    t(r) = sum_{i,j} (alpha_i^(j-1)/(j-1)!)^alpha_i r^alpha_i
           (log r)^(alpha_i (j-1)) ||x_ij||^alpha_i
    over blocks i and nilpotent orders j of the adapted-transpose refinement.
    """
    if r <= 1.0:
        raise RadiusTooSmall(f"radius must exceed 1, got {r}")
    x = np.asarray(x, dtype=float)
    if x.shape != (dec.d,):
        raise DimensionMismatch(f"expected vector of length {dec.d}, got {x.shape}")
    if not np.any(x):
        raise ValueError("direction x must be nonzero")
    u = dec.dual_coords(x)
    logr = math.log(r)
    total = 0.0
    for blk, sl, orders in zip(dec.blocks, dec.slices, dec.dual_order_bases):
        ui = u[sl]
        alpha = blk.alpha
        for j, Q in orders:
            nrm = float(np.linalg.norm(Q.T @ ui))
            if nrm == 0.0:
                continue
            coeff = (alpha ** (j - 1) / math.factorial(j - 1)) ** alpha
            total += coeff * r**alpha * logr ** (alpha * (j - 1)) * nrm**alpha
    return total


def theta(dec, E, r, x):
    """Rescaled direction t(r)^{-E*} (r x), which approaches the unit sphere.

    Computed in the adapted frame where the block transpose realizes the
    adjoint; for orthogonal bases this is the plain Euclidean computation.
    """
    if r <= 1.0:
        raise RadiusTooSmall(f"radius must exceed 1, got {r}")
    E = np.asarray(E, dtype=float)
    t = asymptotic_inverse(dec, r, x)
    E_adapted = dec.basis_inv @ E @ dec.basis
    mat = sla.expm(-math.log(t) * E_adapted.T)
    if not np.all(np.isfinite(mat)):
        raise RangeOverflow(f"t^{{-E*}} overflowed at t={t:.3e}")
    return mat @ (r * dec.dual_coords(x))
