"""Deterministic counter-based random substreams and sphere sampling.

Every stochastic routine keys a Philox stream off (seed, label, index), so
results are reproducible and independent of how work is partitioned across
workers.
"""

from __future__ import annotations

import zlib

import numpy as np


def substream(seed: int, label: str, index: int = 0) -> np.random.Generator:
    """Counter-based generator for a named shard; stable across partitionings."""
    tag = zlib.crc32(label.encode("utf-8"))
    key = [np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64((tag << 20) ^ index)]
    return np.random.Generator(np.random.Philox(key=key))


def sphere_points(dim: int, n: int, rng: np.random.Generator, stratified: bool = True):
    """n directions on the unit sphere of R^dim.

    dim 1 alternates the two signs; dim 2 uses equally spaced angles with a
    random rotation (stratified) so concentration bands are always sampled;
    higher dimensions draw iid normal directions.
    """
    if dim == 1:
        signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        return signs.reshape(-1, 1)
    if dim == 2 and stratified:
        offset = rng.uniform(0.0, 2.0 * np.pi)
        angles = offset + 2.0 * np.pi * np.arange(n) / n
        return np.column_stack([np.cos(angles), np.sin(angles)])
    vecs = rng.standard_normal((n, dim))
    norms = np.linalg.norm(vecs, axis=1, keepdims=True)
    # resample the (measure-zero) degenerate rows instead of dividing by zero
    bad = norms[:, 0] < 1e-12
    while np.any(bad):
        vecs[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(vecs, axis=1, keepdims=True)
        bad = norms[:, 0] < 1e-12
    return vecs / norms


def fibonacci_sphere(n: int):
    """Deterministic, nearly uniform point set on the 2-sphere."""
    i = np.arange(n) + 0.5
    phi = np.arccos(1.0 - 2.0 * i / n)
    golden = np.pi * (1.0 + 5.0**0.5)
    theta = golden * i
    return np.column_stack(
        [np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)]
    )


def sphere_surface(dim: int) -> float:
    """Surface measure of the unit sphere in R^dim (2 when dim = 1)."""
    from math import gamma, pi

    return 2.0 * pi ** (dim / 2.0) / gamma(dim / 2.0)
