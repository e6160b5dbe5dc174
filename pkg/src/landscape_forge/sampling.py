"""Seeded samplers producing the designs all downstream analyses consume.

All samplers are pure functions of (config, domain). Randomness comes from
numpy's PCG64 generator seeded through ``SeedSequence``, which is platform
stable; the exact generator is part of the reproducibility contract.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .functions import Domain


class UnsupportedDimensionError(ValueError):
    """Raised when a sampler only defined for specific dimensions is misused."""


@dataclass(frozen=True)
class SamplerConfig:
    kind: str = "latin_hypercube"  # latin_hypercube | uniform | grid
    n: int = 100
    resolution: int = 201
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("latin_hypercube", "uniform", "grid"):
            raise ValueError(f"unknown sampler kind: {self.kind}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.resolution < 2:
            raise ValueError("resolution must be >= 2")


def rng_from_seed(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministically derive a child seed from a base seed and index keys."""
    state = np.random.SeedSequence([int(seed), *[int(k) for k in keys]])
    return int(state.generate_state(1, dtype=np.uint64)[0])


def latin_hypercube(n: int, domain: Domain, seed: int) -> np.ndarray:
    """Latin hypercube design: one point per axis stratum per dimension.

    Strata are randomly permuted per axis and points are jittered uniformly
    within each stratum.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = rng_from_seed(seed)
    d = domain.dim
    unit = np.empty((n, d))
    for k in range(d):
        perm = rng.permutation(n)
        jitter = rng.uniform(size=n)
        unit[:, k] = (perm + jitter) / n
    return domain.lower + unit * domain.width


def uniform(n: int, domain: Domain, seed: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = rng_from_seed(seed)
    return rng.uniform(domain.lower, domain.upper, size=(n, domain.dim))


def grid(resolution: int, domain: Domain) -> np.ndarray:
    """r x r lattice on a 2D domain, bounds included, row-major order.

    Cell (i, j) maps to flat index i * r + j with x1 = axis1[i], x2 = axis2[j];
    the first point is the (lower, lower) corner and the last (upper, upper).
    """
    if domain.dim != 2:
        raise UnsupportedDimensionError(
            f"grid sampling is defined for d=2 only, got d={domain.dim}"
        )
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    a0 = np.linspace(domain.lower[0], domain.upper[0], resolution)
    a1 = np.linspace(domain.lower[1], domain.upper[1], resolution)
    x1, x2 = np.meshgrid(a0, a1, indexing="ij")
    return np.column_stack([x1.ravel(), x2.ravel()])


def sample(config: SamplerConfig, domain: Domain) -> np.ndarray:
    if config.kind == "latin_hypercube":
        return latin_hypercube(config.n, domain, config.seed)
    if config.kind == "uniform":
        return uniform(config.n, domain, config.seed)
    return grid(config.resolution, domain)


def design_to_csv(points: np.ndarray, path) -> None:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{k + 1}" for k in range(points.shape[1])])
        for row in points:
            writer.writerow([repr(float(v)) for v in row])
