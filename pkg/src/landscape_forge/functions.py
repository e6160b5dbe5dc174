"""Uniform representation of black-box objective functions over box domains.

An :class:`ObjectiveFunction` wraps a vectorized evaluator together with its
box :class:`Domain`. Evaluation is deterministic and safe to call from many
workers concurrently; instances are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np


class DomainError(ValueError):
    """A point lies outside the function's box domain."""


@dataclass(frozen=True)
class Domain:
    """Axis-aligned box in R^d with inclusive bounds."""

    dim: int
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower, dtype=float).reshape(-1)
        upper = np.asarray(self.upper, dtype=float).reshape(-1)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if lower.shape != (self.dim,) or upper.shape != (self.dim,):
            raise ValueError("lower/upper must have length dim")
        if not np.all(lower < upper):
            raise ValueError("lower must be strictly below upper on every axis")

    @classmethod
    def symmetric(cls, dim: int, half_width: float = 5.0) -> "Domain":
        return cls(dim, -half_width * np.ones(dim), half_width * np.ones(dim))

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def contains_all(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.all((X >= self.lower) & (X <= self.upper), axis=1)


@dataclass(frozen=True)
class ObjectiveFunction:
    """Deterministic objective f: domain -> R, evaluated via a batch callable.

    ``batch_evaluator`` maps an (n, d) array of in-domain points to an (n,)
    array of finite values. Single-point evaluation routes through the same
    code path so scalar and batch results agree bit-for-bit.
    """

    id: str
    domain: Domain
    batch_evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def evaluate(self, x: Sequence[float] | np.ndarray) -> float:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape != (self.domain.dim,):
            raise DomainError(
                f"point has dimension {x.shape[0]}, expected {self.domain.dim}"
            )
        if not self.domain.contains(x):
            raise DomainError(f"point {x.tolist()} outside domain of '{self.id}'")
        return float(self.batch_evaluator(x.reshape(1, -1))[0])

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.size == 0:
            return np.empty(0)
        X = np.atleast_2d(X)
        if X.shape[1] != self.domain.dim:
            raise DomainError(
                f"points have dimension {X.shape[1]}, expected {self.domain.dim}"
            )
        inside = self.domain.contains_all(X)
        if not np.all(inside):
            k = int(np.argmin(inside))
            raise DomainError(
                f"point at index {k} ({X[k].tolist()}) outside domain of '{self.id}'"
            )
        values = np.asarray(self.batch_evaluator(X), dtype=float).reshape(-1)
        if values.shape != (X.shape[0],):
            raise ValueError("batch evaluator returned wrong shape")
        return values


@dataclass(frozen=True)
class SampleSet:
    """Paired design points and objective values from one sampling run."""

    points: np.ndarray
    values: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        points = np.atleast_2d(np.asarray(self.points, dtype=float))
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if len(points) != len(values):
            raise ValueError("points and values must have equal length")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def normalize_objective(values: np.ndarray) -> tuple[np.ndarray, bool]:
    """Affine-rescale values so the observed min maps to 0 and the max to 1.

    Constant inputs cannot be rescaled; they map to all 0.5 and the returned
    flag is True so callers can assign worst fitness instead of crashing.
    """
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size < 1:
        raise ValueError("normalize_objective requires at least one value")
    lo = float(np.min(values))
    hi = float(np.max(values))
    if hi == lo:
        return np.full_like(values, 0.5), True
    return (values - lo) / (hi - lo), False
