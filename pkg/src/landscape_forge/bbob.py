"""The 24 BBOB benchmark functions with seeded instance transformations.

Function definitions follow the BBOB noiseless test-suite report (Hansen et
al., "Real-parameter black-box optimization benchmarking: noiseless
functions definitions", INRIA RR-6829). Instance transformations (optimum
shift, objective offset, rotations) are derived from numpy's PCG64 generator
seeded on (function_id, instance_id, dim), with rotation matrices obtained by
Gram-Schmidt orthonormalization of Gaussian matrices. This seeding convention
is this library's own and is recorded in the instance metadata; it does not
reproduce the original COCO instance numbers.

The objective offset is added to the raw function value at construction, with
``f_opt = offset + raw(x_opt)``, so ``evaluate(x_opt) == f_opt`` holds exactly
for every function by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .functions import Domain, ObjectiveFunction

DOMAIN_HALF_WIDTH = 5.0
SEEDING_CONVENTION = "pcg64-gram-schmidt-v1"

FUNCTION_NAMES = {
    1: "sphere",
    2: "ellipsoidal_separable",
    3: "rastrigin_separable",
    4: "bueche_rastrigin",
    5: "linear_slope",
    6: "attractive_sector",
    7: "step_ellipsoidal",
    8: "rosenbrock",
    9: "rosenbrock_rotated",
    10: "ellipsoidal",
    11: "discus",
    12: "bent_cigar",
    13: "sharp_ridge",
    14: "different_powers",
    15: "rastrigin",
    16: "weierstrass",
    17: "schaffers_f7",
    18: "schaffers_f7_ill_conditioned",
    19: "griewank_rosenbrock",
    20: "schwefel",
    21: "gallagher_101_peaks",
    22: "gallagher_21_peaks",
    23: "katsuura",
    24: "lunacek_bi_rastrigin",
}


@dataclass(frozen=True)
class BBOBInstance:
    function_id: int
    instance_id: int
    dim: int
    x_opt: np.ndarray
    f_opt: float


def optimum(instance: BBOBInstance) -> tuple[np.ndarray, float]:
    return instance.x_opt, instance.f_opt


# --- shared transformations ----------------------------------------------


def _osz(z: np.ndarray) -> np.ndarray:
    """Oscillation transformation T_osz, applied elementwise."""
    zhat = np.where(z == 0.0, 0.0, np.log(np.abs(np.where(z == 0.0, 1.0, z))))
    c1 = np.where(z > 0.0, 10.0, 5.5)
    c2 = np.where(z > 0.0, 7.9, 3.1)
    return np.sign(z) * np.exp(zhat + 0.049 * (np.sin(c1 * zhat) + np.sin(c2 * zhat)))


def _asy(z: np.ndarray, beta: float) -> np.ndarray:
    """Asymmetry transformation T_asy^beta on (n, d) rows."""
    d = z.shape[1]
    idx = np.arange(d) / (d - 1) if d > 1 else np.zeros(1)
    expo = 1.0 + beta * idx * np.sqrt(np.maximum(z, 0.0))
    return np.where(z > 0.0, np.power(np.maximum(z, 0.0), expo), z)


def _lam(alpha: float, d: int) -> np.ndarray:
    """Diagonal of the conditioning matrix Lambda^alpha."""
    idx = np.arange(d) / (d - 1) if d > 1 else np.zeros(1)
    return np.power(alpha, 0.5 * idx)


def _pen(X: np.ndarray) -> np.ndarray:
    out = np.maximum(0.0, np.abs(X) - 5.0)
    return np.sum(out * out, axis=1)


def _rotation(rng: np.random.Generator, d: int) -> np.ndarray:
    """Orthonormal matrix from Gram-Schmidt on a Gaussian matrix."""
    B = rng.standard_normal((d, d))
    for i in range(d):
        for j in range(i):
            B[i] -= np.dot(B[i], B[j]) * B[j]
        B[i] /= np.sqrt(np.sum(B[i] ** 2))
    return B


def _uniform_xopt(rng: np.random.Generator, d: int) -> np.ndarray:
    return rng.uniform(-4.0, 4.0, d)


def _sign_pattern(rng: np.random.Generator, d: int) -> np.ndarray:
    return np.where(rng.uniform(size=d) < 0.5, -1.0, 1.0)


# --- the 24 base functions -----------------------------------------------
# Each builder draws its instance parameters from rng in a fixed order and
# returns (raw_batch_fn, x_opt); the objective offset is applied by
# instantiate() on top of the raw value.


def _f01(rng, d):
    x_opt = _uniform_xopt(rng, d)

    def raw(X):
        z = X - x_opt
        return np.sum(z * z, axis=1)

    return raw, x_opt


def _f02(rng, d):
    x_opt = _uniform_xopt(rng, d)
    scale = np.power(10.0, 6.0 * (np.arange(d) / (d - 1) if d > 1 else np.zeros(1)))

    def raw(X):
        z = _osz(X - x_opt)
        return np.sum(scale * z * z, axis=1)

    return raw, x_opt


def _f03(rng, d):
    x_opt = _uniform_xopt(rng, d)
    lam = _lam(10.0, d)

    def raw(X):
        z = lam * _asy(_osz(X - x_opt), 0.2)
        return 10.0 * (d - np.sum(np.cos(2.0 * np.pi * z), axis=1)) + np.sum(
            z * z, axis=1
        )

    return raw, x_opt


def _f04(rng, d):
    x_opt = _uniform_xopt(rng, d)
    base = np.power(10.0, 0.5 * (np.arange(d) / (d - 1) if d > 1 else np.zeros(1)))
    odd = (np.arange(d) % 2) == 0  # 1-based odd coordinates

    def raw(X):
        t = _osz(X - x_opt)
        s = np.where(odd & (t > 0.0), 10.0 * base, base)
        z = s * t
        f = 10.0 * (d - np.sum(np.cos(2.0 * np.pi * z), axis=1)) + np.sum(
            z * z, axis=1
        )
        return f + 100.0 * _pen(X)

    return raw, x_opt


def _f05(rng, d):
    # optimum at a corner of the box; the only function with x_opt at +-5
    x_opt = 5.0 * _sign_pattern(rng, d)
    idx = np.arange(d) / (d - 1) if d > 1 else np.zeros(1)
    s = np.sign(x_opt) * np.power(10.0, idx)

    def raw(X):
        z = np.where(X * x_opt < 25.0, X, x_opt)
        return np.sum(5.0 * np.abs(s) - s * z, axis=1)

    return raw, x_opt


def _f06(rng, d):
    x_opt = _uniform_xopt(rng, d)
    R = _rotation(rng, d)
    Q = _rotation(rng, d)
    M = Q @ np.diag(_lam(10.0, d)) @ R

    def raw(X):
        z = (X - x_opt) @ M.T
        s = np.where(z * x_opt > 0.0, 100.0, 1.0)
        return np.power(_osz(np.sum((s * z) ** 2, axis=1)), 0.9)

    return raw, x_opt


def _f07(rng, d):
    x_opt = _uniform_xopt(rng, d)
    R = _rotation(rng, d)
    Q = _rotation(rng, d)
    A = np.diag(_lam(10.0, d)) @ R
    scale = np.power(10.0, 2.0 * (np.arange(d) / (d - 1) if d > 1 else np.zeros(1)))

    def raw(X):
        zhat = (X - x_opt) @ A.T
        ztilde = np.where(
            np.abs(zhat) > 0.5,
            np.floor(0.5 + zhat),
            np.floor(0.5 + 10.0 * zhat) / 10.0,
        )
        z = ztilde @ Q.T
        inner = 100.0 * np.sum(scale * z * z, axis=1)
        return 0.1 * np.maximum(np.abs(zhat[:, 0]) / 1e4, inner) + _pen(X)

    return raw, x_opt


def _f08(rng, d):
    x_opt = 0.75 * _uniform_xopt(rng, d)  # keeps x_opt within [-3, 3]
    factor = max(1.0, np.sqrt(d) / 8.0)

    def raw(X):
        z = factor * (X - x_opt) + 1.0
        a = z[:, :-1]
        b = z[:, 1:]
        return np.sum(100.0 * (a * a - b) ** 2 + (a - 1.0) ** 2, axis=1)

    return raw, x_opt


def _f09(rng, d):
    R = _rotation(rng, d)
    factor = max(1.0, np.sqrt(d) / 8.0)
    x_opt = (R.T @ (0.5 * np.ones(d))) / factor

    def raw(X):
        z = factor * (X @ R.T) + 0.5
        a = z[:, :-1]
        b = z[:, 1:]
        return np.sum(100.0 * (a * a - b) ** 2 + (a - 1.0) ** 2, axis=1)

    return raw, x_opt


def _f10(rng, d):
    x_opt = _uniform_xopt(rng, d)
    R = _rotation(rng, d)
    scale = np.power(10.0, 6.0 * (np.arange(d) / (d - 1) if d > 1 else np.zeros(1)))

    def raw(X):
        z = _osz((X - x_opt) @ R.T)
        return np.sum(scale * z * z, axis=1)

    return raw, x_opt


def _f11(rng, d):
    x_opt = _uniform_xopt(rng, d)
    R = _rotation(rng, d)

    def raw(X):
        z = _osz((X - x_opt) @ R.T)
        zz = z * z
        return 1e6 * zz[:, 0] + np.sum(zz[:, 1:], axis=1)

    return raw, x_opt


def _f12(rng, d):
    x_opt = _uniform_xopt(rng, d)
    R = _rotation(rng, d)

    def raw(X):
        z = (_asy((X - x_opt) @ R.T, 0.5)) @ R.T
        zz = z * z
        return zz[:, 0] + 1e6 * np.sum(zz[:, 1:], axis=1)

    return raw, x_opt


def _f13(rng, d):
    x_opt = _uniform_xopt(rng, d)
    R = _rotation(rng, d)
    Q = _rotation(rng, d)
    M = Q @ np.diag(_lam(10.0, d)) @ R

    def raw(X):
        z = (X - x_opt) @ M.T
        zz = z * z
        return zz[:, 0] + 100.0 * np.sqrt(np.sum(zz[:, 1:], axis=1))

    return raw, x_opt


def _f14(rng, d):
    x_opt = _uniform_xopt(rng, d)
    R = _rotation(rng, d)
    expo = 2.0 + 4.0 * (np.arange(d) / (d - 1) if d > 1 else np.zeros(1))

    def raw(X):
        z = (X - x_opt) @ R.T
        return np.sqrt(np.sum(np.power(np.abs(z), expo), axis=1))

    return raw, x_opt


def _f15(rng, d):
    x_opt = _uniform_xopt(rng, d)
    R = _rotation(rng, d)
    Q = _rotation(rng, d)
    M = R @ np.diag(_lam(10.0, d)) @ Q

    def raw(X):
        z = _asy(_osz((X - x_opt) @ R.T), 0.2) @ M.T
        return 10.0 * (d - np.sum(np.cos(2.0 * np.pi * z), axis=1)) + np.sum(
            z * z, axis=1
        )

    return raw, x_opt


def _f16(rng, d):
    x_opt = _uniform_xopt(rng, d)
    R = _rotation(rng, d)
    Q = _rotation(rng, d)
    M = R @ np.diag(_lam(0.01, d)) @ Q
    k = np.arange(12)
    half_pow = np.power(0.5, k)
    three_pow = np.power(3.0, k)
    f0 = float(np.sum(half_pow * np.cos(np.pi * three_pow)))

    def raw(X):
        z = (_osz((X - x_opt) @ R.T)) @ M.T
        inner = np.sum(
            half_pow * np.cos(2.0 * np.pi * three_pow * (z[..., None] + 0.5)),
            axis=2,
        )
        f = 10.0 * np.power(np.sum(inner, axis=1) / d - f0, 3)
        return f + (10.0 / d) * _pen(X)

    return raw, x_opt


def _schaffers(rng, d, alpha):
    x_opt = _uniform_xopt(rng, d)
    R = _rotation(rng, d)
    Q = _rotation(rng, d)
    lam = _lam(alpha, d)

    def raw(X):
        z = lam * (_asy((X - x_opt) @ R.T, 0.5) @ Q.T)
        a = z[:, :-1]
        b = z[:, 1:]
        s = np.sqrt(a * a + b * b)
        inner = np.sqrt(s) + np.sqrt(s) * np.sin(50.0 * np.power(s, 0.2)) ** 2
        f = np.power(np.sum(inner, axis=1) / (d - 1.0), 2)
        return f + 10.0 * _pen(X)

    return raw, x_opt


def _f17(rng, d):
    return _schaffers(rng, d, 10.0)


def _f18(rng, d):
    return _schaffers(rng, d, 1000.0)


def _f19(rng, d):
    R = _rotation(rng, d)
    factor = max(1.0, np.sqrt(d) / 8.0)
    x_opt = (R.T @ np.ones(d)) * (0.5 / factor)

    def raw(X):
        z = factor * (X @ R.T) + 0.5
        a = z[:, :-1]
        b = z[:, 1:]
        s = 100.0 * (a * a - b) ** 2 + (a - 1.0) ** 2
        return 10.0 * np.sum(s / 4000.0 - np.cos(s), axis=1) / (d - 1.0) + 10.0

    return raw, x_opt


def _f20(rng, d):
    pattern = _sign_pattern(rng, d)
    x_opt = 4.2096874633 / 2.0 * pattern
    lam = _lam(10.0, d)
    two_abs = 2.0 * np.abs(x_opt)

    def raw(X):
        xhat = 2.0 * pattern * X
        zhat = xhat.copy()
        zhat[:, 1:] += 0.25 * (xhat[:, :-1] - two_abs[:-1])
        z = 100.0 * (lam * (zhat - two_abs) + two_abs)
        f = -np.sum(z * np.sin(np.sqrt(np.abs(z))), axis=1) / (100.0 * d)
        return f + 4.189828872724339 + 100.0 * _pen(z / 100.0)

    return raw, x_opt


def _gallagher(rng, d, n_peaks, top_alpha, loc_half_width, opt_scale):
    x_opt = opt_scale * _uniform_xopt(rng, d)
    R = _rotation(rng, d)
    w = np.where(
        np.arange(n_peaks) == 0,
        10.0,
        1.1 + 8.0 * (np.arange(n_peaks) - 1.0) / (n_peaks - 2.0),
    )
    alpha_set = np.power(
        1000.0, 2.0 * np.arange(n_peaks - 1) / (n_peaks - 2.0)
    )
    alphas = np.concatenate([[top_alpha], rng.permutation(alpha_set)])
    Y = rng.uniform(-loc_half_width, loc_half_width, size=(n_peaks, d))
    Y[0] = x_opt
    # per-peak diagonal conditioning with a random coordinate permutation
    C = np.empty((n_peaks, d))
    for i in range(n_peaks):
        diag = _lam(alphas[i], d) ** 2 / np.power(alphas[i], 0.25)
        C[i] = diag[rng.permutation(d)]

    def raw(X):
        XR = X @ R.T
        YR = Y @ R.T
        diff = XR[:, None, :] - YR[None, :, :]
        q = np.sum(diff * diff * C[None, :, :], axis=2)
        peaks = w * np.exp(-q / (2.0 * d))
        return np.power(_osz(10.0 - np.max(peaks, axis=1)), 2) + _pen(X)

    return raw, x_opt


def _f21(rng, d):
    return _gallagher(rng, d, 101, 1000.0, 5.0, 1.0)


def _f22(rng, d):
    return _gallagher(rng, d, 21, 1000.0 ** 2, 4.9, 0.98)


def _f23(rng, d):
    x_opt = _uniform_xopt(rng, d)
    R = _rotation(rng, d)
    Q = _rotation(rng, d)
    M = Q @ np.diag(_lam(100.0, d)) @ R
    j = np.power(2.0, np.arange(1, 33))

    def raw(X):
        z = (X - x_opt) @ M.T
        t = j * z[..., None]
        s = np.sum(np.abs(t - np.round(t)) / j, axis=2)
        prod = np.prod(1.0 + (np.arange(d) + 1.0) * s, axis=1)
        return (10.0 / d**2) * (np.power(prod, 10.0 / d**1.2) - 1.0) + _pen(X)

    return raw, x_opt


def _f24(rng, d):
    mu0 = 2.5
    s = 1.0 - 1.0 / (2.0 * np.sqrt(d + 20.0) - 8.2)
    mu1 = -np.sqrt((mu0**2 - 1.0) / s)
    pattern = _sign_pattern(rng, d)
    x_opt = (mu0 / 2.0) * pattern
    R = _rotation(rng, d)
    Q = _rotation(rng, d)
    M = Q @ np.diag(_lam(100.0, d)) @ R

    def raw(X):
        xhat = 2.0 * pattern * X
        z = (xhat - mu0) @ M.T
        s1 = np.sum((xhat - mu0) ** 2, axis=1)
        s2 = np.sum((xhat - mu1) ** 2, axis=1)
        s3 = np.sum(np.cos(2.0 * np.pi * z), axis=1)
        return np.minimum(s1, d + s * s2) + 10.0 * (d - s3) + 1e4 * _pen(X)

    return raw, x_opt


_BUILDERS: dict[int, Callable] = {
    1: _f01, 2: _f02, 3: _f03, 4: _f04, 5: _f05, 6: _f06, 7: _f07, 8: _f08,
    9: _f09, 10: _f10, 11: _f11, 12: _f12, 13: _f13, 14: _f14, 15: _f15,
    16: _f16, 17: _f17, 18: _f18, 19: _f19, 20: _f20, 21: _f21, 22: _f22,
    23: _f23, 24: _f24,
}


def instantiate(
    function_id: int, instance_id: int, dim: int
) -> tuple[ObjectiveFunction, BBOBInstance]:
    """Build a deterministic BBOB instance on [-5, 5]^dim."""
    if function_id not in _BUILDERS:
        raise ValueError(f"function_id must be in 1..24, got {function_id}")
    if instance_id < 1:
        raise ValueError(f"instance_id must be >= 1, got {instance_id}")
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    rng = np.random.default_rng([function_id, instance_id, dim])
    raw, x_opt = _BUILDERS[function_id](rng, dim)
    offset = round(float(rng.uniform(-100.0, 100.0)), 2)
    f_opt = offset + float(raw(x_opt.reshape(1, -1))[0])

    def batch(X):
        return raw(X) + offset

    domain = Domain.symmetric(dim, DOMAIN_HALF_WIDTH)
    name = f"bbob_f{function_id:02d}_i{instance_id:02d}_d{dim}"
    fn = ObjectiveFunction(name, domain, batch)
    inst = BBOBInstance(function_id, instance_id, dim, x_opt, f_opt)
    return fn, inst
