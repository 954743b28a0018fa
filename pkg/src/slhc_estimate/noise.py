"""Single-parameter exponential-family measurement models.

A model describes densities p(x | theta) = h(x) exp(C(theta) T(x) - A(theta))
on an open support, together with a sampler, the per-measurement MLE
theta_hat(x), and analytic derivative hooks that tests cross-check by
finite differences.  The reference instance is the log-normal model with
location ln(theta) and fixed scale sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

ArrayLike = "float | np.ndarray"


@dataclass(frozen=True)
class NoiseModel:
    name: str
    log_h: Callable
    suff_stat: Callable
    natural_map: Callable
    log_partition: Callable
    mle: Callable
    sampler: Callable
    d_log_h: Callable
    d_suff_stat: Callable
    d_natural_map: Callable
    d_log_partition: Callable
    support: tuple[float, float] = (0.0, math.inf)
    theta_domain: tuple[float, float] = (0.0, math.inf)
    # closed-form MLE for a (num_samples, num_edges) stack, when one exists
    multi_mle: Optional[Callable] = None
    params: dict = field(default_factory=dict)


def _check_support(m: NoiseModel, x) -> None:
    lo, hi = m.support
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr <= lo) or np.any(arr >= hi):
        raise ValueError(
            f"measurement outside the open support ({lo}, {hi}) of {m.name}")


def _check_theta(m: NoiseModel, theta) -> None:
    lo, hi = m.theta_domain
    arr = np.asarray(theta, dtype=np.float64)
    if np.any(arr <= lo) or np.any(arr >= hi):
        raise ValueError(
            f"parameter outside the open domain ({lo}, {hi}) of {m.name}")


def log_density(m: NoiseModel, theta, x):
    """log p(x | theta) = log h(x) + C(theta) T(x) - A(theta)."""
    _check_theta(m, theta)
    _check_support(m, x)
    return m.log_h(x) + m.natural_map(theta) * m.suff_stat(x) - m.log_partition(theta)


def sample(m: NoiseModel, theta, rng: np.random.Generator, size=None):
    """Draw from p(. | theta).  theta may be an array; size, when given,
    prepends sample dimensions."""
    _check_theta(m, theta)
    return m.sampler(theta, size, rng)


def mle_theta(m: NoiseModel, x):
    """Parameter value maximizing the density of a single measurement."""
    _check_support(m, x)
    return m.mle(x)


def log_g(m: NoiseModel, x):
    """Profile log-density: the log-density of x at its own MLE."""
    _check_support(m, x)
    return log_density(m, m.mle(x), x)


def multi_sample_mle(m: NoiseModel, samples: np.ndarray) -> np.ndarray:
    """Joint MLE per column of a (num_samples, num_edges) stack.

    A single row short-circuits to the per-measurement MLE.  Models with
    a closed form use it; otherwise the summed log-likelihood is
    maximized by golden-section search on the bracket spanned by the
    per-sample MLEs.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[0] < 1:
        raise ValueError("need a (num_samples, num_edges) array with at least one row")
    _check_support(m, samples)
    if samples.shape[0] == 1:
        return np.asarray(m.mle(samples[0]), dtype=np.float64)
    if m.multi_mle is not None:
        return np.asarray(m.multi_mle(samples), dtype=np.float64)
    per_sample = np.asarray(m.mle(samples), dtype=np.float64)
    out = np.empty(samples.shape[1])
    for col in range(samples.shape[1]):
        xs = samples[:, col]
        lo = float(per_sample[:, col].min())
        hi = float(per_sample[:, col].max())
        if lo == hi:
            out[col] = lo
            continue
        out[col] = _golden_max(
            lambda t: float(np.sum(log_density(m, t, xs))), lo, hi)
    return out


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f: Callable[[float], float], lo: float, hi: float,
                tol: float = 1e-10) -> float:
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol * max(1.0, abs(a), abs(b)):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


@dataclass(frozen=True)
class MonotonicityReport:
    """Grid evidence for the two conditions under which the tree-profile
    estimator reduces to single linkage: the per-measurement MLE strictly
    increases and the profile density strictly decreases."""

    mle_strictly_increasing: bool
    log_g_strictly_decreasing: bool
    mle_is_identity: bool
    grid_lo: float
    grid_hi: float

    @property
    def reduces_to_single_linkage(self) -> bool:
        return self.mle_strictly_increasing and self.log_g_strictly_decreasing


def monotonicity_report(m: NoiseModel, grid) -> MonotonicityReport:
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError("need a 1-d grid with at least two points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    _check_support(m, grid)
    theta_hat = np.asarray(m.mle(grid), dtype=np.float64)
    profile = np.asarray(log_g(m, grid), dtype=np.float64)
    return MonotonicityReport(
        mle_strictly_increasing=bool(np.all(np.diff(theta_hat) > 0)),
        log_g_strictly_decreasing=bool(np.all(np.diff(profile) < 0)),
        mle_is_identity=bool(np.all(theta_hat == grid)),
        grid_lo=float(grid[0]),
        grid_hi=float(grid[-1]),
    )


def normalization_residual(m: NoiseModel, theta: float) -> float:
    """|quadrature of exp(log_density) over the support - 1|."""
    from scipy.integrate import quad

    lo, hi = m.support
    total, _ = quad(lambda x: math.exp(float(log_density(m, theta, x))),
                    lo, hi, limit=200)
    return abs(total - 1.0)


def profile_mean_residual(m: NoiseModel, theta: float,
                          rng: np.random.Generator, draws: int = 100_000) -> float:
    """Deviation of the empirical mean of T(x) from its model value
    dA/dtheta / dC/dtheta at theta, in units of the standard error."""
    xs = sample(m, theta, rng, size=draws)
    t = np.asarray(m.suff_stat(xs), dtype=np.float64)
    expected = m.d_log_partition(theta) / m.d_natural_map(theta)
    se = t.std(ddof=1) / math.sqrt(draws)
    return abs(t.mean() - expected) / se


def lognormal(sigma: float) -> NoiseModel:
    """Measurements x = theta * exp(sigma Z), Z standard normal.

    T(x) = ln x, C(theta) = ln(theta)/sigma^2, A(theta) = ln^2(theta)/(2 sigma^2),
    h(x) = exp(-ln^2(x)/(2 sigma^2)) / (sqrt(2 pi) sigma x).  The MLE of a
    single measurement is the measurement itself, and the joint MLE of a
    stack is the per-edge geometric mean.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    s2 = sigma * sigma
    log_norm = math.log(sigma * math.sqrt(2.0 * math.pi))

    def _geometric_mean(samples):
        return np.exp(np.mean(np.log(samples), axis=0))

    return NoiseModel(
        name="lognormal",
        log_h=lambda x: -np.log(x) ** 2 / (2.0 * s2) - np.log(x) - log_norm,
        suff_stat=np.log,
        natural_map=lambda t: np.log(t) / s2,
        log_partition=lambda t: np.log(t) ** 2 / (2.0 * s2),
        mle=lambda x: np.asarray(x, dtype=np.float64) + 0.0,
        sampler=lambda t, size, rng: rng.lognormal(
            mean=np.log(t), sigma=sigma,
            size=size if size is None else _broadcast_size(size, t)),
        d_log_h=lambda x: -np.log(x) / (s2 * x) - 1.0 / x,
        d_suff_stat=lambda x: 1.0 / np.asarray(x, dtype=np.float64),
        d_natural_map=lambda t: 1.0 / (s2 * t),
        d_log_partition=lambda t: np.log(t) / (s2 * t),
        multi_mle=_geometric_mean,
        params={"sigma": sigma},
    )


def _broadcast_size(size, theta):
    shape = np.shape(theta)
    if isinstance(size, int):
        return (size,) + shape if shape else (size,)
    return tuple(size) + shape


MODEL_FACTORIES = {
    "lognormal": lognormal,
}


def get_model(name: str, **params) -> NoiseModel:
    try:
        factory = MODEL_FACTORIES[name]
    except KeyError:
        raise ValueError(
            f"unknown model {name!r}; available: {sorted(MODEL_FACTORIES)}") from None
    return factory(**params)
