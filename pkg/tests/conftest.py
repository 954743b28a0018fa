import math

import numpy as np
import pytest

from slhc_estimate.edges import EdgeVector, num_edges
from slhc_estimate.harness import sample_ground_truth_metric
from slhc_estimate.noise import NoiseModel
from slhc_estimate.slhc import single_linkage


@pytest.fixture
def rng():
    return np.random.default_rng(1729)


def random_weights(n, rng, lo=0.0, hi=1.0):
    return EdgeVector(n, rng.uniform(lo, hi, size=num_edges(n)))


def random_metric(n, rng, box=100.0):
    batch = {3: 8, 4: 32, 5: 64, 6: 512, 7: 4096}.get(n, 64)
    return sample_ground_truth_metric(n, box, rng, batch=batch)


def random_ultrametric(n, rng, box=100.0):
    return single_linkage(random_metric(n, rng, box))


def square_mle_model() -> NoiseModel:
    """Valid exponential family whose single-measurement MLE is x^2 and
    whose profile log-density is -ln(x) - ln(sqrt(pi)), strictly
    decreasing.  Measurements are log-normal with location ln(theta)/2
    and scale 1/sqrt(2)."""
    log_norm = 0.5 * math.log(math.pi)
    return NoiseModel(
        name="square-mle",
        log_h=lambda x: -np.log(x) - np.log(x) ** 2 - log_norm,
        suff_stat=np.log,
        natural_map=np.log,
        log_partition=lambda t: np.log(t) ** 2 / 4.0,
        mle=lambda x: np.asarray(x, dtype=np.float64) ** 2,
        sampler=lambda t, size, rng: rng.lognormal(
            mean=np.log(t) / 2.0, sigma=math.sqrt(0.5),
            size=_size(size, t)),
        d_log_h=lambda x: -1.0 / x - 2.0 * np.log(x) / x,
        d_suff_stat=lambda x: 1.0 / np.asarray(x, dtype=np.float64),
        d_natural_map=lambda t: 1.0 / np.asarray(t, dtype=np.float64),
        d_log_partition=lambda t: np.log(t) / (2.0 * t),
    )


def _size(size, theta):
    shape = np.shape(theta)
    if size is None:
        return shape if shape else None
    if isinstance(size, int):
        return (size,) + shape
    return tuple(size) + shape


def constant_mle_model() -> NoiseModel:
    """Degenerate hooks with a constant MLE, for exercising the
    monotonicity report's failure path.  Not a normalized density."""
    return NoiseModel(
        name="constant-mle",
        log_h=lambda x: -np.asarray(x, dtype=np.float64),
        suff_stat=lambda x: np.asarray(x, dtype=np.float64),
        natural_map=lambda t: np.asarray(t, dtype=np.float64),
        log_partition=lambda t: np.asarray(t, dtype=np.float64) ** 2,
        mle=lambda x: np.ones_like(np.asarray(x, dtype=np.float64)),
        sampler=lambda t, size, rng: rng.exponential(1.0, size=_size(size, t)),
        d_log_h=lambda x: -np.ones_like(np.asarray(x, dtype=np.float64)),
        d_suff_stat=lambda x: np.ones_like(np.asarray(x, dtype=np.float64)),
        d_natural_map=lambda t: np.ones_like(np.asarray(t, dtype=np.float64)),
        d_log_partition=lambda t: 2.0 * np.asarray(t, dtype=np.float64),
    )
