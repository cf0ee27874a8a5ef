import numpy as np
from loguru import logger

from ..utils.exceptions import ConfigError
from .base import BaseOperator, inner, norm

__all__ = ['adjoint_check', 'operator_norm_estimate']

DEFAULT_NORM_ITERS = 200


def adjoint_check(op: BaseOperator, trials: int = 100, seed: int = 0) -> float:
    """Largest relative mismatch of <Ku, w> and <u, K*w> over random Gaussian pairs."""
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    eps = np.finfo(np.float64).eps
    worst = 0.0
    for _ in range(trials):
        u = rng.standard_normal(op.dim_in)
        w = rng.standard_normal(op.dim_out)
        Ku = op.apply(u)
        error = abs(inner(Ku, w) - inner(u, op.adjoint_apply(w))) / (norm(Ku) * norm(w) + eps)
        worst = max(worst, error)
    logger.debug(f"adjoint check on {op}: max relative error {worst:.3e} over {trials} trials")
    return worst


def operator_norm_estimate(op: BaseOperator, iters: int = DEFAULT_NORM_ITERS, seed: int = 0) -> float:
    """Power iteration on K*K. Returns ||K x_k|| for the normalized iterate x_k.

    The estimate never exceeds the largest singular value and does not decrease with more iterations.
    """
    if iters < 10:
        raise ConfigError(f"Power iteration needs iters >= 10, got {iters}")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(op.dim_in)
    x /= norm(x)
    estimate = 0.0
    for _ in range(iters):
        y = op.apply(x)
        estimate = norm(y)
        z = op.adjoint_apply(y)
        z_norm = norm(z)
        if z_norm == 0.0:
            break
        x = z / z_norm
    return estimate
