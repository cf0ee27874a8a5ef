from typing import Literal, Sequence, Tuple

import numpy as np
from loguru import logger

from ..certify.source import certify_source_condition
from ..operators.base import BaseOperator
from ..operators.custom import IdentityOperator
from ..penalties.lq import LqPenalty
from ..utils.exceptions import ConfigError, ProblemGenerationError
from .base import ProblemInstance
from .quadratic import gaussian_operator

__all__ = ['gen_problem_sparse', 'THETA_MARGIN']

THETA_MARGIN = 1e-3
GEOMETRIC_RATIO = 0.9


def _magnitudes(rng: np.random.Generator, s: int, kind: str, magnitude_range: Tuple[float, float]) -> np.ndarray:
    low, high = magnitude_range
    if not 0 < low <= high:
        raise ConfigError(f"magnitude range must satisfy 0 < low <= high, got {magnitude_range}")
    if kind == 'uniform':
        return rng.uniform(low, high, size=s)
    if kind == 'geometric':
        return high * GEOMETRIC_RATIO ** np.arange(s)
    raise ConfigError(f"magnitudes must be uniform or geometric, got {kind}")


def gen_problem_sparse(m: int, n: int, support_size: int, seed: int, max_resample: int = 50,
                       K_kind: Literal['gaussian', 'identity'] = 'gaussian',
                       magnitudes: Literal['uniform', 'geometric'] = 'uniform',
                       magnitude_range: Sequence[float] = (1.5, 2.5)) -> ProblemInstance:
    """Sparse u_dagger with a dual certificate p_dagger = K_I (K_I^T K_I)^-1 sigma, so (K* p_dagger)_I = sigma.

    Gaussian operators (unit columns) are redrawn until the off-support magnitude theta stays below 1 - 1e-3.
    """
    s = int(support_size)
    if not 1 <= s <= m <= n:
        raise ConfigError(f"sparse problems need 1 <= s <= m <= n, got s={s}, m={m}, n={n}")
    if K_kind not in ('gaussian', 'identity'):
        raise ConfigError(f"sparse problems support K_kind identity or gaussian, got {K_kind}")
    if K_kind == 'identity' and m != n:
        raise ConfigError(f"identity operator needs m == n, got {m} and {n}")
    rng = np.random.default_rng(seed)

    best_theta = np.inf
    for attempt in range(max(1, max_resample)):
        support = np.sort(rng.choice(n, size=s, replace=False))
        signs = rng.choice([-1.0, 1.0], size=s)
        if K_kind == 'identity':
            K: BaseOperator = IdentityOperator(n)
            p = np.zeros(n)
            p[support] = signs
        else:
            K = gaussian_operator(m, n, rng, normalize='columns')
            K_I = K.matrix[:, support]
            p = K_I @ np.linalg.solve(K_I.T @ K_I, signs)
        xi = K.adjoint_apply(p)
        off = np.delete(np.abs(xi), support)
        theta = float(np.max(off)) if off.size else 0.0
        best_theta = min(best_theta, theta)
        if theta < 1.0 - THETA_MARGIN:
            break
        logger.debug(f"sparse certificate attempt {attempt + 1}: theta={theta:.4f}, resampling")
    else:
        raise ProblemGenerationError(f"no certificate with theta < {1.0 - THETA_MARGIN} after {max_resample} draws",
                                     theta=best_theta)

    u_dagger = np.zeros(n)
    u_dagger[support] = signs * _magnitudes(rng, s, magnitudes, tuple(magnitude_range))
    g = K.apply(u_dagger)
    pen = LqPenalty(1.0)
    cert = certify_source_condition(K, pen, u_dagger, p, g=g)
    return ProblemInstance(K=K, penalty=pen, g=g, u_dagger=u_dagger, seed=seed,
                           label=f"sparse_{K_kind}_{m}x{n}_s{s}", p_dagger=p, certificate=cert,
                           extras={'theta': theta, 'support': support.tolist()})
