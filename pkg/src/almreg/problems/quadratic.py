from typing import Optional, Sequence

import numpy as np
from scipy.linalg import svdvals

from ..certify.source import certify_source_condition
from ..operators.base import BaseOperator
from ..operators.custom import DenseOperator, IdentityOperator
from ..penalties.quadratic import QuadraticPenalty
from ..utils.exceptions import ConfigError
from .base import ProblemInstance

__all__ = ['gen_problem_quadratic', 'gaussian_operator']


def gaussian_operator(m: int, n: int, rng: np.random.Generator, normalize: str = 'spectral') -> DenseOperator:
    """Gaussian m x n matrix scaled to unit spectral norm, or with unit-norm columns."""
    matrix = rng.standard_normal((m, n))
    if normalize == 'columns':
        matrix /= np.linalg.norm(matrix, axis=0, keepdims=True)
    else:
        matrix /= svdvals(matrix)[0]
    return DenseOperator(matrix)


def gen_problem_quadratic(m: int, n: int, seed: int, K_kind: str = 'gaussian',
                          p_dagger: Optional[Sequence[float]] = None) -> ProblemInstance:
    """u_dagger = K* p_dagger is the minimum-norm solution for J = 1/2 ||u||^2, certified by construction."""
    if m < 1 or n < 1:
        raise ConfigError(f"dimensions must be positive, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    if K_kind == 'identity':
        if m != n:
            raise ConfigError(f"identity operator needs m == n, got {m} and {n}")
        K: BaseOperator = IdentityOperator(n)
    elif K_kind == 'gaussian':
        K = gaussian_operator(m, n, rng)
    else:
        raise ConfigError(f"quadratic problems support K_kind identity or gaussian, got {K_kind}")

    p = rng.standard_normal(m) if p_dagger is None else np.asarray(p_dagger, dtype=np.float64)
    pen = QuadraticPenalty()
    u_dagger = K.adjoint_apply(p)
    g = K.apply(u_dagger)
    cert = certify_source_condition(K, pen, u_dagger, p, g=g)
    return ProblemInstance(K=K, penalty=pen, g=g, u_dagger=u_dagger, seed=seed, label=f"quadratic_{K_kind}_{m}x{n}",
                           p_dagger=cert.p_dagger, certificate=cert)
