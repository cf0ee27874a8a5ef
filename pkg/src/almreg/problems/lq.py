import numpy as np

from ..certify.source import certify_source_condition
from ..operators.base import BaseOperator
from ..operators.custom import IdentityOperator
from ..penalties.lq import LqPenalty
from ..utils.exceptions import ConfigError
from .base import ProblemInstance
from .quadratic import gaussian_operator

__all__ = ['gen_problem_lq']


def gen_problem_lq(m: int, n: int, q: float, seed: int, K_kind: str = 'identity') -> ProblemInstance:
    """Draw p_dagger, set xi = K* p_dagger and u_dagger = sign(xi)(|xi|/q)^(1/(q-1)), the point where
    q sign(u)|u|^(q-1) = xi. Certified by construction for 1 < q <= 2."""
    if not 1.0 < q <= 2.0:
        raise ConfigError(f"lq problems need q in (1, 2], got {q}")
    rng = np.random.default_rng(seed)
    if K_kind == 'identity':
        if m != n:
            raise ConfigError(f"identity operator needs m == n, got {m} and {n}")
        K: BaseOperator = IdentityOperator(n)
    elif K_kind == 'gaussian':
        K = gaussian_operator(m, n, rng)
    else:
        raise ConfigError(f"lq problems support K_kind identity or gaussian, got {K_kind}")

    p = rng.standard_normal(m)
    xi = K.adjoint_apply(p)
    u_dagger = np.sign(xi) * (np.abs(xi) / q) ** (1.0 / (q - 1.0))
    g = K.apply(u_dagger)
    pen = LqPenalty(q)
    cert = certify_source_condition(K, pen, u_dagger, p, g=g)
    return ProblemInstance(K=K, penalty=pen, g=g, u_dagger=u_dagger, seed=seed, label=f"lq{q:g}_{K_kind}_{m}x{n}",
                           p_dagger=p, certificate=cert)
