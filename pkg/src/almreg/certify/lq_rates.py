import math
from dataclasses import asdict, dataclass
from typing import Dict

import numpy as np

from ..alm.state import AlmState
from ..operators.base import BaseOperator, as_vector
from ..utils.exceptions import ConfigError, DomainError
from .source import SourceCertificate

__all__ = ['LqRateInputs', 'lq_norm_rate_inputs', 'lq_norm', 'bregman_lower_constant', 'bregman_radius']

DEFAULT_B = 0.5


def lq_norm(x, q: float) -> float:
    x = np.abs(np.asarray(x, dtype=np.float64).ravel())
    if math.isinf(q):
        return float(np.max(x)) if x.size else 0.0
    return float(np.sum(x ** q) ** (1.0 / q))


def _check(q: float, b: float) -> None:
    if not 1.0 < q <= 2.0:
        raise DomainError(f"q must lie in (1, 2], got {q}")
    if not 0.0 < b < 1.0:
        raise DomainError(f"b must lie in (0, 1), got {b}")


def bregman_lower_constant(u, q: float, b: float = DEFAULT_B) -> float:
    """c_q = b q (q - 1)/2 ||u||_q^(q - 2) in D_J(v, u) >= c_q ||v - u||_q^2."""
    _check(q, b)
    size = lq_norm(u, q)
    if size == 0.0:
        raise DomainError("the lower estimate needs u != 0")
    return b * q * (q - 1.0) / 2.0 * size ** (q - 2.0)


def bregman_radius(u, q: float, b: float = DEFAULT_B) -> float:
    """Distance ||v - u||_q below which the lower estimate is applied: 3 (1 - b) ||u||_q / (2 - q)."""
    _check(q, b)
    return math.inf if q == 2.0 else 3.0 * (1.0 - b) * lq_norm(u, q) / (2.0 - q)


@dataclass
class LqRateInputs:
    u_error: float
    xi_error: float
    q: float
    r: float
    c_q: float
    radius: float
    inside_radius: bool
    bregman: float
    lower_bound: float

    @property
    def lower_bound_ok(self) -> bool:
        """D_J(u_Gamma, u†) >= c_q ||u_Gamma - u†||_q^2; only meaningful inside the radius."""
        return not self.inside_radius or self.bregman >= self.lower_bound * (1.0 - 1e-9)

    def to_dict(self) -> Dict[str, object]:
        return {**asdict(self), 'lower_bound_ok': self.lower_bound_ok,
                'note': None if self.inside_radius else 'outside the radius of the Bregman lower estimate'}


def lq_norm_rate_inputs(cert: SourceCertificate, state: AlmState, K: BaseOperator, q: float,
                        b: float = DEFAULT_B) -> LqRateInputs:
    """(||u_Gamma - u†||_q, ||K* p_Gamma - K* p†||_r) with r = q/(q - 1), plus the Bregman lower-estimate data."""
    if cert.u_dagger.size != state.u.size:
        raise ConfigError("state and certificate live on different domains")
    u_dagger = cert.u_dagger
    c_q = bregman_lower_constant(u_dagger, q, b)
    radius = bregman_radius(u_dagger, q, b)
    diff = as_vector(state.u, u_dagger.size) - u_dagger
    u_error = lq_norm(diff, q)
    r = q / (q - 1.0)
    xi_error = lq_norm(K.adjoint_apply(state.p) - cert.xi, r)

    penalty = float(np.sum(np.abs(state.u) ** q)) - float(np.sum(np.abs(u_dagger) ** q))
    bregman = penalty - float(np.dot(cert.xi, diff))
    return LqRateInputs(
        u_error=u_error,
        xi_error=xi_error,
        q=q,
        r=r,
        c_q=c_q,
        radius=radius,
        inside_radius=u_error < radius,
        bregman=bregman,
        lower_bound=c_q * u_error ** 2,
    )
