import math
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from ..operators.base import norm
from ..utils.exceptions import ConfigError
from .base import BasePenalty, InnerDiagnostics, SubproblemSpec
from .prox import prox_power

__all__ = ['LqPenalty']

BALL_TOL = 1e-10
NORM_SAFETY = 1.01


class LqPenalty(BasePenalty):
    """J(u) = sum_k |u_k|^q for 1 <= q <= 2, without the 1/q factor."""

    name = 'lq'
    default_tol = 1e-8

    def __init__(self, q: float = 1.0) -> None:
        q = float(q)
        if not 1.0 <= q <= 2.0:
            raise ConfigError(f"lq penalty needs q in [1, 2], got {q}")
        self.q = q

    @property
    def r(self) -> float:
        """Conjugate exponent q/(q-1); infinite for q = 1."""
        return math.inf if self.q == 1.0 else self.q / (self.q - 1.0)

    def evaluate(self, u) -> float:
        u = self.check_dim(u)
        if self.q == 1.0:
            return float(np.sum(np.abs(u)))
        return float(np.sum(np.abs(u) ** self.q))

    def subgradient(self, u) -> Optional[np.ndarray]:
        """q sign(u)|u|^(q-1); `None` for q = 1 where the subdifferential is set-valued at zeros."""
        if self.q == 1.0:
            return None
        u = self.check_dim(u)
        return self.q * np.sign(u) * np.abs(u) ** (self.q - 1.0)

    def conjugate(self, xi) -> Optional[float]:
        xi = self.check_dim(xi)
        if self.q == 1.0:
            return 0.0 if float(np.max(np.abs(xi))) <= 1.0 + BALL_TOL else math.inf
        # sup_t (xi t - |t|^q) = (q - 1) q^(-r) |xi|^r per coordinate
        r = self.r
        return float((self.q - 1.0) * self.q ** (-r) * np.sum(np.abs(xi) ** r))

    def prox(self, z, lam: float) -> np.ndarray:
        return prox_power(z, lam, self.q)

    def solve_subproblem(self, spec: SubproblemSpec) -> Tuple[np.ndarray, InnerDiagnostics]:
        """FISTA with gradient-based adaptive restart on (tau/2)||K u - b||^2 + J(u)."""
        K, b, tau = spec.K, spec.b, spec.tau
        K_norm = K.norm() if K.norm_hint is not None else NORM_SAFETY * K.norm()
        if K_norm == 0.0:
            u = np.zeros(K.dim_in)
            return u, InnerDiagnostics(solver='fista', iterations=0, measure=0.0, inexact=False)
        step = 1.0 / (tau * K_norm ** 2)

        def gradient(x):
            return tau * K.adjoint_apply(K.apply(x) - b)

        def fixed_point_measure(x):
            return norm(x - self.prox(x - step * gradient(x), step)) / max(1.0, norm(x))

        u = spec.initial_point()
        measure = fixed_point_measure(u)
        best_u, best_measure = u.copy(), measure
        y = u.copy()
        momentum = 1.0
        iterations = 0
        while measure > spec.tol and iterations < spec.max_inner_iters:
            iterations += 1
            u_next = self.prox(y - step * gradient(y), step)
            if np.dot(y - u_next, u_next - u) > 0:
                momentum = 1.0
                y = u_next.copy()
            else:
                momentum_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * momentum ** 2))
                y = u_next + ((momentum - 1.0) / momentum_next) * (u_next - u)
                momentum = momentum_next
            u = u_next
            measure = fixed_point_measure(u)
            if measure < best_measure:
                best_u, best_measure = u.copy(), measure

        inexact = best_measure > spec.tol
        if inexact:
            logger.warning(f"FISTA hit {spec.max_inner_iters} iterations at fixed-point residual {best_measure:.3e}")
        return best_u, InnerDiagnostics(solver='fista', iterations=iterations, measure=best_measure, inexact=inexact)

    def describe(self) -> dict:
        return {'name': self.name, 'q': self.q}
