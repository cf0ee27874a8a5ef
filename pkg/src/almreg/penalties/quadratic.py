from typing import Optional, Tuple

import numpy as np
from loguru import logger
from scipy.sparse.linalg import LinearOperator, cg

from ..operators.base import BaseOperator, norm
from ..operators.custom import DiagonalOperator, IdentityOperator
from ..utils.exceptions import ConfigError
from .base import BasePenalty, InnerDiagnostics, SubproblemSpec

__all__ = ['QuadraticPenalty']


class QuadraticPenalty(BasePenalty):
    """J(u) = 1/2 ||L u||^2 with L = identity when omitted."""

    name = 'quadratic'
    default_tol = 1e-10

    def __init__(self, L: Optional[BaseOperator] = None) -> None:
        self.L = L

    @property
    def dim(self) -> Optional[int]:
        return None if self.L is None else self.L.dim_in

    def _apply_L(self, u: np.ndarray) -> np.ndarray:
        return u if self.L is None else self.L.apply(u)

    def _apply_LtL(self, u: np.ndarray) -> np.ndarray:
        return u if self.L is None else self.L.adjoint_apply(self.L.apply(u))

    def evaluate(self, u) -> float:
        Lu = self._apply_L(self.check_dim(u))
        return 0.5 * float(np.dot(Lu, Lu))

    def subgradient(self, u) -> np.ndarray:
        """The gradient L*L u; J is differentiable so the subdifferential is a singleton."""
        return self._apply_LtL(self.check_dim(u))

    @property
    def has_conjugate(self) -> bool:
        if self.L is None or isinstance(self.L, IdentityOperator):
            return True
        return isinstance(self.L, DiagonalOperator) and bool(np.all(self.L.weights != 0))

    def conjugate(self, xi) -> Optional[float]:
        xi = self.check_dim(xi)
        if self.L is None or isinstance(self.L, IdentityOperator):
            return 0.5 * float(np.dot(xi, xi))
        if self.has_conjugate:
            return 0.5 * float(np.sum(xi ** 2 / self.L.weights ** 2))
        return None

    def solve_subproblem(self, spec: SubproblemSpec) -> Tuple[np.ndarray, InnerDiagnostics]:
        K, tau = spec.K, spec.tau
        if self.dim is not None and self.dim != K.dim_in:
            raise ConfigError(f"L acts on length {self.dim}, K on length {K.dim_in}")

        n = K.dim_in
        normal = LinearOperator(
            shape=(n, n), dtype=np.float64,
            matvec=lambda x: tau * K.adjoint_apply(K.apply(x)) + self._apply_LtL(np.ravel(x)),
        )
        rhs = tau * K.adjoint_apply(spec.b)
        iterations = [0]

        def count(_):
            iterations[0] += 1

        u, info = cg(normal, rhs, x0=spec.initial_point(), rtol=spec.tol, atol=0.0,
                     maxiter=spec.max_inner_iters, callback=count)

        rhs_norm = norm(rhs)
        residual = norm(normal.matvec(u) - rhs)
        measure = residual / rhs_norm if rhs_norm > 0 else residual
        inexact = info != 0
        if inexact:
            logger.warning(f"CG stopped after {iterations[0]} iterations at relative residual {measure:.3e}")
        return u, InnerDiagnostics(solver='cg', iterations=iterations[0], measure=measure, inexact=inexact)

    def describe(self) -> dict:
        return {'name': self.name, 'L': None if self.L is None else repr(self.L)}
