from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Literal, Optional, Tuple

import numpy as np

from ..operators.base import BaseOperator, as_vector, inner
from ..utils.exceptions import ConfigError

__all__ = ['BasePenalty', 'SubproblemSpec', 'InnerDiagnostics', 'Subgradient']


@dataclass(frozen=True)
class SubproblemSpec:
    """argmin_u (tau/2)||K u - b||^2 + J(u), optionally warm-started at u0."""
    K: BaseOperator
    b: np.ndarray
    tau: float
    tol: float
    max_inner_iters: int
    u0: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.tau > 0:
            raise ConfigError(f"tau must be positive, got {self.tau}")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if int(self.max_inner_iters) < 1:
            raise ConfigError(f"max_inner_iters must be >= 1, got {self.max_inner_iters}")
        object.__setattr__(self, 'b', as_vector(self.b, self.K.dim_out))
        if self.u0 is not None:
            object.__setattr__(self, 'u0', as_vector(self.u0, self.K.dim_in))

    def initial_point(self) -> np.ndarray:
        return np.zeros(self.K.dim_in) if self.u0 is None else self.u0.copy()


@dataclass(frozen=True)
class InnerDiagnostics:
    solver: str
    iterations: int
    measure: float
    inexact: bool


@dataclass(frozen=True)
class Subgradient:
    xi: np.ndarray
    origin: Literal['dual_update', 'explicit'] = 'explicit'


class BasePenalty(ABC):
    """Convex, proper, nonnegative penalty J with its conjugate and subproblem solver."""

    name: str = 'base'
    default_tol: float = 1e-8

    @property
    def dim(self) -> Optional[int]:
        """Domain dimension when the penalty fixes one."""
        return None

    def check_dim(self, u) -> np.ndarray:
        return as_vector(u, self.dim)

    def __call__(self, u) -> float:
        return self.evaluate(u)

    @abstractmethod
    def evaluate(self, u) -> float:
        raise NotImplementedError

    @abstractmethod
    def conjugate(self, xi) -> Optional[float]:
        """J*(xi). `None` means no closed form is available for this penalty."""
        raise NotImplementedError

    @abstractmethod
    def solve_subproblem(self, spec: SubproblemSpec) -> Tuple[np.ndarray, InnerDiagnostics]:
        raise NotImplementedError

    @property
    def has_conjugate(self) -> bool:
        return True

    def fenchel_gap(self, u, xi) -> Optional[float]:
        u = self.check_dim(u)
        xi = self.check_dim(xi)
        conj = self.conjugate(xi)
        if conj is None:
            return None
        return self.evaluate(u) + conj - inner(xi, u)

    def subproblem_objective(self, spec: SubproblemSpec, u) -> float:
        residual = spec.K.apply(u) - spec.b
        return 0.5 * spec.tau * float(np.dot(residual, residual)) + self.evaluate(u)

    def describe(self) -> dict:
        return {'name': self.name}
