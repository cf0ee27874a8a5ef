from functools import cached_property
from typing import Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator

from ..utils.exceptions import ConfigError

__all__ = ['BaseOperator', 'as_vector', 'inner', 'norm']


def as_vector(x, dim: Optional[int] = None) -> np.ndarray:
    u = np.asarray(x, dtype=np.float64).ravel()
    if u.size == 0:
        raise ConfigError("Vectors must have positive length")
    if dim is not None and u.size != dim:
        raise ConfigError(f"Dimension mismatch: expected length {dim}, got {u.size}")
    if not np.all(np.isfinite(u)):
        raise ValueError("Vector entries must be finite")
    return u


def inner(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.dot(np.ravel(u), np.ravel(v)))


def norm(u: np.ndarray) -> float:
    return float(np.linalg.norm(np.ravel(u)))


class BaseOperator(LinearOperator):
    """Matrix-free real operator K: R^dim_in -> R^dim_out with its adjoint.

    Subclasses implement `_forward` and `_backward` on flat float64 arrays. The scipy
    `LinearOperator` interface (`matvec`, `rmatvec`, shape) stays available so operators can be
    handed to scipy solvers directly.
    """

    def __init__(self, dim_in: int, dim_out: int, norm_hint: Optional[float] = None) -> None:
        if int(dim_in) < 1 or int(dim_out) < 1:
            raise ConfigError(f"Operator dimensions must be positive, got in={dim_in}, out={dim_out}")
        super().__init__(dtype=np.float64, shape=(int(dim_out), int(dim_in)))
        if norm_hint is not None and norm_hint < 0:
            raise ConfigError(f"norm_hint must be nonnegative, got {norm_hint}")
        self.norm_hint = None if norm_hint is None else float(norm_hint)

    @property
    def dim_in(self) -> int:
        return self.shape[1]

    @property
    def dim_out(self) -> int:
        return self.shape[0]

    def apply(self, u) -> np.ndarray:
        return self._forward(as_vector(u, self.dim_in))

    def adjoint_apply(self, w) -> np.ndarray:
        return self._backward(as_vector(w, self.dim_out))

    def _forward(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _backward(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _matvec(self, x):
        return self._forward(np.asarray(x, dtype=np.float64).ravel())

    def _rmatvec(self, x):
        return self._backward(np.asarray(x, dtype=np.float64).ravel())

    def to_dense(self) -> np.ndarray:
        """Column-by-column materialization. Meant for small operators only."""
        columns = [self._forward(e) for e in np.eye(self.dim_in)]
        return np.stack(columns, axis=1)

    @cached_property
    def norm_estimate(self) -> float:
        from .diagnostics import operator_norm_estimate
        return operator_norm_estimate(self)

    def norm(self) -> float:
        """`norm_hint` when the operator knows its norm, otherwise a power-iteration estimate."""
        if self.norm_hint is not None:
            return self.norm_hint
        return self.norm_estimate

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim_in={self.dim_in}, dim_out={self.dim_out})"
