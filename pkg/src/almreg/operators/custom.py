import math
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.signal import convolve, correlate

from ..utils.exceptions import ConfigError
from .base import BaseOperator
from .grid import GridShape

__all__ = [
    'IdentityOperator', 'DenseOperator', 'DiagonalOperator', 'ConvolutionOperator',
    'MaskedSamplingOperator', 'CompositionOperator', 'FunctionOperator', 'GradientOperator',
]


class IdentityOperator(BaseOperator):
    def __init__(self, dim: int) -> None:
        super().__init__(dim_in=dim, dim_out=dim, norm_hint=1.0)

    def _forward(self, u):
        return u.copy()

    def _backward(self, w):
        return w.copy()


class DenseOperator(BaseOperator):
    def __init__(self, matrix) -> None:
        matrix = np.array(matrix, dtype=np.float64, ndmin=2)
        if matrix.ndim != 2:
            raise ConfigError(f"Dense operator needs a 2-D matrix, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise ConfigError("Dense operator matrix has non-finite entries")
        super().__init__(dim_in=matrix.shape[1], dim_out=matrix.shape[0])
        self.matrix = matrix
        self.matrix.setflags(write=False)

    @classmethod
    def from_csv(cls, path: Union[Path, str]) -> 'DenseOperator':
        """Row-major, header-free, comma separated."""
        return cls(np.loadtxt(path, delimiter=',', ndmin=2))

    def _forward(self, u):
        return self.matrix @ u

    def _backward(self, w):
        return self.matrix.T @ w

    def to_dense(self) -> np.ndarray:
        return np.array(self.matrix)


class DiagonalOperator(BaseOperator):
    def __init__(self, weights: Sequence[float]) -> None:
        weights = np.array(weights, dtype=np.float64).ravel()
        if weights.size == 0 or not np.all(np.isfinite(weights)):
            raise ConfigError("Diagonal weights must be a nonempty finite sequence")
        super().__init__(dim_in=weights.size, dim_out=weights.size, norm_hint=float(np.max(np.abs(weights))))
        self.weights = weights
        self.weights.setflags(write=False)

    def _forward(self, u):
        return self.weights * u

    def _backward(self, w):
        return self.weights * w


class ConvolutionOperator(BaseOperator):
    """Blur on a grid with symmetric (mirror) boundary extension.

    A 1-D kernel on a 2-D grid is used as a separable kernel (outer product with itself).
    """

    def __init__(self, kernel, grid: Union[GridShape, Sequence[int], int]) -> None:
        grid = GridShape.from_any(grid)
        kernel = np.array(kernel, dtype=np.float64)
        if kernel.ndim == 1:
            kernel = kernel[:, None] if grid.is_1d else np.outer(kernel, kernel)
        if kernel.ndim != 2 or kernel.size == 0:
            raise ConfigError(f"Convolution kernel must be 1-D or 2-D, got shape {kernel.shape}")
        if kernel.shape[0] > grid.rows or kernel.shape[1] > grid.cols:
            raise ConfigError(f"Kernel {kernel.shape} does not fit grid {grid.shape}")
        super().__init__(dim_in=grid.size, dim_out=grid.size)
        self.grid = grid
        self.kernel = kernel
        self.kernel.setflags(write=False)

        kr, kc = kernel.shape
        self._row_index = np.pad(np.arange(grid.rows), (kr // 2, kr - 1 - kr // 2), mode='symmetric')
        self._col_index = np.pad(np.arange(grid.cols), (kc // 2, kc - 1 - kc // 2), mode='symmetric')

    def _extend(self, image: np.ndarray) -> np.ndarray:
        return image[np.ix_(self._row_index, self._col_index)]

    def _fold(self, padded: np.ndarray) -> np.ndarray:
        out = np.zeros(self.grid.shape)
        np.add.at(out, (self._row_index[:, None], self._col_index[None, :]), padded)
        return out

    def _forward(self, u):
        image = u.reshape(self.grid.shape)
        return convolve(self._extend(image), self.kernel, mode='valid', method='direct').ravel()

    def _backward(self, w):
        image = w.reshape(self.grid.shape)
        return self._fold(correlate(image, self.kernel, mode='full', method='direct')).ravel()


class MaskedSamplingOperator(BaseOperator):
    """Keeps the entries selected by a boolean mask; the adjoint zero-fills."""

    def __init__(self, mask: Sequence[Union[bool, int]]) -> None:
        mask = np.asarray(mask).ravel().astype(bool)
        indices = np.flatnonzero(mask)
        if indices.size == 0:
            raise ConfigError("Sampling mask selects no entries")
        super().__init__(dim_in=mask.size, dim_out=indices.size, norm_hint=1.0)
        self.mask = mask
        self.indices = indices

    def _forward(self, u):
        return u[self.indices]

    def _backward(self, w):
        out = np.zeros(self.dim_in)
        out[self.indices] = w
        return out


class CompositionOperator(BaseOperator):
    """`outer` after `inner`: u -> outer(inner(u))."""

    def __init__(self, outer: BaseOperator, inner: BaseOperator) -> None:
        if outer.dim_in != inner.dim_out:
            raise ConfigError(f"Cannot compose: outer expects {outer.dim_in} inputs, inner produces {inner.dim_out}")
        super().__init__(dim_in=inner.dim_in, dim_out=outer.dim_out)
        self.outer = outer
        self.inner = inner

    def _forward(self, u):
        return self.outer.apply(self.inner.apply(u))

    def _backward(self, w):
        return self.inner.adjoint_apply(self.outer.adjoint_apply(w))


class FunctionOperator(BaseOperator):
    def __init__(self, dim_in: int, dim_out: int,
                 forward: Callable[[np.ndarray], np.ndarray],
                 backward: Callable[[np.ndarray], np.ndarray],
                 norm_hint: Optional[float] = None) -> None:
        super().__init__(dim_in=dim_in, dim_out=dim_out, norm_hint=norm_hint)
        self._forward_fn = forward
        self._backward_fn = backward

    def _forward(self, u):
        return np.asarray(self._forward_fn(u), dtype=np.float64).ravel()

    def _backward(self, w):
        return np.asarray(self._backward_fn(w), dtype=np.float64).ravel()


class GradientOperator(BaseOperator):
    """Forward differences with Neumann boundary (the last difference along an axis is 0).

    Output layout: the axis-0 differences of the whole grid, followed by the axis-1 differences on
    2-D grids. `norm_hint` is the standard upper bound (2 in 1-D, sqrt(8) in 2-D).
    """

    def __init__(self, grid: Union[GridShape, Sequence[int], int]) -> None:
        grid = GridShape.from_any(grid)
        n_axes = 1 if grid.is_1d else 2
        super().__init__(dim_in=grid.size, dim_out=n_axes * grid.size, norm_hint=math.sqrt(4.0 * n_axes))
        self.grid = grid
        self.n_axes = n_axes

    @staticmethod
    def _diff(image: np.ndarray, axis: int) -> np.ndarray:
        out = np.zeros_like(image)
        src = np.moveaxis(image, axis, 0)
        dst = np.moveaxis(out, axis, 0)
        dst[:-1] = src[1:] - src[:-1]
        return out

    @staticmethod
    def _diff_adjoint(field: np.ndarray, axis: int) -> np.ndarray:
        out = np.zeros_like(field)
        src = np.moveaxis(field, axis, 0)
        dst = np.moveaxis(out, axis, 0)
        dst[:-1] -= src[:-1]
        dst[1:] += src[:-1]
        return out

    def _forward(self, u):
        image = u.reshape(self.grid.shape)
        return np.concatenate([self._diff(image, axis).ravel() for axis in range(self.n_axes)])

    def _backward(self, w):
        fields = w.reshape(self.n_axes, *self.grid.shape)
        out = np.zeros(self.grid.shape)
        for axis in range(self.n_axes):
            out += self._diff_adjoint(fields[axis], axis)
        return out.ravel()

    def structural_rows(self) -> np.ndarray:
        """Indices of output entries that are not identically zero."""
        mask = np.ones((self.n_axes, *self.grid.shape), dtype=bool)
        mask[0, -1, :] = False
        if self.n_axes == 2:
            mask[1, :, -1] = False
        return np.flatnonzero(mask.ravel())
