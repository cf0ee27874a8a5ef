from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from ..utils.exceptions import ConfigError


@dataclass(frozen=True)
class GridShape:
    """Discrete domain for signals (cols == 1) and images, stored row-major."""
    rows: int
    cols: int = 1

    def __post_init__(self):
        if int(self.rows) < 1 or int(self.cols) < 1:
            raise ConfigError(f"Grid dimensions must be positive, got ({self.rows}, {self.cols})")

    @classmethod
    def from_any(cls, value: Union['GridShape', int, Sequence[int]]) -> 'GridShape':
        if isinstance(value, GridShape):
            return value
        if isinstance(value, (int, np.integer)):
            return cls(int(value), 1)
        dims = [int(v) for v in value]
        if len(dims) == 1:
            return cls(dims[0], 1)
        if len(dims) != 2:
            raise ConfigError(f"Grid must have one or two dimensions, got {dims}")
        return cls(dims[0], dims[1])

    @property
    def size(self) -> int:
        return self.rows * self.cols

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_1d(self) -> bool:
        return self.cols == 1

    def as_image(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=np.float64)
        if u.size != self.size:
            raise ConfigError(f"Vector of length {u.size} does not fit grid {self.rows}x{self.cols}")
        return u.reshape(self.shape)
