import math
from typing import Callable, Optional, Sequence

from ..utils.exceptions import ConfigError
from .base import BaseStoppingRule

__all__ = ['APrioriRule', 'power_law_index']


def power_law_index(scale: float, exponent: float) -> Callable[[float], int]:
    """delta -> max(1, ceil(scale * delta^(-exponent)))."""
    if not scale > 0:
        raise ConfigError(f"a-priori scale must be positive, got {scale}")

    def index_fn(delta: float) -> int:
        if not delta > 0:
            raise ConfigError(f"a-priori index needs delta > 0, got {delta}")
        return max(1, math.ceil(scale * delta ** (-exponent)))

    return index_fn


class APrioriRule(BaseStoppingRule):
    """Stop after index_fn(delta) steps, independent of the residuals."""

    name = 'a_priori'

    def __init__(self, index_fn: Callable[[float], int], delta: float) -> None:
        steps = int(index_fn(delta))
        if steps < 1:
            raise ConfigError(f"a-priori index must be positive, got {steps} for delta={delta}")
        self.delta = float(delta)
        self.steps = steps

    def fires(self, state) -> bool:
        return state.n >= self.steps

    def index(self, residuals: Sequence[float]) -> Optional[int]:
        return self.steps if len(residuals) >= self.steps else None

    def describe(self) -> str:
        return f"a_priori(delta={self.delta:.6g}, steps={self.steps})"
