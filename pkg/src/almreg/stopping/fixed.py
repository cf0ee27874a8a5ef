from typing import Optional, Sequence

from ..utils.exceptions import ConfigError
from .base import BaseStoppingRule

__all__ = ['FixedRule']


class FixedRule(BaseStoppingRule):
    name = 'fixed'

    def __init__(self, steps: int) -> None:
        if int(steps) < 1:
            raise ConfigError(f"fixed rule needs steps >= 1, got {steps}")
        self.steps = int(steps)

    def fires(self, state) -> bool:
        return state.n >= self.steps

    def index(self, residuals: Sequence[float]) -> Optional[int]:
        return self.steps if len(residuals) >= self.steps else None

    def describe(self) -> str:
        return f"fixed(steps={self.steps})"
