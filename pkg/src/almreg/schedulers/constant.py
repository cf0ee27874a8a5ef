from ..utils.exceptions import ConfigError
from .base import StepSchedule

__all__ = ['ConstantSchedule']


class ConstantSchedule(StepSchedule):
    """Stationary method: tau_n = tau for every n."""

    name = 'constant'

    def __init__(self, tau: float = 1.0) -> None:
        tau = float(tau)
        if not tau > 0:
            raise ConfigError(f"tau must be positive, got {tau}")
        self.value = tau

    def tau(self, n: int) -> float:
        self._check_index(n)
        return self.value

    @property
    def tau_bar(self) -> float:
        return self.value

    def t(self, n: int) -> float:
        return n * self.value

    def to_dict(self) -> dict:
        return {'name': self.name, 'tau': self.value}
