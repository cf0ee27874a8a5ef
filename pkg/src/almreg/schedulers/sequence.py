from typing import Optional, Sequence

from ..utils.exceptions import ConfigError
from .base import StepSchedule

__all__ = ['SequenceSchedule']


class SequenceSchedule(StepSchedule):
    """Explicit leading steps followed by a constant tail (the last listed step unless `tail` is given)."""

    name = 'sequence'

    def __init__(self, taus: Sequence[float], tail: Optional[float] = None) -> None:
        taus = [float(tau) for tau in taus]
        if len(taus) == 0:
            raise ConfigError("sequence schedule needs at least one step size")
        tail = taus[-1] if tail is None else float(tail)
        if any(not tau > 0 for tau in taus) or not tail > 0:
            raise ConfigError(f"step sizes must be positive, got {taus} with tail {tail}")
        self.head = taus
        self.tail = tail

    def tau(self, n: int) -> float:
        self._check_index(n)
        return self.head[n - 1] if n <= len(self.head) else self.tail

    @property
    def tau_bar(self) -> float:
        return max(max(self.head), self.tail)

    def t(self, n: int) -> float:
        listed = min(n, len(self.head))
        return float(sum(self.head[:listed]) + max(0, n - listed) * self.tail)

    def to_dict(self) -> dict:
        return {'name': self.name, 'taus': list(self.head), 'tail': self.tail}
