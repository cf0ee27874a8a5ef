from abc import ABC, abstractmethod
from typing import List

__all__ = ['StepSchedule']


class StepSchedule(ABC):
    """Step sizes tau_1, tau_2, ... with partial sums t_n that diverge and a finite supremum tau_bar.

    Indices start at 1.
    """

    name: str = 'base'

    @abstractmethod
    def tau(self, n: int) -> float:
        raise NotImplementedError

    @property
    @abstractmethod
    def tau_bar(self) -> float:
        raise NotImplementedError

    def taus(self, count: int) -> List[float]:
        return [self.tau(n) for n in range(1, count + 1)]

    def t(self, n: int) -> float:
        """Partial sum t_n = tau_1 + ... + tau_n; t_0 = 0."""
        return float(sum(self.taus(n)))

    @staticmethod
    def _check_index(n: int) -> None:
        if n < 1:
            raise IndexError(f"Step indices start at 1, got {n}")

    @abstractmethod
    def to_dict(self) -> dict:
        raise NotImplementedError
