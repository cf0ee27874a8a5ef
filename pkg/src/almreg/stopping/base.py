from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Optional, Sequence

if TYPE_CHECKING:
    from ..alm.state import AlmState

__all__ = ['BaseStoppingRule']


class BaseStoppingRule(ABC):
    """Decides online whether the outer iteration stops at the current state."""

    name: str = 'base'

    @abstractmethod
    def fires(self, state: 'AlmState') -> bool:
        raise NotImplementedError

    @abstractmethod
    def index(self, residuals: Sequence[float]) -> Optional[int]:
        """Offline counterpart of `fires` on a recorded residual list (1-based), None if it never fires."""
        raise NotImplementedError

    @abstractmethod
    def describe(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.describe()
