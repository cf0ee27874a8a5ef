from typing import Optional, Sequence

from ..utils.exceptions import ConfigError
from .base import BaseStoppingRule

__all__ = ['MorozovRule', 'morozov_index', 'last_discrepancy_index', 'check_rho_delta']


def check_rho_delta(rho: float, delta: float) -> None:
    if not rho > 1:
        raise ConfigError(f"Discrepancy principle needs rho > 1, got {rho}")
    if not delta > 0:
        raise ConfigError(f"Discrepancy principle needs a positive noise level, got {delta}")


def morozov_index(residuals: Sequence[float], rho: float, delta: float) -> Optional[int]:
    """Smallest n (1-based) with residual(n) < rho * delta, None if no recorded residual qualifies."""
    check_rho_delta(rho, delta)
    threshold = rho * delta
    for n, residual in enumerate(residuals, start=1):
        if residual < threshold:
            return n
    return None


def last_discrepancy_index(residuals: Sequence[float], rho: float, delta: float) -> Optional[int]:
    """Largest n with residual(n) >= rho * delta, None if every residual is below the threshold."""
    check_rho_delta(rho, delta)
    threshold = rho * delta
    found = None
    for n, residual in enumerate(residuals, start=1):
        if residual >= threshold:
            found = n
    return found


class MorozovRule(BaseStoppingRule):
    """Stop at the first iterate whose residual drops strictly below rho * delta."""

    name = 'morozov'

    def __init__(self, rho: float, delta: float) -> None:
        check_rho_delta(rho, delta)
        self.rho = float(rho)
        self.delta = float(delta)

    @property
    def threshold(self) -> float:
        return self.rho * self.delta

    def fires(self, state) -> bool:
        return state.residual < self.threshold

    def index(self, residuals: Sequence[float]) -> Optional[int]:
        return morozov_index(residuals, self.rho, self.delta)

    def describe(self) -> str:
        return f"morozov(rho={self.rho:.6g}, delta={self.delta:.6g})"
