from typing import Optional

__all__ = [
    'AlmregError', 'ConfigError', 'DomainError', 'InvalidSubgradientError',
    'RestrictedInjectivityError', 'InsufficientDataError', 'ProblemGenerationError',
]


class AlmregError(Exception):
    """Base class of every error raised by almreg."""


class ConfigError(AlmregError, ValueError):
    """Invalid configuration: unknown names, inconsistent dimensions, bad parameter ranges."""


class DomainError(AlmregError, ValueError):
    """Argument outside the mathematical domain of a function."""


class InvalidSubgradientError(AlmregError):
    def __init__(self, value: float, tolerance: float) -> None:
        super().__init__(f"Bregman distance {value:.3e} is negative beyond tolerance {tolerance:.1e}; "
                         "the given element is not a subgradient")
        self.value = value
        self.tolerance = tolerance


class RestrictedInjectivityError(AlmregError):
    def __init__(self, sigma_min: float, support_size: int) -> None:
        super().__init__(f"K restricted to the support (|I|={support_size}) is not injective: "
                         f"sigma_min={sigma_min:.3e}")
        self.sigma_min = sigma_min
        self.support_size = support_size


class InsufficientDataError(AlmregError):
    def __init__(self, valid_points: int) -> None:
        super().__init__("Slope fit needs at least 3 points with positive coordinates and distinct abscissae, "
                         f"got {valid_points}")
        self.valid_points = valid_points


class ProblemGenerationError(AlmregError):
    def __init__(self, message: str, theta: Optional[float] = None) -> None:
        super().__init__(message if theta is None else f"{message} (best theta={theta:.4f})")
        self.theta = theta
