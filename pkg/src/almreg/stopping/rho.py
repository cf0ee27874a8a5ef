import math
from typing import Tuple

from loguru import logger
from scipy.optimize import minimize_scalar

from ..utils.exceptions import DomainError

__all__ = ['f_rho', 'optimal_rho', 'gamma_tradeoff_infimum', 'gamma_tradeoff_numeric']

RHO_BRACKET = (1.0001, 2.0, 10.0)
GAMMA_MAX = 1e6


def f_rho(rho: float) -> float:
    """rho (sqrt(rho) + 1) / sqrt(rho - 1): the rho-dependent factor of the discrepancy-stopped error bound."""
    if not rho > 1:
        raise DomainError(f"f_rho is defined for rho > 1, got {rho}")
    return rho * (math.sqrt(rho) + 1.0) / math.sqrt(rho - 1.0)


def optimal_rho(tol: float = 1e-8) -> Tuple[float, float]:
    """Minimizer of f_rho on (1, 10] by golden-section search, with its value."""
    result = minimize_scalar(f_rho, bracket=RHO_BRACKET, method='golden', tol=tol)
    rho_star = float(result.x)
    if not RHO_BRACKET[0] < rho_star <= RHO_BRACKET[2]:
        raise DomainError(f"golden-section search left the bracket: rho={rho_star}")
    f_star = f_rho(rho_star)
    logger.debug(f"optimal rho {rho_star:.8f} with f = {f_star:.8f}")
    return rho_star, f_star


def _check_positive(a: float, b: float) -> None:
    if not (a > 0 and b > 0):
        raise DomainError(f"trade-off infimum needs a > 0 and b > 0, got a={a}, b={b}")


def gamma_tradeoff_infimum(a: float, b: float) -> Tuple[float, float]:
    """inf over gamma > 1 of gamma/(gamma - 1) a + gamma^2/(gamma - 1) b, in closed form.

    Returns (value, gamma_star) with value = (sqrt(b) + sqrt(a + b))^2 and gamma_star = 1 + sqrt(1 + a/b).
    """
    _check_positive(a, b)
    value = (math.sqrt(b) + math.sqrt(a + b)) ** 2
    gamma_star = 1.0 + math.sqrt(1.0 + a / b)
    return value, gamma_star


def gamma_tradeoff_numeric(a: float, b: float, gamma_max: float = GAMMA_MAX) -> Tuple[float, float]:
    """Numeric minimization of the same trade-off over gamma in (1, gamma_max], searched in log(gamma - 1)."""
    _check_positive(a, b)

    def objective(s: float) -> float:
        excess = math.exp(s)
        gamma = 1.0 + excess
        return gamma / excess * a + gamma ** 2 / excess * b

    result = minimize_scalar(objective, bounds=(math.log(1e-9), math.log(gamma_max - 1.0)), method='bounded',
                             options={'xatol': 1e-12, 'maxiter': 2000})
    return float(result.fun), 1.0 + math.exp(float(result.x))
