from typing import Union

import numpy as np

from ..operators.base import inner
from ..utils.exceptions import InvalidSubgradientError
from .base import BasePenalty, Subgradient

__all__ = ['bregman', 'symmetric_bregman']

BREGMAN_TOL = 1e-10


def _xi(xi: Union[Subgradient, np.ndarray], pen: BasePenalty) -> np.ndarray:
    return pen.check_dim(xi.xi if isinstance(xi, Subgradient) else xi)


def _checked(value: float, scale: float, tol: float) -> float:
    tolerance = tol * (1.0 + scale)
    if value < -tolerance:
        raise InvalidSubgradientError(value, tolerance)
    return max(value, 0.0)


def bregman(pen: BasePenalty, v, u, xi: Union[Subgradient, np.ndarray], tol: float = BREGMAN_TOL) -> float:
    """D_J(v, u) = J(v) - J(u) - <xi, v - u> for xi in the subdifferential of J at u.

    Small negative values from rounding are clipped to zero; larger ones mean `xi` is not a subgradient.
    """
    v, u = pen.check_dim(v), pen.check_dim(u)
    xi = _xi(xi, pen)
    J_v, J_u, linear = pen(v), pen(u), inner(xi, v - u)
    return _checked(J_v - J_u - linear, abs(J_v) + abs(J_u) + abs(linear), tol)


def symmetric_bregman(pen: BasePenalty, v, u, xi: Union[Subgradient, np.ndarray],
                      eta: Union[Subgradient, np.ndarray], tol: float = BREGMAN_TOL) -> float:
    """<eta - xi, v - u> with xi a subgradient at u and eta a subgradient at v."""
    v, u = pen.check_dim(v), pen.check_dim(u)
    xi, eta = _xi(xi, pen), _xi(eta, pen)
    diff = v - u
    value = inner(eta, diff) - inner(xi, diff)
    return _checked(value, abs(inner(eta, diff)) + abs(inner(xi, diff)), tol)
