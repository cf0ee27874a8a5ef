import numpy as np

from ..utils.exceptions import DomainError

__all__ = ['prox_power', 'prox_scalar_power']

_ROOT_TOL = 1e-14
_MAX_ROOT_ITERS = 200


def _check(lam: float, q: float) -> None:
    if not lam > 0:
        raise DomainError(f"prox weight must be positive, got {lam}")
    if not 1.0 <= q <= 2.0:
        raise DomainError(f"q must lie in [1, 2], got {q}")


def prox_power(z, lam: float, q: float) -> np.ndarray:
    """Entrywise argmin_x 1/2 (x - z)^2 + lam |x|^q.

    For 1 < q < 2 the magnitude solves x + lam q x^(q-1) = |z| on [0, |z|]; Newton steps are kept
    inside a bisection bracket so the nonsmooth point 0 cannot derail them.
    """
    _check(lam, q)
    z = np.asarray(z, dtype=np.float64)
    if q == 1.0:
        return np.sign(z) * np.maximum(np.abs(z) - lam, 0.0)
    if q == 2.0:
        return z / (1.0 + 2.0 * lam)

    a = np.abs(z)
    lo = np.zeros_like(a)
    hi = a.copy()
    x = a / (1.0 + lam * q)
    with np.errstate(divide='ignore', invalid='ignore'):
        for _ in range(_MAX_ROOT_ITERS):
            h = x + lam * q * x ** (q - 1.0) - a
            if np.all(np.abs(h) <= _ROOT_TOL * (1.0 + a)):
                break
            lo = np.where(h < 0, x, lo)
            hi = np.where(h > 0, x, hi)
            dh = 1.0 + lam * q * (q - 1.0) * x ** (q - 2.0)
            newton = x - h / dh
            inside = np.isfinite(newton) & (newton > lo) & (newton < hi)
            x = np.where(inside, newton, 0.5 * (lo + hi))
    return np.sign(z) * x


def prox_scalar_power(z: float, lam: float, q: float) -> float:
    return float(prox_power(np.array([z], dtype=np.float64), lam, q)[0])
