import numpy as np

from ..operators.base import as_vector, norm
from ..utils.exceptions import ConfigError
from .base import NoisyData

__all__ = ['add_noise', 'noise_direction']

MAX_REDRAWS = 16


def noise_direction(dim: int, seed: int) -> np.ndarray:
    """Unit Gaussian direction, fixed per seed. A zero draw is redrawn with the next seed."""
    for offset in range(MAX_REDRAWS):
        e = np.random.default_rng(seed + offset).standard_normal(dim)
        size = norm(e)
        if size > 0.0:
            return e / size
    raise ConfigError(f"could not draw a nonzero noise direction from seed {seed}")


def add_noise(g, delta: float, seed: int) -> NoisyData:
    """g_delta = g + delta e with ||e|| = 1, so ||g_delta - g|| = delta. The direction depends on the seed only."""
    if not delta > 0:
        raise ConfigError(f"noise level must be positive, got {delta}")
    g = as_vector(g)
    return NoisyData(g_delta=g + float(delta) * noise_direction(g.size, seed), delta=float(delta), seed=int(seed))
