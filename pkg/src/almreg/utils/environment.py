import os
from typing import Optional

from loguru import logger

from .exceptions import ConfigError

__all__ = ['SEED_ENV', 'resolve_seed']

SEED_ENV = 'ALMREG_SEED'


def resolve_seed(seed: Optional[int]) -> int:
    """Config seed, overridden by the ALMREG_SEED environment variable when set."""
    env_seed = os.getenv(SEED_ENV)
    if env_seed is not None and env_seed.strip() != "":
        try:
            override = int(env_seed)
        except ValueError as e:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {env_seed!r}") from e
        if seed is not None and override != seed:
            logger.info(f"{SEED_ENV}={override} overrides configured seed {seed}")
        return override
    return 0 if seed is None else int(seed)
