from .environment import SEED_ENV, resolve_seed
from .exceptions import (
    AlmregError,
    ConfigError,
    DomainError,
    InsufficientDataError,
    InvalidSubgradientError,
    ProblemGenerationError,
    RestrictedInjectivityError,
)
from .logger import add_file_handler, set_logger, yaml_for_logging
