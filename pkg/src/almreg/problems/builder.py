from typing import Any, List, Mapping, Union

from loguru import logger
from omegaconf import DictConfig, OmegaConf

from ..utils.environment import resolve_seed
from ..utils.exceptions import ConfigError
from .base import ProblemInstance
from .registry import PROBLEM_DICT


def _dims(problem_conf: dict) -> List[int]:
    dims = problem_conf.get('dims')
    if dims is None:
        raise ConfigError(f"{problem_conf.get('kind')} problem config is missing field 'dims'")
    dims = [int(d) for d in ([dims] if isinstance(dims, int) else dims)]
    if not dims or any(d < 1 for d in dims):
        raise ConfigError(f"problem dims must be positive, got {dims}")
    return dims


def _matrix_dims(problem_conf: dict) -> List[int]:
    dims = _dims(problem_conf)
    return dims * 2 if len(dims) == 1 else dims[:2]


def build_problem(problem_conf: Union[DictConfig, Mapping[str, Any]]) -> ProblemInstance:
    """Instance from the problem section; ALMREG_SEED overrides `seed`."""
    if isinstance(problem_conf, DictConfig):
        problem_conf = OmegaConf.to_container(problem_conf, resolve=True)
    problem_conf = dict(problem_conf)
    kind = problem_conf.get('kind')
    if kind not in PROBLEM_DICT:
        raise ConfigError(f"{kind} not in problem dict! Choose from {sorted(PROBLEM_DICT)}")
    seed = resolve_seed(problem_conf.get('seed'))

    if kind == 'quadratic':
        m, n = _matrix_dims(problem_conf)
        instance = PROBLEM_DICT[kind](m, n, seed, K_kind=problem_conf.get('K_kind', 'gaussian'),
                                      p_dagger=problem_conf.get('p_dagger'))
    elif kind == 'sparse':
        m, n = _matrix_dims(problem_conf)
        support_size = problem_conf.get('support_size')
        if support_size is None:
            raise ConfigError("sparse problem config is missing field 'support_size'")
        instance = PROBLEM_DICT[kind](m, n, int(support_size), seed,
                                      max_resample=problem_conf.get('max_resample', 50),
                                      K_kind=problem_conf.get('K_kind', 'gaussian'),
                                      magnitudes=problem_conf.get('magnitudes', 'uniform'),
                                      magnitude_range=problem_conf.get('magnitude_range', (1.5, 2.5)))
    elif kind == 'file':
        if problem_conf.get('path') is None:
            raise ConfigError("file problem config is missing field 'path'")
        instance = PROBLEM_DICT[kind](problem_conf['path'], seed=seed)
    elif kind == 'lq':
        m, n = _matrix_dims(problem_conf)
        instance = PROBLEM_DICT[kind](m, n, float(problem_conf.get('q', 1.5)), seed,
                                      K_kind=problem_conf.get('K_kind', 'identity'))
    else:
        instance = PROBLEM_DICT[kind](_dims(problem_conf), kind=problem_conf.get('tv_kind', 'staircase_1d'),
                                      K_kind=problem_conf.get('K_kind', 'identity'), seed=seed,
                                      kernel=problem_conf.get('kernel'),
                                      flavor=problem_conf.get('flavor', 'anisotropic'),
                                      solver=problem_conf.get('solver', 'auto'),
                                      values=problem_conf.get('values'), jumps=problem_conf.get('jumps', 4))

    logger.info(f"Problem {instance.label} (seed {seed}): certified={instance.certified}")
    return instance
