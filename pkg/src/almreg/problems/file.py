from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
from loguru import logger
from omegaconf import OmegaConf

from ..certify.source import certify_source_condition
from ..operators.builder import build_operator
from ..penalties.builder import build_penalty
from ..utils.exceptions import ConfigError
from .base import ProblemInstance

__all__ = ['load_problem_file']


def _resolve(value: str, root: Path) -> Path:
    path = Path(value)
    return path if path.is_absolute() else root / path


def _vector(value: Any, root: Path, field: str) -> Optional[np.ndarray]:
    """A list of numbers or the path of a header-free CSV file."""
    if value is None:
        return None
    if isinstance(value, str):
        path = _resolve(value, root)
        if not path.exists():
            raise FileNotFoundError(f"{field} file {path} does not exist")
        return np.loadtxt(path, delimiter=',', ndmin=1).ravel()
    try:
        return np.asarray(value, dtype=np.float64).ravel()
    except (TypeError, ValueError) as e:
        raise ConfigError(f"instance field {field} is not a vector: {e}") from e


def load_problem_file(path: Union[Path, str], seed: int = 0) -> ProblemInstance:
    """Instance stored on disk as YAML or JSON.

    Fields: `operator` (operator config; a dense `path` is read as CSV), `penalty` (penalty config),
    `u_dagger`, optional `p_dagger` and `g`, optional `label`. Vectors are lists or CSV paths; relative
    paths are taken from the instance file's directory. `g` defaults to K u_dagger, and the instance is
    certified against `p_dagger` when one is given.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"instance file {path} does not exist")
    conf = OmegaConf.to_container(OmegaConf.load(path), resolve=True)
    if not isinstance(conf, dict):
        raise ConfigError(f"instance file {path} must hold a mapping")
    missing = [key for key in ('operator', 'penalty', 'u_dagger') if conf.get(key) is None]
    if missing:
        raise ConfigError(f"instance file {path} is missing fields {missing}")

    root = path.parent
    u_dagger = _vector(conf['u_dagger'], root, 'u_dagger')
    operator_conf = conf['operator']
    if isinstance(operator_conf, dict) and operator_conf.get('path') is not None:
        operator_conf = {**operator_conf, 'path': str(_resolve(operator_conf['path'], root))}
    K = build_operator(operator_conf, dim=u_dagger.size)
    pen = build_penalty(conf['penalty'])

    g = _vector(conf.get('g'), root, 'g')
    g = K.apply(u_dagger) if g is None else g
    if g.size != K.dim_out:
        raise ConfigError(f"g has {g.size} entries, K maps into {K.dim_out}")
    label = str(conf.get('label') or path.stem)
    instance = ProblemInstance(K=K, penalty=pen, g=g, u_dagger=u_dagger, seed=seed, label=label,
                               extras={'source_file': str(path)})

    p_dagger = _vector(conf.get('p_dagger'), root, 'p_dagger')
    if p_dagger is None:
        logger.info(f"{label} carries no p_dagger; the instance is uncertified")
        return instance
    instance.p_dagger = p_dagger
    instance.certificate = certify_source_condition(K, pen, u_dagger, p_dagger, g=g, seed=seed)
    return instance
