from typing import Any, Mapping, Union

from omegaconf import DictConfig, OmegaConf

from ..operators.builder import build_operator
from ..utils.exceptions import ConfigError
from .base import BasePenalty
from .lq import LqPenalty
from .quadratic import QuadraticPenalty
from .registry import PENALTY_DICT
from .tv import TVPenalty


def build_penalty(conf: Union[DictConfig, Mapping[str, Any], str]) -> BasePenalty:
    """Penalty from a config node: `{name: lq, q: 1.5}`, `{name: tv, grid: [8, 8], flavor: isotropic}`, ..."""
    if isinstance(conf, str):
        conf = {'name': conf}
    elif isinstance(conf, DictConfig):
        conf = OmegaConf.to_container(conf, resolve=True)
    name = conf.get('name')
    if name not in PENALTY_DICT:
        raise ConfigError(f"{name} not in penalty dict! Choose from {sorted(PENALTY_DICT)}")

    if name == 'quadratic':
        L = conf.get('L')
        return QuadraticPenalty(None if L is None else build_operator(L))
    if name == 'lq':
        return LqPenalty(conf.get('q', 1.0))
    if conf.get('grid') is None:
        raise ConfigError("tv penalty config is missing field 'grid'")
    return TVPenalty(conf['grid'], flavor=conf.get('flavor', 'anisotropic'), solver=conf.get('solver', 'auto'))
