from typing import Optional

from omegaconf import DictConfig, OmegaConf

from ..utils.exceptions import ConfigError
from .apriori import APrioriRule, power_law_index
from .base import BaseStoppingRule
from .fixed import FixedRule
from .morozov import MorozovRule
from .registry import STOPPING_DICT
from .rho import optimal_rho


def resolve_rho(stopping_conf) -> float:
    """Configured rho, or the minimizer of f_rho when the config leaves it empty."""
    rho = stopping_conf.get('rho')
    return optimal_rho()[0] if rho is None else float(rho)


def build_stopping_rule(stopping_conf, delta: Optional[float] = None) -> BaseStoppingRule:
    """Rule from the stopping section. `delta` overrides `stopping_conf.delta` (sweeps pass each level)."""
    if isinstance(stopping_conf, DictConfig):
        stopping_conf = OmegaConf.to_container(stopping_conf, resolve=True)
    rule_name = stopping_conf.get('rule', 'morozov')
    if rule_name not in STOPPING_DICT:
        raise ConfigError(f"{rule_name} not in stopping rule dict! Choose from {sorted(STOPPING_DICT)}")

    delta = stopping_conf.get('delta') if delta is None else delta
    if rule_name == 'fixed':
        steps = stopping_conf.get('steps')
        if steps is None:
            raise ConfigError("fixed stopping rule needs `steps`")
        return FixedRule(steps)
    if delta is None:
        raise ConfigError(f"{rule_name} stopping rule needs a noise level `delta`")
    if rule_name == 'morozov':
        return MorozovRule(resolve_rho(stopping_conf), delta)
    index_fn = power_law_index(stopping_conf.get('apriori_scale', 1.0), stopping_conf.get('apriori_exponent', 1.0))
    return APrioriRule(index_fn, delta)
