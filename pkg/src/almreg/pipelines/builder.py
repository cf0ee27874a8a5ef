from pathlib import Path
from typing import Optional, Union

import numpy as np
from omegaconf import DictConfig

from ..alm.state import RunCaps
from ..loggers.stdout import StdOutLogger
from ..problems.base import ProblemInstance
from ..schedulers.builder import build_schedule
from ..stopping.builder import build_stopping_rule, resolve_rho
from ..utils.exceptions import ConfigError
from ..utils.record import Timer
from .base import BasePipeline
from .registry import PIPELINE_DICT
from .sweep import SweepConfig


def build_caps(solver_conf) -> RunCaps:
    return RunCaps(max_outer=int(solver_conf.get('max_outer', 200)), max_inner=int(solver_conf.get('max_inner', 5000)),
                   inner_tol=solver_conf.get('inner_tol'))


def build_p0(solver_conf, instance: ProblemInstance) -> Optional[np.ndarray]:
    """Initial dual element; a scalar broadcasts over the data space."""
    p0 = solver_conf.get('p0')
    if p0 is None:
        return None
    if isinstance(p0, (int, float)):
        return np.full(instance.K.dim_out, float(p0))
    p0 = np.asarray(list(p0), dtype=np.float64)
    if p0.size != instance.K.dim_out:
        raise ConfigError(f"p0 has {p0.size} entries, the data space has {instance.K.dim_out}")
    return p0


def build_sweep_config(conf: DictConfig, instance: ProblemInstance,
                       logging_dir: Optional[Union[Path, str]] = None) -> SweepConfig:
    stopping = conf.stopping
    if stopping.get('delta0') is None:
        raise ConfigError("sweep needs stopping.delta0")
    return SweepConfig(
        delta0=float(stopping.delta0),
        factor=float(stopping.get('factor', 0.5)),
        count=int(stopping.get('count', 8)),
        rho=resolve_rho(stopping),
        schedule=build_schedule(conf.solver),
        caps=build_caps(conf.solver),
        p0=build_p0(conf.solver, instance),
        noise_seed=stopping.get('noise_seed'),
        gamma=float(stopping.get('gamma', 2.0)),
        alpha=float(stopping.get('alpha', 0.25)),
        degeneracy_window=int(stopping.get('degeneracy_window', 4)),
        output_dir=None if logging_dir is None else Path(logging_dir),
        report_format=conf.get('output', {}).get('format', 'json'),
    )


def build_pipeline(
    pipeline_type: str,
    conf: DictConfig,
    instance: ProblemInstance,
    logging_dir: Optional[Union[Path, str]] = None,
) -> BasePipeline:
    if pipeline_type not in PIPELINE_DICT:
        raise ConfigError(f"{pipeline_type} not in pipeline dict! Choose from {sorted(PIPELINE_DICT)}")

    timer = Timer()
    logging_dir = None if logging_dir is None else Path(logging_dir)

    if pipeline_type == 'certify':
        return PIPELINE_DICT[pipeline_type](conf=conf, instance=instance, logger=StdOutLogger(instance.label),
                                            timer=timer, logging_dir=logging_dir)

    schedule = build_schedule(conf.solver)
    caps = build_caps(conf.solver)
    p0 = build_p0(conf.solver, instance)

    if pipeline_type == 'sweep':
        sweep_config = build_sweep_config(conf, instance, logging_dir)
        stdout = StdOutLogger(instance.label, total_runs=sweep_config.count)
        return PIPELINE_DICT[pipeline_type](conf=conf, instance=instance, logger=stdout, timer=timer,
                                            sweep_config=sweep_config, logging_dir=logging_dir)

    if pipeline_type == 'noisefree':
        steps = conf.stopping.get('steps')
        if steps is None:
            raise ConfigError("noisefree run needs stopping.steps")
        return PIPELINE_DICT[pipeline_type](conf=conf, instance=instance, logger=StdOutLogger(instance.label),
                                            timer=timer, steps=int(steps), schedule=schedule, caps=caps, p0=p0,
                                            logging_dir=logging_dir)

    delta = conf.stopping.get('delta')
    if delta is None or not float(delta) > 0:
        raise ConfigError(f"a noisy run needs stopping.delta > 0, got {delta}")
    stop = build_stopping_rule(conf.stopping, delta=float(delta))
    return PIPELINE_DICT[pipeline_type](conf=conf, instance=instance, logger=StdOutLogger(instance.label),
                                        timer=timer, delta=float(delta), schedule=schedule, stop=stop, caps=caps,
                                        p0=p0, noise_seed=conf.stopping.get('noise_seed'), logging_dir=logging_dir)
