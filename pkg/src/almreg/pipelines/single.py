import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
from loguru import logger
from omegaconf import DictConfig

from ..alm.iteration import alm_run
from ..alm.state import AlmTrajectory, RunCaps
from ..certify.bounds import BoundReport
from ..loggers.stdout import StdOutLogger
from ..problems.base import ProblemInstance
from ..problems.noise import add_noise
from ..schedulers.base import StepSchedule
from ..stopping.base import BaseStoppingRule
from ..stopping.morozov import MorozovRule
from ..stopping.record import RunRecord
from ..utils.exceptions import ConfigError
from ..utils.record import RunSummary, Timer
from .base import BasePipeline
from .diagnostics import evaluate_run

__all__ = ['SingleResult', 'SinglePipeline', 'single_run']


@dataclass
class SingleResult:
    trajectory: AlmTrajectory
    record: RunRecord
    bounds: Optional[BoundReport] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.record.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ok': self.ok,
            'record': self.record.to_dict(),
            'bounds': None if self.bounds is None else self.bounds.to_dict(),
            'trajectory': self.trajectory.to_dict(),
            **self.extras,
        }


def single_run(instance: ProblemInstance, delta: float, schedule: StepSchedule, stop: BaseStoppingRule,
               caps: Optional[RunCaps] = None, p0=None, noise_seed: Optional[int] = None, gamma: float = 2.0,
               alpha: float = 0.25) -> SingleResult:
    """One run on noisy data g + delta e; discrepancy-rule runs also get the bracketing and stopped-index bounds."""
    if not delta > 0:
        raise ConfigError(f"a single noisy run needs delta > 0, got {delta}")
    noise_seed = instance.seed if noise_seed is None else int(noise_seed)
    noisy = add_noise(instance.g, delta, noise_seed)
    traj = alm_run(instance.K, noisy.g_delta, instance.penalty, schedule, p0=p0, stop=stop, caps=caps)
    rho = stop.rho if isinstance(stop, MorozovRule) else None
    record, bounds = evaluate_run(instance, traj, delta, rho=rho, gamma=gamma, alpha=alpha, noise_seed=noise_seed,
                                  tau_bar=schedule.tau_bar)
    extras = {'instance': instance.describe(), 'dual_step_mismatch': traj.dual_step_mismatch()}
    return SingleResult(trajectory=traj, record=record, bounds=bounds, extras=extras)


class SinglePipeline(BasePipeline):
    mode = 'run'

    def __init__(
        self,
        conf: DictConfig,
        instance: ProblemInstance,
        logger: Optional[StdOutLogger],
        timer: Timer,
        delta: float,
        schedule: StepSchedule,
        stop: BaseStoppingRule,
        caps: RunCaps,
        p0: Optional[np.ndarray] = None,
        noise_seed: Optional[int] = None,
        logging_dir: Optional[Path] = None,
    ):
        super(SinglePipeline, self).__init__(conf, instance, logger, timer, logging_dir)
        self.delta = delta
        self.schedule = schedule
        self.stop = stop
        self.caps = caps
        self.p0 = p0
        self.noise_seed = noise_seed
        self.result: Optional[SingleResult] = None

    def run(self) -> bool:
        self.timer.start_record(name='run')
        stopping = self.conf.get('stopping', {})
        self.result = single_run(self.instance, self.delta, self.schedule, self.stop, caps=self.caps, p0=self.p0,
                                 noise_seed=self.noise_seed, gamma=stopping.get('gamma', 2.0),
                                 alpha=stopping.get('alpha', 0.25))
        self.timer.end_record(name='run')
        elapsed = self.timer.get(name='run', as_pop=False)

        record = self.result.record
        logger.info("-" * 40)
        self.log_results(prefix='run', delta=record.delta, gamma=record.gamma, t=record.t_gamma,
                         residual=record.residual, violations=record.violations, elapsed_time=elapsed)
        logger.info("-" * 40)
        self.save_summary(elapsed)
        return self.result.ok

    def save_summary(self, elapsed: Optional[float] = None):
        record = self.result.record
        summary = RunSummary(label=self.instance.label, delta=record.delta, gamma=record.gamma,
                             t_gamma=record.t_gamma, residual=record.residual, stopped=record.stopped,
                             violations=record.violations, total_time=elapsed, success=True)
        if self.logging_dir is None:
            return summary

        with open(self.logging_dir / "run_report.json", 'w') as f:
            json.dump(self.result.to_dict(), f, indent=4)
        self.result.trajectory.to_frame().to_csv(self.logging_dir / "trajectory.csv", index=False)
        if self.conf.get('output', {}).get('dump_vectors', False):
            self.result.trajectory.vectors_frame('u').to_csv(self.logging_dir / "u.csv", index=False)
            self.result.trajectory.vectors_frame('p').to_csv(self.logging_dir / "p.csv", index=False)

        summary_path = self.logging_dir / f"{self.mode}_summary.json"
        with open(summary_path, 'w') as f:
            json.dump(asdict(summary), f, indent=4)
        logger.info(f"Run summary saved at {str(summary_path)}")
        return summary
