import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from loguru import logger
from omegaconf import DictConfig

from ..alm.iteration import alm_run
from ..alm.state import AlmTrajectory, RunCaps
from ..certify.bounds import BoundReport, check_error_bounds
from ..certify.fit import RateReport, rate_report
from ..certify.sparse import SparseConstants, sparse_error_bounds
from ..certify.strict import strict_metrics
from ..loggers.stdout import StdOutLogger
from ..operators.base import norm
from ..penalties.lq import LqPenalty
from ..penalties.tv import TVPenalty
from ..problems.base import ProblemInstance
from ..schedulers.base import StepSchedule
from ..stopping.fixed import FixedRule
from ..utils.exceptions import ConfigError
from ..utils.record import RunSummary, Timer
from .base import BasePipeline
from .diagnostics import instance_sparse_constants

__all__ = ['NoisefreeResult', 'NoisefreePipeline', 'noisefree_run']


@dataclass
class NoisefreeResult:
    trajectory: AlmTrajectory
    errors: List[float]
    reports: List[RateReport]
    bounds: Optional[BoundReport] = None
    constants: Optional[SparseConstants] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def violations(self) -> List[str]:
        if self.bounds is None:
            return []
        return [f"n={row.n}: {row.name}" for row in self.bounds.violations]

    @property
    def band_failures(self) -> List[str]:
        """Rate bands are only attached on certified instances, so every miss counts."""
        return [report.name for report in self.reports if report.band_ok is False]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.band_failures

    def report(self, name: str) -> Optional[RateReport]:
        return next((report for report in self.reports if report.name == name), None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ok': self.ok,
            'violations': self.violations,
            'band_failures': self.band_failures,
            'errors': self.errors,
            'reports': [report.to_dict() for report in self.reports],
            'bounds': None if self.bounds is None else self.bounds.to_dict(),
            'sparse_constants': None if self.constants is None else self.constants.to_dict(),
            'trajectory': self.trajectory.to_dict(),
            **self.extras,
        }


def _error(instance: ProblemInstance, u: np.ndarray) -> float:
    pen = instance.penalty
    if isinstance(pen, LqPenalty) and pen.q == 1.0:
        return float(np.sum(np.abs(u - instance.u_dagger)))
    if isinstance(pen, TVPenalty):
        return strict_metrics(u, instance.u_dagger, instance.K, pen)[1]
    return norm(u - instance.u_dagger)


def noisefree_run(instance: ProblemInstance, steps: int, schedule: StepSchedule, caps: Optional[RunCaps] = None,
                  p0=None, gamma: float = 2.0) -> NoisefreeResult:
    """Exactly `steps` iterations on the exact data g, with the error-vs-t_n fit and the exact-data estimates.

    Errors are ||u_n - u_dagger||_1 for l1, the strict metric d for TV and the Euclidean distance otherwise.
    """
    if int(steps) < 3:
        raise ConfigError(f"a noisefree run needs at least 3 steps for the rate fit, got {steps}")
    caps = replace(RunCaps() if caps is None else caps, max_outer=int(steps))
    traj = alm_run(instance.K, instance.g, instance.penalty, schedule, p0=p0, stop=FixedRule(steps), caps=caps)

    errors = [_error(instance, state.u) for state in traj.states]
    t_values = [state.t for state in traj.states]
    exact_residuals = [state.residual for state in traj.states]

    bounds = None
    pen = instance.penalty
    is_l1 = isinstance(pen, LqPenalty) and pen.q == 1.0
    constants, constants_error = instance_sparse_constants(instance)
    if instance.certified:
        cert = instance.certificate
        bounds = check_error_bounds(traj, cert, instance.K, pen, instance.g, 0.0, gamma=gamma)
        if constants is not None:
            bounds.extend(sparse_error_bounds(traj, cert, constants, instance.K, instance.g, noisefree=True,
                                              gamma=gamma))

    # the 1/t_n rate needs K injective on the support
    band = (-1.3, -0.85) if constants is not None else None
    lhs = rhs = None
    if bounds is not None and is_l1:
        rows = bounds.by_name('sparse_noisefree_rate_bound')
        lhs, rhs = [row.lhs for row in rows], [row.rhs for row in rows]
    reports = [
        rate_report('error_vs_t', 't', 'error', t_values, errors, band=band, tail='high', lhs=lhs, rhs=rhs),
        rate_report('residual_vs_t', 't', 'exact_residual', t_values, exact_residuals, tail='high'),
    ]
    for report in reports:
        if report.band_ok is False:
            logger.warning(f"{report.name}: slope {report.slope:.3f} outside band {report.band}")
    extras: Dict[str, Any] = {'instance': instance.describe()}
    if constants_error is not None:
        extras['sparse_constants_error'] = constants_error
    return NoisefreeResult(trajectory=traj, errors=errors, reports=reports, bounds=bounds, constants=constants,
                           extras=extras)


class NoisefreePipeline(BasePipeline):
    mode = 'noisefree'

    def __init__(
        self,
        conf: DictConfig,
        instance: ProblemInstance,
        logger: Optional[StdOutLogger],
        timer: Timer,
        steps: int,
        schedule: StepSchedule,
        caps: RunCaps,
        p0: Optional[np.ndarray] = None,
        logging_dir: Optional[Path] = None,
    ):
        super(NoisefreePipeline, self).__init__(conf, instance, logger, timer, logging_dir)
        self.steps = steps
        self.schedule = schedule
        self.caps = caps
        self.p0 = p0
        self.result: Optional[NoisefreeResult] = None

    def run(self) -> bool:
        self.timer.start_record(name='noisefree')
        gamma = self.conf.get('stopping', {}).get('gamma', 2.0)
        self.result = noisefree_run(self.instance, self.steps, self.schedule, caps=self.caps, p0=self.p0,
                                    gamma=gamma)
        self.timer.end_record(name='noisefree')
        elapsed = self.timer.get(name='noisefree', as_pop=False)

        final = self.result.trajectory.final
        logger.info("-" * 40)
        self.log_results(prefix='noisefree', delta=0.0, gamma=final.n, t=final.t, residual=final.residual,
                         violations=self.result.violations, elapsed_time=elapsed)
        for report in self.result.reports:
            logger.info(report.summary_line())
        if self.result.band_failures:
            logger.warning(f"Rate bands missed: {self.result.band_failures}")
        logger.info("-" * 40)
        self.save_summary(elapsed)
        return self.result.ok

    def save_summary(self, elapsed: Optional[float] = None):
        final = self.result.trajectory.final
        summary = RunSummary(label=self.instance.label, delta=0.0, gamma=final.n, t_gamma=final.t,
                             residual=final.residual, stopped=self.result.trajectory.stopped,
                             violations=self.result.violations, total_time=elapsed, success=True)
        if self.logging_dir is None:
            return summary

        with open(self.logging_dir / "noisefree_report.json", 'w') as f:
            json.dump(self.result.to_dict(), f, indent=4)
        self.result.trajectory.to_frame().to_csv(self.logging_dir / "trajectory.csv", index=False)

        summary_path = self.logging_dir / f"{self.mode}_summary.json"
        with open(summary_path, 'w') as f:
            json.dump(asdict(summary), f, indent=4)
        logger.info(f"Noisefree summary saved at {str(summary_path)}")
        return summary
