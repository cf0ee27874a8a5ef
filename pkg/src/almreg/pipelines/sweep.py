import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from loguru import logger
from omegaconf import DictConfig
from tqdm import tqdm

from ..alm.iteration import alm_run
from ..alm.state import AlmTrajectory, RunCaps
from ..certify.bounds import BoundReport
from ..certify.fit import RateReport, rate_report
from ..loggers.report import report_emit
from ..loggers.stdout import StdOutLogger
from ..operators.base import norm
from ..penalties.lq import LqPenalty
from ..penalties.quadratic import QuadraticPenalty
from ..penalties.tv import TVPenalty
from ..problems.base import ProblemInstance
from ..problems.noise import add_noise
from ..schedulers.base import StepSchedule
from ..schedulers.constant import ConstantSchedule
from ..stopping.degeneracy import DegeneracyReport, degenerate_detect, degenerate_diagnostics
from ..stopping.morozov import MorozovRule, check_rho_delta
from ..stopping.record import SweepRecord
from ..stopping.rho import optimal_rho
from ..utils.exceptions import ConfigError
from ..utils.record import SweepSummary, Timer
from .base import BasePipeline
from .diagnostics import evaluate_run, instance_sparse_constants

__all__ = ['SweepConfig', 'SweepResult', 'SweepPipeline', 'sweep_run']

ROUGH_RHO_TOL = 1e-3
ZERO_TOL = 1e-10


@dataclass
class SweepConfig:
    """Noise levels delta_k = delta0 factor^k for k = 0..count-1, each solved with the discrepancy rule."""
    delta0: float
    factor: float = 0.5
    count: int = 8
    rho: Optional[float] = None
    schedule: StepSchedule = field(default_factory=lambda: ConstantSchedule(1.0))
    caps: RunCaps = field(default_factory=RunCaps)
    p0: Optional[np.ndarray] = None
    noise_seed: Optional[int] = None
    gamma: float = 2.0
    alpha: float = 0.25
    degeneracy_window: int = 4
    output_dir: Optional[Path] = None
    report_format: Literal['json', 'csv'] = 'json'

    def __post_init__(self):
        if not self.delta0 > 0:
            raise ConfigError(f"delta0 must be positive, got {self.delta0}")
        if not 0.0 < self.factor < 1.0:
            raise ConfigError(f"factor must lie in (0, 1), got {self.factor}")
        if int(self.count) < 1:
            raise ConfigError(f"count must be >= 1, got {self.count}")
        if self.rho is None:
            self.rho = optimal_rho()[0]
        check_rho_delta(self.rho, self.delta0)

    @property
    def deltas(self) -> List[float]:
        return [float(self.delta0 * self.factor ** k) for k in range(int(self.count))]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'delta0': self.delta0,
            'factor': self.factor,
            'count': int(self.count),
            'rho': self.rho,
            'schedule': self.schedule.to_dict(),
            'caps': asdict(self.caps),
            'p0': None if self.p0 is None else np.asarray(self.p0, dtype=np.float64).tolist(),
            'noise_seed': self.noise_seed,
            'gamma': self.gamma,
            'alpha': self.alpha,
            'degeneracy_window': self.degeneracy_window,
        }


@dataclass
class SweepResult:
    record: SweepRecord
    reports: List[RateReport]
    degeneracy: DegeneracyReport
    mode: Literal['rates', 'convergence']
    observations: Dict[str, Any] = field(default_factory=dict)
    bounds: List[Optional[BoundReport]] = field(default_factory=list)
    trajectories: List[AlmTrajectory] = field(default_factory=list)

    @property
    def violations(self) -> List[str]:
        return [f"delta={run.delta:.4e}: {name}" for run in self.record.runs for name in run.violations]

    @property
    def band_failures(self) -> List[str]:
        """Missed rate bands of a certified sweep whose stopping index keeps growing; others only report them."""
        if self.mode != 'rates' or self.degeneracy.degenerate:
            return []
        return [report.name for report in self.reports if report.band_ok is False]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.band_failures

    def report(self, name: str) -> Optional[RateReport]:
        return next((report for report in self.reports if report.name == name), None)

    def extras(self) -> Dict[str, Any]:
        return {
            'mode': self.mode,
            'ok': self.ok,
            'violations': self.violations,
            'band_failures': self.band_failures,
            'degeneracy': self.degeneracy.to_dict(),
            'observations': self.observations,
        }


def _fit_points(record: SweepRecord, key: str) -> List[Optional[float]]:
    """Per-run value of `key` (a RunRecord field or a distance name); unstopped runs give None."""
    values = []
    for run in record.runs:
        value = getattr(run, key) if hasattr(run, key) else run.distances.get(key)
        values.append(value if run.stopped else None)
    return values


def _bound_pairs(bounds: List[Optional[BoundReport]], name: str) -> Tuple[List[Optional[float]], List[Optional[float]]]:
    lhs, rhs = [], []
    for report in bounds:
        rows = [] if report is None else report.by_name(name)
        lhs.append(rows[-1].lhs if rows else None)
        rhs.append(rows[-1].rhs if rows else None)
    return lhs, rhs


def _rate_reports(instance: ProblemInstance, record: SweepRecord, bounds: List[Optional[BoundReport]],
                  certified: bool) -> List[RateReport]:
    pen = instance.penalty
    deltas = record.deltas
    reports = []
    if certified:
        lhs, rhs = _bound_pairs(bounds, 'discrepancy_bregman_bound')
        band = (1.0, math.inf) if isinstance(pen, QuadraticPenalty) else (0.8, math.inf)
        scale = max(1.0, norm(instance.p_dagger) * norm(instance.u_dagger))
        reports.append(rate_report('d_sym_vs_delta', 'delta', 'd_sym', deltas, _fit_points(record, 'd_sym'),
                                   band=band, lhs=lhs, rhs=rhs, zero_tol=ZERO_TOL * scale))

    if isinstance(pen, LqPenalty) and pen.q == 1.0:
        lhs, rhs = _bound_pairs(bounds, 'sparse_discrepancy_bound')
        reports.append(rate_report('l1_error_vs_delta', 'delta', 'l1_error', deltas, _fit_points(record, 'l1_error'),
                                   band=(0.8, 1.3) if certified else None, lhs=lhs, rhs=rhs))
    elif isinstance(pen, LqPenalty):
        reports.append(rate_report('lq_error_vs_delta', 'delta', 'lq_error', deltas, _fit_points(record, 'lq_error'),
                                   band=(0.4, math.inf) if certified else None))
        if certified:
            reports.append(rate_report('xi_error_vs_delta', 'delta', 'xi_error', deltas,
                                       _fit_points(record, 'xi_error'), band=(0.25, math.inf)))
    elif isinstance(pen, QuadraticPenalty):
        reports.append(rate_report('l2_error_vs_delta', 'delta', 'l2_error', deltas, _fit_points(record, 'l2_error')))
    elif isinstance(pen, TVPenalty):
        reports.append(rate_report('strict_d_vs_delta', 'delta', 'd', deltas, _fit_points(record, 'd'),
                                   band=(0.75, 1.4) if certified else None))
        reports.append(rate_report('strict_d_tilde_vs_delta', 'delta', 'd_tilde', deltas,
                                   _fit_points(record, 'd_tilde')))

    if not certified:
        reports.append(rate_report('residual_vs_t', 't_gamma', 'exact_residual', record.t_values,
                                   _fit_points(record, 'exact_residual'), band=(-math.inf, -0.5), tail='high'))
        reports.append(rate_report('penalty_gap_vs_delta', 'delta', 'penalty_gap', deltas,
                                   _fit_points(record, 'penalty_gap')))
    return reports


def _observations(record: SweepRecord) -> Dict[str, Any]:
    """Quantities that stay bounded along a sweep when the rates hold:
    ||p_Gamma||, delta t_Gamma and t_Gamma ||K u - g||."""
    runs = record.stopped_runs
    p_norms = [run.p_norm for run in runs]
    delta_t = [run.delta * run.t_gamma for run in runs]
    t_residual = [run.t_gamma * run.exact_residual for run in runs]
    return {
        'p_norm': p_norms,
        'delta_t': delta_t,
        't_residual': t_residual,
        'p_norm_max': max(p_norms) if p_norms else None,
        'delta_t_max': max(delta_t) if delta_t else None,
        't_residual_max': max(t_residual) if t_residual else None,
        'last_discrepancy': [run.last_discrepancy for run in record.runs],
    }


def sweep_run(instance: ProblemInstance, cfg: SweepConfig, stdout: Optional[StdOutLogger] = None) -> SweepResult:
    """Discrepancy-stopped runs over the geometric noise levels of `cfg`, followed by rate fits and the
    degeneracy check. Certified instances get the error bounds and rate bands; others run in
    convergence-only mode."""
    certified = instance.certified
    mode = 'rates' if certified else 'convergence'
    noise_seed = instance.seed if cfg.noise_seed is None else int(cfg.noise_seed)
    constants, constants_error = instance_sparse_constants(instance)
    assert_rough = abs(cfg.rho - optimal_rho()[0]) < ROUGH_RHO_TOL
    record = SweepRecord(label=instance.label, rho=float(cfg.rho), config=cfg.to_dict(), seed=instance.seed)

    bounds, trajectories = [], []
    deltas = cfg.deltas
    for index, delta in enumerate(tqdm(deltas, leave=False)):
        noisy = add_noise(instance.g, delta, noise_seed)
        traj = alm_run(instance.K, noisy.g_delta, instance.penalty, cfg.schedule, p0=cfg.p0,
                       stop=MorozovRule(cfg.rho, delta), caps=cfg.caps)
        run, run_bounds = evaluate_run(instance, traj, delta, rho=cfg.rho, gamma=cfg.gamma, alpha=cfg.alpha,
                                       constants=constants, noise_seed=noise_seed, tau_bar=cfg.schedule.tau_bar,
                                       assert_rough=assert_rough and index >= len(deltas) // 2)
        record.append(run)
        bounds.append(run_bounds)
        trajectories.append(traj)
        if stdout is not None:
            stdout(prefix='sweep', index=index, delta=delta, gamma=run.gamma, t=run.t_gamma, residual=run.residual,
                   violations=run.violations)

    degeneracy = degenerate_detect(record, window=cfg.degeneracy_window)
    if degeneracy.degenerate:
        degenerate_diagnostics(record, degeneracy)
        logger.info(f"Stopping index stays at {degeneracy.N} over the last {degeneracy.window} noise levels")

    observations = _observations(record)
    if constants is not None:
        observations['sparse_constants'] = constants.to_dict()
    if constants_error is not None:
        observations['sparse_constants_error'] = constants_error

    reports = _rate_reports(instance, record, bounds, certified)
    for report in reports:
        if report.disagreement:
            logger.warning(f"{report.name}: full fit {report.slope:.3f} and small-delta fit "
                           f"{report.tail_slope:.3f} disagree")
        if degeneracy.degenerate and report.band is not None:
            bounded = f"stopping index bounded at {degeneracy.N}, band reported only"
            report.note = bounded if report.note is None else f"{report.note}; {bounded}"
        if report.band_ok is False:
            logger.warning(f"{report.name}: slope {report.slope:.3f} outside band {report.band}")

    return SweepResult(record=record, reports=reports, degeneracy=degeneracy, mode=mode, observations=observations,
                       bounds=bounds, trajectories=trajectories)


class SweepPipeline(BasePipeline):
    mode = 'sweep'

    def __init__(
        self,
        conf: DictConfig,
        instance: ProblemInstance,
        logger: Optional[StdOutLogger],
        timer: Timer,
        sweep_config: SweepConfig,
        logging_dir: Optional[Path] = None,
    ):
        super(SweepPipeline, self).__init__(conf, instance, logger, timer, logging_dir)
        self.sweep_config = sweep_config
        self.result: Optional[SweepResult] = None

    def run(self) -> bool:
        self.timer.start_record(name='sweep')
        self.result = sweep_run(self.instance, self.sweep_config, stdout=self.logger)
        self.timer.end_record(name='sweep')
        elapsed = self.timer.get(name='sweep', as_pop=False)

        logger.info("-" * 40)
        for report in self.result.reports:
            logger.info(report.summary_line())
        logger.info(f"Sweep over {len(self.result.record.runs)} noise levels finished in {elapsed:.2f}s")
        if self.result.violations:
            logger.warning(f"{len(self.result.violations)} asserted violations: {self.result.violations}")
        if self.result.band_failures:
            logger.warning(f"Rate bands missed: {self.result.band_failures}")
        logger.info("-" * 40)

        self.save_summary(elapsed)
        return self.result.ok

    def save_summary(self, elapsed: Optional[float] = None):
        result = self.result
        summary = SweepSummary(
            label=self.instance.label,
            deltas=result.record.deltas,
            gamma_indices=result.record.gamma_indices,
            slopes={report.name: report.slope for report in result.reports},
            degenerate_index=result.degeneracy.N,
            gamma_trend=result.degeneracy.trend,
            violations=result.violations,
            band_failures=result.band_failures,
            total_time=elapsed,
            success=True,
        )
        output_dir = self.sweep_config.output_dir or self.logging_dir
        if output_dir is None:
            return summary
        report_emit(result.record, result.reports, self.sweep_config.report_format, Path(output_dir) / "sweep_report",
                    extras=result.extras())
        summary_path = Path(output_dir) / f"{self.mode}_summary.json"
        with open(summary_path, 'w') as f:
            json.dump(asdict(summary), f, indent=4)
        logger.info(f"Sweep summary saved at {str(summary_path)}")
        return summary
