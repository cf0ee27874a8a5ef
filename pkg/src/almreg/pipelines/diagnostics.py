import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from ..alm.dual import gueler_slack
from ..alm.state import AlmTrajectory
from ..certify.bounds import BoundReport, check_error_bounds, symmetric_distance
from ..certify.lq_rates import lq_norm, lq_norm_rate_inputs
from ..certify.sparse import SparseConstants, sparse_constants, sparse_error_bounds
from ..certify.strict import strict_metrics
from ..operators.base import norm
from ..penalties.lq import LqPenalty
from ..penalties.quadratic import QuadraticPenalty
from ..penalties.tv import TVPenalty
from ..problems.base import ProblemInstance
from ..stopping.morozov import last_discrepancy_index
from ..stopping.record import RunRecord
from ..utils.exceptions import RestrictedInjectivityError

__all__ = ['distances', 'bracket_holds', 'evaluate_run', 'instance_sparse_constants', 'min_gueler_slack']


def distances(instance: ProblemInstance, traj: AlmTrajectory) -> Dict[str, Optional[float]]:
    """Penalty-specific errors of the final iterate against u_dagger."""
    pen = instance.penalty
    state = traj.final
    error = state.u - instance.u_dagger
    values: Dict[str, Optional[float]] = {'penalty_gap': abs(pen(state.u) - pen(instance.u_dagger))}
    if isinstance(pen, LqPenalty) and pen.q == 1.0:
        values['l1_error'] = float(np.sum(np.abs(error)))
    elif isinstance(pen, LqPenalty):
        values['lq_error'] = lq_norm(error, pen.q)
        if instance.certified:
            values['xi_error'] = lq_norm(instance.K.adjoint_apply(state.p) - instance.certificate.xi, pen.r)
    elif isinstance(pen, QuadraticPenalty):
        values['l2_error'] = norm(error)
    elif isinstance(pen, TVPenalty):
        values['d_tilde'], values['d'] = strict_metrics(state.u, instance.u_dagger, instance.K, pen)
    return values


def bracket_holds(traj: AlmTrajectory, rho: float, delta: float) -> bool:
    """residual(Gamma) < rho delta and, for Gamma > 1, residual(Gamma - 1) >= rho delta."""
    if not traj.stopped:
        return False
    gamma = traj.gamma
    threshold = rho * delta
    if not traj.state(gamma).residual < threshold:
        return False
    return gamma == 1 or traj.state(gamma - 1).residual >= threshold


def min_gueler_slack(instance: ProblemInstance, traj: AlmTrajectory) -> Optional[float]:
    """Smallest slack of the dual descent estimate with p_dagger as reference; None when it is not finite."""
    if not instance.certified:
        return None
    rows = gueler_slack(traj, instance.p_dagger, traj.g_delta, instance.K, instance.penalty)
    if not rows:
        return None
    slack = min(row.slack for row in rows)
    return slack if math.isfinite(slack) else None


def instance_sparse_constants(instance: ProblemInstance) -> Tuple[Optional[SparseConstants], Optional[str]]:
    """Sparse constants of a certified l1 instance, or the restricted-injectivity failure as a message."""
    pen = instance.penalty
    if not (instance.certified and isinstance(pen, LqPenalty) and pen.q == 1.0):
        return None, None
    try:
        return sparse_constants(instance.K, instance.certificate, seed=instance.seed), None
    except RestrictedInjectivityError as e:
        logger.warning(f"sparse bounds skipped: {e}")
        return None, str(e)


def _unique(names: List[str]) -> List[str]:
    return list(dict.fromkeys(names))


def evaluate_run(instance: ProblemInstance, traj: AlmTrajectory, delta: float, rho: Optional[float] = None,
                 gamma: float = 2.0, alpha: float = 0.25, constants: Optional[SparseConstants] = None,
                 noise_seed: Optional[int] = None, tau_bar: Optional[float] = None,
                 assert_rough: bool = False) -> Tuple[RunRecord, Optional[BoundReport]]:
    """Collect the diagnostics of one run; rho is given for discrepancy-stopped runs only."""
    K, g = instance.K, instance.g
    state = traj.final
    violations: List[str] = []

    bracket_ok = True
    last_discrepancy = None
    if rho is not None:
        bracket_ok = bracket_holds(traj, rho, delta)
        last_discrepancy = last_discrepancy_index(traj.residuals, rho, delta)
        if not traj.stopped:
            violations.append('unstopped')
        elif not bracket_ok:
            violations.append('bracketing')
    monotone_ok = not traj.residual_monotonicity_violations()
    if not monotone_ok:
        violations.append('monotonicity')

    run_distances = distances(instance, traj)
    bounds = None
    bound_slacks: Dict[str, float] = {}
    d_sym = None
    if instance.certified:
        cert = instance.certificate
        d_sym = symmetric_distance(state, cert, K)
        bounds = check_error_bounds(traj, cert, K, instance.penalty, g, delta, gamma=gamma, rho=rho, alpha=alpha,
                                    assert_rough=assert_rough, tau_bar=tau_bar)
        if constants is not None:
            bounds.extend(sparse_error_bounds(traj, cert, constants, K, g, noisefree=delta == 0.0, gamma=gamma))
        bound_slacks = {name: float(slack) for name, slack in bounds.min_slacks().items()}
        violations.extend(row.name for row in bounds.violations)

        pen = instance.penalty
        if isinstance(pen, LqPenalty) and pen.q > 1.0 and np.any(instance.u_dagger != 0):
            lq_inputs = lq_norm_rate_inputs(cert, state, K, pen.q)
            if not lq_inputs.lower_bound_ok:
                violations.append('lq_bregman_lower_bound')

        gueler = min_gueler_slack(instance, traj)
        if gueler is not None:
            bound_slacks['gueler'] = gueler

    record = RunRecord(
        delta=float(delta),
        gamma=traj.gamma,
        t_gamma=float(state.t) if traj.stopped else None,
        residual=float(state.residual),
        stopped=traj.stopped,
        exact_residual=norm(K.apply(state.u) - g),
        d_sym=None if d_sym is None else float(d_sym),
        distances={name: None if value is None else float(value) for name, value in run_distances.items()},
        p_norm=norm(state.p),
        dual_value=None if state.dual_value is None else float(state.dual_value),
        penalty_value=float(state.penalty_value),
        last_discrepancy=last_discrepancy,
        inexact=traj.any_inexact,
        bracket_ok=bracket_ok,
        monotone_ok=monotone_ok,
        noise_seed=noise_seed,
        bound_slacks=bound_slacks,
        violations=_unique(violations),
    )
    return record, bounds
