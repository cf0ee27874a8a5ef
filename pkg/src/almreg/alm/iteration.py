from typing import Optional

import numpy as np
from loguru import logger

from ..operators.base import BaseOperator, as_vector, norm
from ..penalties.base import BasePenalty, SubproblemSpec
from ..schedulers.base import StepSchedule
from ..stopping.base import BaseStoppingRule
from ..stopping.fixed import FixedRule
from ..utils.exceptions import ConfigError
from .dual import dual_objective
from .state import AlmState, AlmTrajectory, RunCaps

__all__ = ['alm_step', 'alm_run', 'initial_state']


def initial_state(K: BaseOperator, g_delta, pen: BasePenalty, p0=None) -> AlmState:
    g_delta = as_vector(g_delta, K.dim_out)
    p0 = np.zeros(K.dim_out) if p0 is None else as_vector(p0, K.dim_out)
    u0 = np.zeros(K.dim_in)
    return AlmState(n=0, u=u0, p=p0, t=0.0, tau=0.0, residual=norm(g_delta),
                    penalty_value=pen(u0), dual_value=dual_objective(p0, g_delta, K, pen))


def alm_step(prev: AlmState, K: BaseOperator, g_delta, pen: BasePenalty, tau_n: float,
             tol: Optional[float] = None, max_inner: int = 5000) -> AlmState:
    """One outer step: u_n minimizes (tau_n/2)||K u - b||^2 + J(u) with b = g_delta + p_(n-1)/tau_n,
    then p_n = p_(n-1) + tau_n (g_delta - K u_n)."""
    if not tau_n > 0:
        raise ConfigError(f"tau_n must be positive, got {tau_n}")
    g_delta = as_vector(g_delta, K.dim_out)
    tol = pen.default_tol if tol is None else tol
    spec = SubproblemSpec(K=K, b=g_delta + prev.p / tau_n, tau=tau_n, tol=tol, max_inner_iters=max_inner, u0=prev.u)
    u, diagnostics = pen.solve_subproblem(spec)

    discrepancy = g_delta - K.apply(u)
    p = prev.p + tau_n * discrepancy
    return AlmState(
        n=prev.n + 1,
        u=u,
        p=p,
        t=prev.t + tau_n,
        tau=tau_n,
        residual=norm(discrepancy),
        penalty_value=pen(u),
        dual_value=dual_objective(p, g_delta, K, pen),
        inexact=diagnostics.inexact,
        inner_iterations=diagnostics.iterations,
        inner_measure=diagnostics.measure,
    )


def alm_run(K: BaseOperator, g_delta, pen: BasePenalty, schedule: StepSchedule, p0=None,
            stop: Optional[BaseStoppingRule] = None, caps: Optional[RunCaps] = None) -> AlmTrajectory:
    """Iterate until `stop` fires or `caps.max_outer` steps are done. Without a rule, run exactly max_outer steps."""
    caps = RunCaps() if caps is None else caps
    stop = FixedRule(caps.max_outer) if stop is None else stop
    tol = pen.default_tol if caps.inner_tol is None else caps.inner_tol
    g_delta = as_vector(g_delta, K.dim_out)
    if pen.dim is not None and pen.dim != K.dim_in:
        raise ConfigError(f"Penalty acts on length {pen.dim}, K on length {K.dim_in}")

    state = initial_state(K, g_delta, pen, p0)
    initial = state
    states = []
    stopped = False
    for n in range(1, caps.max_outer + 1):
        state = alm_step(state, K, g_delta, pen, schedule.tau(n), tol=tol, max_inner=caps.max_inner)
        states.append(state)
        logger.debug(f"[{n}] t={state.t:.4g} residual={state.residual:.6e} J={state.penalty_value:.6e} "
                     f"inner={state.inner_iterations}")
        if state.inexact:
            logger.warning(f"[{n}] inner solve inexact (measure {state.inner_measure:.3e} > tol {tol:.1e})")
        if stop.fires(state):
            stopped = True
            break

    if not stopped:
        logger.warning(f"{stop.describe()} did not fire within {caps.max_outer} outer iterations")

    return AlmTrajectory(
        states=tuple(states),
        initial=initial,
        g_delta=g_delta,
        schedule=schedule.to_dict(),
        inner_tol=tol,
        max_inner=caps.max_inner,
        stop=stop.describe(),
        stopped=stopped,
        penalty=pen.describe(),
    )
