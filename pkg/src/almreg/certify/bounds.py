import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..alm.state import AlmState, AlmTrajectory
from ..operators.base import BaseOperator, as_vector, inner, norm
from ..penalties.base import BasePenalty
from ..utils.exceptions import ConfigError
from .source import SourceCertificate

__all__ = ['BoundCheck', 'BoundReport', 'check_error_bounds', 'symmetric_distance', 'dual_bregman']

SLACK_FACTOR = 100.0
ROUGH_FACTOR = 5.0
DEFAULT_ALPHA = 0.25


@dataclass
class BoundCheck:
    """One inequality lhs <= rhs evaluated at iteration n. `partial` marks a dropped nonnegative lhs term."""
    name: str
    n: int
    lhs: float
    rhs: float
    tolerance: float
    partial: bool = False
    asserted: bool = True

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def ok(self) -> bool:
        return self.slack >= -self.tolerance

    def to_dict(self) -> Dict[str, object]:
        return {**asdict(self), 'slack': self.slack, 'ok': self.ok}


@dataclass
class BoundReport:
    rows: List[BoundCheck] = field(default_factory=list)

    def add(self, row: BoundCheck) -> None:
        self.rows.append(row)

    def extend(self, rows: List[BoundCheck]) -> None:
        self.rows.extend(rows)

    def by_name(self, name: str) -> List[BoundCheck]:
        return [row for row in self.rows if row.name == name]

    @property
    def violations(self) -> List[BoundCheck]:
        return [row for row in self.rows if row.asserted and not row.ok]

    @property
    def ok(self) -> bool:
        return not self.violations

    def min_slacks(self) -> Dict[str, float]:
        """Smallest slack per inequality name."""
        slacks: Dict[str, float] = {}
        for row in self.rows:
            slacks[row.name] = min(slacks.get(row.name, math.inf), row.slack)
        return slacks

    def to_dict(self) -> Dict[str, object]:
        return {'ok': self.ok, 'rows': [row.to_dict() for row in self.rows]}


def symmetric_distance(state: AlmState, cert: SourceCertificate, K: BaseOperator) -> float:
    """<K* p_n - K* p_dagger, u_n - u_dagger>, the symmetric Bregman distance for the dual-update subgradient."""
    return inner(state.p - cert.p_dagger, K.apply(state.u - cert.u_dagger))


def dual_bregman(state: AlmState, cert: SourceCertificate, K: BaseOperator, pen: BasePenalty) -> Optional[float]:
    """D_{J*}(K* p_n, K* p_dagger) with u_dagger as subgradient of J* at K* p_dagger; None without a finite J*."""
    if not pen.has_conjugate:
        return None
    xi_n = K.adjoint_apply(state.p)
    conj_n, conj_dagger = pen.conjugate(xi_n), pen.conjugate(cert.xi)
    if conj_n is None or conj_dagger is None or not (math.isfinite(conj_n) and math.isfinite(conj_dagger)):
        return None
    return conj_n - conj_dagger - inner(cert.u_dagger, xi_n - cert.xi)


def _tolerance(tol: float, t: float, rhs: float, factor: float = SLACK_FACTOR) -> float:
    return factor * tol * (1.0 + t) * (1.0 + abs(rhs))


def check_error_bounds(traj: AlmTrajectory, cert: SourceCertificate, K: BaseOperator, pen: BasePenalty, g,
                       delta: float, gamma: float = 2.0, rho: Optional[float] = None,
                       alpha: float = DEFAULT_ALPHA, assert_rough: bool = False,
                       tau_bar: Optional[float] = None) -> BoundReport:
    """Evaluate the error estimates of a source-certified run as lhs/rhs pairs; never raises on a violation.

    Per iteration n:
      dual_bregman_estimate: D_J*(K*p_n, K*p†) + t_n/4 ||K u_n - g||^2 + (gamma - 1)/(2 gamma t_n) ||p_n - p†||^2
                             <= ||p† - p0||^2/(2 t_n) + (1 + gamma) t_n delta^2 / 2
      weighted_bregman_estimate: alpha D_sym + D_J* <= (1 - alpha)/(1 - 2 alpha) delta^2 t_n + ||p† - p0||^2/(2 t_n)
      symmetric_bregman_residual_estimate: D_sym <= ||K u_n - g|| (delta t_n + sqrt(delta^2 t_n^2 + ||p0 - p†||^2))
      exact_data_residual_bound (delta = 0 only): ||K u_n - g|| <= 2 ||p0 - p†|| / t_n
    At the discrepancy-stopped index (when `rho` is given and the run stopped):
      discrepancy_time_bound: delta t_Gamma <= ||p† - p0|| / sqrt(rho - 1) + delta tau_bar
      discrepancy_bregman_bound: D_sym <= (rho + 1) delta F with
        F = (sqrt(rho) + 1)/sqrt(rho - 1) ||p† - p0||
            + (2 tau_bar delta ||p† - p0|| / sqrt(rho - 1) + delta^2 tau_bar^2)^(1/2)
      discrepancy_bregman_bound_rho: the same with rho delta in place of (rho + 1) delta (reported only)
      rough_discrepancy_bound: D_sym < 5 ||p0 - p†|| delta (asserted when `assert_rough`)
    D_J* is dropped (row marked partial) when J* has no finite closed form at the iterates.
    """
    if not cert.certified:
        raise ConfigError("error bounds need a certified source condition")
    if not 0.0 < alpha < 0.5:
        raise ConfigError(f"alpha must lie in (0, 1/2), got {alpha}")
    if not gamma > 0:
        raise ConfigError(f"gamma must be positive, got {gamma}")
    if delta < 0:
        raise ConfigError(f"delta must be nonnegative, got {delta}")
    g = as_vector(g, K.dim_out)
    tol = traj.inner_tol
    dist0 = norm(cert.p_dagger - traj.p0)
    report = BoundReport()

    for state in traj.states:
        t = state.t
        exact_residual = norm(K.apply(state.u) - g)
        d_sym = symmetric_distance(state, cert, K)
        d_conj = dual_bregman(state, cert, K, pen)
        partial = d_conj is None
        d_conj = 0.0 if partial else d_conj
        p_dist = norm(state.p - cert.p_dagger)

        lhs = d_conj + t / 4.0 * exact_residual ** 2 + (gamma - 1.0) / (2.0 * gamma * t) * p_dist ** 2
        rhs = dist0 ** 2 / (2.0 * t) + (1.0 + gamma) * t * delta ** 2 / 2.0
        report.add(BoundCheck('dual_bregman_estimate', state.n, lhs, rhs, _tolerance(tol, t, rhs), partial=partial))

        lhs = alpha * d_sym + d_conj
        rhs = (1.0 - alpha) / (1.0 - 2.0 * alpha) * delta ** 2 * t + dist0 ** 2 / (2.0 * t)
        report.add(BoundCheck('weighted_bregman_estimate', state.n, lhs, rhs, _tolerance(tol, t, rhs), partial=partial))

        rhs = exact_residual * (delta * t + math.sqrt((delta * t) ** 2 + dist0 ** 2))
        report.add(BoundCheck('symmetric_bregman_residual_estimate', state.n, d_sym, rhs, _tolerance(tol, t, rhs)))

        if delta == 0.0:
            rhs = 2.0 * dist0 / t
            report.add(BoundCheck('exact_data_residual_bound', state.n, exact_residual, rhs, _tolerance(tol, t, rhs)))

    if rho is not None and traj.stopped and delta > 0:
        report.extend(_discrepancy_rows(traj, cert, K, delta, rho, dist0, tol, assert_rough, tau_bar))
    return report


def _discrepancy_rows(traj: AlmTrajectory, cert: SourceCertificate, K: BaseOperator, delta: float, rho: float,
                      dist0: float, tol: float, assert_rough: bool,
                      tau_bar: Optional[float]) -> List[BoundCheck]:
    if not rho > 1:
        raise ConfigError(f"rho must exceed 1, got {rho}")
    state = traj.final
    t = state.t
    tau_bar = max(s.tau for s in traj.states) if tau_bar is None else tau_bar
    d_sym = symmetric_distance(state, cert, K)

    rows = []
    rhs = dist0 / math.sqrt(rho - 1.0) + delta * tau_bar
    rows.append(BoundCheck('discrepancy_time_bound', state.n, delta * t, rhs, _tolerance(tol, t, rhs)))

    factor = (math.sqrt(rho) + 1.0) / math.sqrt(rho - 1.0) * dist0 \
        + math.sqrt(2.0 * tau_bar * delta * dist0 / math.sqrt(rho - 1.0) + (delta * tau_bar) ** 2)
    rhs = (rho + 1.0) * delta * factor
    rows.append(BoundCheck('discrepancy_bregman_bound', state.n, d_sym, rhs, _tolerance(tol, t, rhs)))
    rhs = rho * delta * factor
    rows.append(BoundCheck('discrepancy_bregman_bound_rho', state.n, d_sym, rhs, _tolerance(tol, t, rhs),
                           asserted=False))

    rhs = ROUGH_FACTOR * dist0 * delta
    rows.append(BoundCheck('rough_discrepancy_bound', state.n, d_sym, rhs, _tolerance(tol, t, rhs),
                           asserted=assert_rough))
    return rows
