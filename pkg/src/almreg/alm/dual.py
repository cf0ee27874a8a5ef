from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..operators.base import BaseOperator, as_vector, inner
from ..penalties.base import BasePenalty
from .state import AlmTrajectory

__all__ = ['dual_objective', 'gueler_slack', 'GuelerSlack']

SLACK_FACTOR = 100.0


def dual_objective(p_vec, data, K: BaseOperator, pen: BasePenalty) -> Optional[float]:
    """G(p, data) = J*(K* p) - <p, data>. None when J* has no closed form; +inf outside the domain of J*."""
    if not pen.has_conjugate:
        return None
    p_vec = as_vector(p_vec, K.dim_out)
    data = as_vector(data, K.dim_out)
    conj = pen.conjugate(K.adjoint_apply(p_vec))
    if conj is None:
        return None
    return conj - inner(p_vec, data)


@dataclass(frozen=True)
class GuelerSlack:
    n: int
    lhs: float
    rhs: float
    slack: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.slack >= -self.tolerance


def gueler_slack(traj: AlmTrajectory, p_ref, data, K: BaseOperator, pen: BasePenalty,
                 factor: float = SLACK_FACTOR) -> Optional[List[GuelerSlack]]:
    """Per-step slack of the proximal-point descent estimate for the dual sequence.

    lhs = G(p_n) - G(p_ref),
    rhs = ||p_ref - p0||^2/(2 t_n) - ||p_ref - p_n||^2/(2 t_n) - t_n ||p_n - p_(n-1)||^2/(2 tau_n^2),
    slack = rhs - lhs, accepted down to -factor * tol * (1 + t_n).
    """
    G_ref = dual_objective(p_ref, data, K, pen)
    if G_ref is None:
        return None
    p_ref = as_vector(p_ref, K.dim_out)
    p0 = traj.p0
    rows = []
    for state in traj.states:
        G_n = dual_objective(state.p, data, K, pen)
        t, tau = state.t, state.tau
        step = state.p - traj.previous_p(state.n)
        rhs = (float(np.sum((p_ref - p0) ** 2)) - float(np.sum((p_ref - state.p) ** 2))) / (2.0 * t) \
            - t * float(np.dot(step, step)) / (2.0 * tau ** 2)
        lhs = G_n - G_ref
        rows.append(GuelerSlack(n=state.n, lhs=lhs, rhs=rhs, slack=rhs - lhs,
                                tolerance=factor * traj.inner_tol * (1.0 + t)))
    return rows
