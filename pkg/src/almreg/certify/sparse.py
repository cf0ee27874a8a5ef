import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional

import numpy as np
from loguru import logger
from scipy.linalg import svdvals

from ..alm.state import AlmTrajectory
from ..operators.base import BaseOperator, as_vector, norm
from ..utils.exceptions import ConfigError, RestrictedInjectivityError
from .bounds import BoundCheck, symmetric_distance
from .source import SourceCertificate

__all__ = ['SparseConstants', 'sparse_constants', 'sparse_error_bounds']

INJECTIVITY_RTOL = 1e-12
PROBE_COUNT = 500
PROBE_TOL = 1e-12


@dataclass
class SparseConstants:
    """Constants of the lower estimate J(u) - J(u†) >= beta1 J(u - u†) - beta2 ||K(u - u†)|| for l1."""
    c: float
    beta1: float
    beta2: float
    K_norm: float
    theta: float
    sigma_min: float
    support_size: int
    p_norm: float
    beta1_unscaled: float = 0.0
    beta2_unscaled: float = 0.0
    probes: int = 0
    probe_violations: int = 0
    unscaled_violations: int = 0
    worst_probe_slack: Optional[float] = None

    @property
    def probes_ok(self) -> bool:
        return self.probe_violations == 0

    @property
    def scaled(self) -> bool:
        """True when c < 1, where the pair without the max(1, 1/c) factor is not guaranteed."""
        return self.c < 1.0

    def noisefree_constant(self, gamma: float = 2.0) -> float:
        """C in ||u_n - u†||_1 <= C / t_n for exact data and p0 = 0."""
        return (gamma + self.beta2) * self.p_norm / self.beta1

    def lower_estimate(self, J_diff: float, J_error: float, K_error_norm: float, unscaled: bool = False) -> float:
        beta1, beta2 = (self.beta1_unscaled, self.beta2_unscaled) if unscaled else (self.beta1, self.beta2)
        return J_diff - (beta1 * J_error - beta2 * K_error_norm)

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data['scaled'] = self.scaled
        return data


def sparse_constants(K: BaseOperator, cert: SourceCertificate, probes: int = PROBE_COUNT,
                     seed: int = 0) -> SparseConstants:
    """Restricted-injectivity constant and the beta1/beta2 pair, verified on random probes.

    c = sigma_min(K_I)/sqrt(|I|) bounds ||K P_I u|| >= c ||P_I u||_1. With A = ||K|| max(1, 1/c) + 1,
    beta1 = (1 - theta)/A and beta2 = (1 - theta)/(A c) + ||p†||. The unscaled pair uses A = ||K|| + 1;
    both agree for c >= 1 and both are checked on the probes.
    """
    if cert.support is None or cert.theta is None:
        raise ConfigError("sparse constants need an l1 certificate with support and theta")
    if not cert.certified:
        raise ConfigError("sparse constants need a certified l1 source condition")
    support = cert.support
    if support.size == 0:
        raise ConfigError("certificate support is empty")

    dense = K.to_dense()
    K_norm = float(svdvals(dense)[0])
    restricted = svdvals(dense[:, support])
    sigma_min = float(restricted[-1]) if restricted.size == support.size else 0.0
    if sigma_min <= INJECTIVITY_RTOL * max(float(restricted[0]), 1.0):
        raise RestrictedInjectivityError(sigma_min, int(support.size))

    c = sigma_min / math.sqrt(support.size)
    A = K_norm * max(1.0, 1.0 / c) + 1.0
    A_unscaled = K_norm + 1.0
    theta = cert.theta
    constants = SparseConstants(
        c=c,
        beta1=(1.0 - theta) / A,
        beta2=(1.0 - theta) / (A * c) + cert.p_norm,
        K_norm=K_norm,
        theta=theta,
        sigma_min=sigma_min,
        support_size=int(support.size),
        p_norm=cert.p_norm,
        beta1_unscaled=(1.0 - theta) / A_unscaled,
        beta2_unscaled=(1.0 - theta) / (A_unscaled * c) + cert.p_norm,
    )
    _probe(constants, dense, cert.u_dagger, probes, seed)
    logger.info(f"sparse constants: c={c:.4g} beta1={constants.beta1:.4g} beta2={constants.beta2:.4g} "
                f"({constants.probe_violations} probe violations)")
    if constants.scaled:
        logger.info(f"without the 1/c scaling: beta1={constants.beta1_unscaled:.4g} "
                    f"beta2={constants.beta2_unscaled:.4g} ({constants.unscaled_violations} unscaled violations)")
    return constants


def _probe(constants: SparseConstants, dense: np.ndarray, u_dagger: np.ndarray, probes: int, seed: int) -> None:
    rng = np.random.default_rng(seed)
    n = u_dagger.size
    J_dagger = float(np.sum(np.abs(u_dagger)))
    worst = math.inf
    for index in range(probes):
        scale = 10.0 ** rng.uniform(-3, 1)
        w = scale * rng.standard_normal(n)
        if index % 2:
            w *= rng.random(n) < max(1.0 / n, 0.2)
        u = u_dagger + w
        J_diff = float(np.sum(np.abs(u))) - J_dagger
        J_error = float(np.sum(np.abs(w)))
        K_error = float(np.linalg.norm(dense @ w))
        tolerance = PROBE_TOL * (1.0 + abs(J_diff) + J_error + K_error)
        slack = constants.lower_estimate(J_diff, J_error, K_error)
        if slack < -tolerance:
            constants.probe_violations += 1
        if constants.lower_estimate(J_diff, J_error, K_error, unscaled=True) < -tolerance:
            constants.unscaled_violations += 1
        worst = min(worst, slack)
    constants.probes = probes
    constants.worst_probe_slack = None if probes == 0 else worst


def sparse_error_bounds(traj: AlmTrajectory, cert: SourceCertificate, constants: SparseConstants,
                        K: BaseOperator, g, noisefree: bool = False, gamma: float = 2.0) -> List[BoundCheck]:
    """l1 error estimates built from the lower estimate.

    Noisy data, at the final state: beta1 ||u - u†||_1 <= D_sym + (beta2 + ||p†||) ||K u - g||.
    Exact data, at every state: beta1 ||u_n - u†||_1 <= (||p_n|| + beta2) ||K u_n - g|| (asserted) and
    ||u_n - u†||_1 <= C / t_n with C evaluated at `gamma` (reported).
    """
    g = as_vector(g, K.dim_out)
    tol = traj.inner_tol
    rows = []
    if not noisefree:
        state = traj.final
        error = float(np.sum(np.abs(state.u - cert.u_dagger)))
        rhs = symmetric_distance(state, cert, K) + (constants.beta2 + cert.p_norm) * norm(K.apply(state.u) - g)
        rows.append(BoundCheck('sparse_discrepancy_bound', state.n, constants.beta1 * error, rhs,
                               100.0 * tol * (1.0 + state.t) * (1.0 + rhs)))
        return rows

    C = constants.noisefree_constant(gamma)
    for state in traj.states:
        error = float(np.sum(np.abs(state.u - cert.u_dagger)))
        rhs = (norm(state.p) + constants.beta2) * norm(K.apply(state.u) - g)
        tolerance = 100.0 * tol * (1.0 + state.t) * (1.0 + rhs)
        rows.append(BoundCheck('sparse_aposteriori_bound', state.n, constants.beta1 * error, rhs, tolerance))
        rows.append(BoundCheck('sparse_noisefree_rate_bound', state.n, error, C / state.t,
                               100.0 * tol * (1.0 + state.t), asserted=False))
    return rows
