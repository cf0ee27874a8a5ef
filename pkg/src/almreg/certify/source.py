from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from loguru import logger

from ..operators.base import BaseOperator, as_vector, inner, norm
from ..penalties.base import BasePenalty
from ..penalties.lq import LqPenalty
from ..penalties.quadratic import QuadraticPenalty
from ..penalties.tv import TVPenalty
from ..utils.exceptions import ConfigError

__all__ = ['SourceCertificate', 'certify_source_condition']

GAP_TOL = 1e-8
ENTRY_TOL = 1e-10
DATA_TOL = 1e-10
TV_PROBES = 200


@dataclass
class SourceCertificate:
    """Dual element p_dagger with xi = K* p_dagger in the subdifferential of J at u_dagger, as far as checked."""
    u_dagger: np.ndarray
    p_dagger: np.ndarray
    xi: np.ndarray
    certified: bool
    fenchel_gap: Optional[float] = None
    theta: Optional[float] = None
    support: Optional[np.ndarray] = None
    failure: Optional[str] = None
    failing_index: Optional[int] = None
    magnitude: Optional[float] = None
    probes: int = 0
    probe_violations: int = 0

    @property
    def p_norm(self) -> float:
        return norm(self.p_dagger)

    def to_dict(self) -> Dict[str, object]:
        return {
            'certified': self.certified,
            'fenchel_gap': self.fenchel_gap,
            'theta': self.theta,
            'support': None if self.support is None else self.support.tolist(),
            'failure': self.failure,
            'failing_index': self.failing_index,
            'magnitude': self.magnitude,
            'probes': self.probes,
            'probe_violations': self.probe_violations,
            'p_norm': self.p_norm,
        }


def _first_violation(mismatch: np.ndarray, tolerance: float) -> Optional[int]:
    bad = np.flatnonzero(mismatch > tolerance)
    return int(bad[np.argmax(mismatch[bad])]) if bad.size else None


def _certify_gradient(cert: SourceCertificate, expected: np.ndarray) -> None:
    mismatch = np.abs(cert.xi - expected)
    index = _first_violation(mismatch, ENTRY_TOL * max(1.0, float(np.max(np.abs(expected)))))
    if index is not None:
        cert.certified = False
        cert.failure = "K* p_dagger differs from the gradient of J at u_dagger"
        cert.failing_index = index
        cert.magnitude = float(mismatch[index])


def _certify_l1(cert: SourceCertificate) -> None:
    xi, u = cert.xi, cert.u_dagger
    on_support = u != 0
    sign_error = np.where(on_support, np.abs(xi - np.sign(u)), 0.0)
    index = _first_violation(sign_error, ENTRY_TOL)
    if index is not None:
        cert.certified = False
        cert.failure = "sign pattern of K* p_dagger does not match u_dagger on its support"
        cert.failing_index = index
        cert.magnitude = float(xi[index])
        return
    excess = np.where(on_support, 0.0, np.abs(xi) - 1.0)
    index = _first_violation(excess, ENTRY_TOL)
    if index is not None:
        cert.certified = False
        cert.failure = "|K* p_dagger| exceeds 1 off the support"
        cert.failing_index = index
        cert.magnitude = float(abs(xi[index]))
        return
    saturated = np.abs(np.abs(xi) - 1.0) <= ENTRY_TOL
    cert.support = np.flatnonzero(saturated)
    off = np.abs(xi[~saturated])
    cert.theta = float(np.max(off)) if off.size else 0.0


def _probe_directions(u: np.ndarray, count: int, seed: int) -> List[np.ndarray]:
    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.max(np.abs(u))))
    structured = [np.zeros_like(u), 2.0 * u, -u, np.ones_like(u), -np.ones_like(u), u + 1.0]
    image_steps = [np.where(np.arange(u.size) < k, 1.0, 0.0) for k in range(1, u.size, max(1, u.size // 16))]
    structured.extend(image_steps)
    random_count = max(0, count - len(structured))
    random = [u + scale * 10.0 ** rng.uniform(-3, 1) * rng.standard_normal(u.size) for _ in range(random_count)]
    return (structured + random)[:count]


def _certify_tv(cert: SourceCertificate, pen: TVPenalty, probes: int, seed: int) -> None:
    u, xi = cert.u_dagger, cert.xi
    J_u = pen(u)
    cert.fenchel_gap = J_u - inner(xi, u)
    worst_index, worst = None, 0.0
    for index, v in enumerate(_probe_directions(u, probes, seed)):
        J_v = pen(v)
        excess = J_u + inner(xi, v - u) - J_v
        if excess > GAP_TOL * (1.0 + abs(J_v) + abs(J_u)):
            cert.probe_violations += 1
            if excess > worst:
                worst_index, worst = index, excess
        cert.probes += 1
    if cert.probe_violations:
        cert.certified = False
        cert.failure = f"subgradient inequality fails on {cert.probe_violations} of {cert.probes} probes"
        cert.failing_index = worst_index
        cert.magnitude = worst


def certify_source_condition(K: BaseOperator, pen: BasePenalty, u_dagger, p_dagger, g=None,
                             tol: float = GAP_TOL, probes: int = TV_PROBES, seed: int = 0) -> SourceCertificate:
    """Check K* p_dagger in the subdifferential of J at u_dagger.

    Quadratic and lq (q > 1) penalties are checked entrywise against the gradient, l1 through its sign pattern
    and dual-ball condition, and TV through the subgradient inequality on sampled probes (a necessary condition).
    """
    u_dagger = as_vector(u_dagger, K.dim_in)
    p_dagger = as_vector(p_dagger, K.dim_out)
    if g is not None:
        g = as_vector(g, K.dim_out)
        if norm(K.apply(u_dagger) - g) > DATA_TOL * max(1.0, norm(g)):
            raise ConfigError("u_dagger does not reproduce the exact data: ||K u_dagger - g|| is too large")

    xi = K.adjoint_apply(p_dagger)
    cert = SourceCertificate(u_dagger=u_dagger, p_dagger=p_dagger, xi=xi, certified=True)

    if isinstance(pen, QuadraticPenalty):
        _certify_gradient(cert, pen.subgradient(u_dagger))
    elif isinstance(pen, LqPenalty) and pen.q > 1.0:
        _certify_gradient(cert, pen.subgradient(u_dagger))
    elif isinstance(pen, LqPenalty):
        _certify_l1(cert)
    elif isinstance(pen, TVPenalty):
        _certify_tv(cert, pen, probes, seed)
    else:
        raise ConfigError(f"no source-condition check for penalty {pen.name}")

    if pen.has_conjugate:
        cert.fenchel_gap = pen.fenchel_gap(u_dagger, xi)
    if cert.certified and cert.fenchel_gap is not None and cert.fenchel_gap > tol * (1.0 + pen(u_dagger)):
        cert.certified = False
        cert.failure = f"Fenchel gap {cert.fenchel_gap:.3e} exceeds tolerance {tol:.1e}"

    if cert.certified:
        logger.info(f"source condition certified for {pen.name}: gap={cert.fenchel_gap}, theta={cert.theta}")
    else:
        logger.warning(f"source condition not certified for {pen.name}: {cert.failure}")
    return cert
