from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Sequence

import numpy as np

from ..schedulers.base import StepSchedule
from ..utils.exceptions import ConfigError

__all__ = ['AdmissibilityReport', 'apriori_admissible']

BOUNDED_RTOL = 1e-9


@dataclass
class AdmissibilityReport:
    deltas: List[float]
    indices: List[int]
    t_values: List[float]
    delta2_t: List[float]
    delta_t: List[float]
    delta2_t_vanishes: bool
    t_diverges: bool
    delta_t_bounded: bool

    @property
    def convergent(self) -> bool:
        """delta^2 t -> 0 and t -> infinity, the parameter choice that gives convergence."""
        return self.delta2_t_vanishes and self.t_diverges

    @property
    def rate_admissible(self) -> bool:
        """delta t stays bounded in addition, the parameter choice that gives rates."""
        return self.convergent and self.delta_t_bounded

    def to_dict(self) -> Dict[str, object]:
        return {**asdict(self), 'convergent': self.convergent, 'rate_admissible': self.rate_admissible}


def _tail(values: Sequence[float]) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    return values[(len(values) - 1) // 2:]


def _nonincreasing(values: np.ndarray, rtol: float = 0.0) -> bool:
    return bool(np.all(values[1:] <= values[:-1] * (1.0 + rtol)))


def apriori_admissible(schedule: StepSchedule, index_fn: Callable[[float], int],
                       delta_seq: Sequence[float]) -> AdmissibilityReport:
    """Empirical trend tests of delta^2 t, t and delta t along a decreasing noise sequence.

    Each test looks at the last half of the sequence: delta^2 t must decrease overall without increasing
    anywhere, t must increase overall without decreasing anywhere, delta t must not increase beyond a
    relative 1e-9.
    """
    deltas = [float(delta) for delta in delta_seq]
    if len(deltas) < 2:
        raise ConfigError("admissibility trends need at least two noise levels")
    if any(not d > 0 for d in deltas) or any(b >= a for a, b in zip(deltas[:-1], deltas[1:])):
        raise ConfigError("noise levels must be positive and strictly decreasing")

    indices = [int(index_fn(delta)) for delta in deltas]
    t_values = [schedule.t(n) for n in indices]
    delta2_t = [d * d * t for d, t in zip(deltas, t_values)]
    delta_t = [d * t for d, t in zip(deltas, t_values)]

    tail_d2t, tail_t, tail_dt = _tail(delta2_t), _tail(t_values), _tail(delta_t)
    return AdmissibilityReport(
        deltas=deltas,
        indices=indices,
        t_values=t_values,
        delta2_t=delta2_t,
        delta_t=delta_t,
        delta2_t_vanishes=_nonincreasing(tail_d2t) and bool(tail_d2t[-1] < tail_d2t[0]),
        t_diverges=_nonincreasing(-tail_t) and bool(tail_t[-1] > tail_t[0]),
        delta_t_bounded=_nonincreasing(tail_dt, BOUNDED_RTOL),
    )
