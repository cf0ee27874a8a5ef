from typing import Tuple

import numpy as np

from ..operators.base import BaseOperator, as_vector, norm
from ..penalties.base import BasePenalty
from ..penalties.tv import TVPenalty
from ..utils.exceptions import ConfigError

__all__ = ['strict_metrics']


def strict_metrics(u, v, K: BaseOperator, pen: BasePenalty) -> Tuple[float, float]:
    """(d_tilde, d) for TV: entrywise L1 distance (unit cells) or ||K u - K v||, each plus |TV(u) - TV(v)|."""
    if not isinstance(pen, TVPenalty):
        raise ConfigError(f"strict metrics are defined for the tv penalty, got {pen.name}")
    u, v = as_vector(u, pen.dim), as_vector(v, pen.dim)
    tv_gap = abs(pen(u) - pen(v))
    d_tilde = float(np.sum(np.abs(u - v))) + tv_gap
    d = norm(K.apply(u) - K.apply(v)) + tv_gap
    return d_tilde, d
