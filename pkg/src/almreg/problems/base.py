from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from ..certify.source import SourceCertificate
from ..operators.base import BaseOperator, norm
from ..penalties.base import BasePenalty

__all__ = ['ProblemInstance', 'NoisyData']


@dataclass
class ProblemInstance:
    """Attainable exact data g = K u_dagger, optionally with a certified source element."""
    K: BaseOperator
    penalty: BasePenalty
    g: np.ndarray
    u_dagger: np.ndarray
    seed: int
    label: str
    p_dagger: Optional[np.ndarray] = None
    certificate: Optional[SourceCertificate] = None
    extras: Dict[str, object] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.certificate is not None and self.certificate.certified

    @property
    def data_mismatch(self) -> float:
        return norm(self.K.apply(self.u_dagger) - self.g)

    def describe(self) -> Dict[str, object]:
        return {
            'label': self.label,
            'seed': self.seed,
            'dim_in': self.K.dim_in,
            'dim_out': self.K.dim_out,
            'operator': repr(self.K),
            'penalty': self.penalty.describe(),
            'certified': self.certified,
            'certificate': None if self.certificate is None else self.certificate.to_dict(),
            **self.extras,
        }


@dataclass(frozen=True)
class NoisyData:
    g_delta: np.ndarray
    delta: float
    seed: int
