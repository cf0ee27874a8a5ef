from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from ..utils.exceptions import ConfigError

__all__ = ['RunRecord', 'SweepRecord']


@dataclass
class RunRecord:
    """Diagnostics of one discrepancy-stopped (or fixed-length) run at noise level delta."""
    delta: float
    gamma: Optional[int]
    t_gamma: Optional[float]
    residual: Optional[float]
    stopped: bool
    exact_residual: Optional[float] = None
    d_sym: Optional[float] = None
    distances: Dict[str, Optional[float]] = field(default_factory=dict)
    p_norm: Optional[float] = None
    dual_value: Optional[float] = None
    penalty_value: Optional[float] = None
    last_discrepancy: Optional[int] = None
    inexact: bool = False
    bracket_ok: bool = True
    monotone_ok: bool = True
    noise_seed: Optional[int] = None
    bound_slacks: Dict[str, float] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunRecord':
        return cls(**data)

    def to_row(self) -> Dict[str, Any]:
        """Flat CSV row: distances and bound slacks become columns of their own."""
        row = {
            'delta': self.delta,
            'gamma': self.gamma,
            't_gamma': self.t_gamma,
            'residual': self.residual,
            'exact_residual': self.exact_residual,
            'd_sym': self.d_sym,
        }
        row.update(self.distances)
        row.update({f"slack_{name}": value for name, value in self.bound_slacks.items()})
        row.update({'stopped': self.stopped, 'bracket_ok': self.bracket_ok, 'monotone_ok': self.monotone_ok})
        return row


@dataclass
class SweepRecord:
    label: str
    rho: float
    runs: List[RunRecord] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None

    def __post_init__(self):
        deltas = self.deltas
        if any(b >= a for a, b in zip(deltas[:-1], deltas[1:])):
            raise ConfigError(f"sweep noise levels must be strictly decreasing, got {deltas}")

    @property
    def deltas(self) -> List[float]:
        return [run.delta for run in self.runs]

    @property
    def gamma_indices(self) -> List[Optional[int]]:
        return [run.gamma for run in self.runs]

    @property
    def t_values(self) -> List[Optional[float]]:
        return [run.t_gamma for run in self.runs]

    @property
    def stopped_runs(self) -> List[RunRecord]:
        return [run for run in self.runs if run.stopped]

    def append(self, run: RunRecord) -> None:
        if self.runs and not run.delta < self.runs[-1].delta:
            raise ConfigError(f"noise level {run.delta} does not continue the decreasing sweep")
        self.runs.append(run)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'rho': self.rho,
            'seed': self.seed,
            'config': self.config,
            'runs': [run.to_dict() for run in self.runs],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepRecord':
        return cls(label=data['label'], rho=data['rho'], seed=data.get('seed'), config=data.get('config', {}),
                   runs=[RunRecord.from_dict(run) for run in data.get('runs', [])])
