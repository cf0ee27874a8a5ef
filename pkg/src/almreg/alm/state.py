from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..utils.exceptions import ConfigError

__all__ = ['AlmState', 'AlmTrajectory', 'RunCaps']


@dataclass(frozen=True)
class RunCaps:
    max_outer: int = 200
    max_inner: int = 5000
    inner_tol: Optional[float] = None

    def __post_init__(self):
        if self.max_outer < 1:
            raise ConfigError(f"max_outer must be >= 1, got {self.max_outer}")
        if self.max_inner < 1:
            raise ConfigError(f"max_inner must be >= 1, got {self.max_inner}")
        if self.inner_tol is not None and not self.inner_tol > 0:
            raise ConfigError(f"inner_tol must be positive, got {self.inner_tol}")


@dataclass(frozen=True)
class AlmState:
    """Iterate n of the method. n = 0 is the starting point (u = 0, p = p0, t = 0)."""
    n: int
    u: np.ndarray
    p: np.ndarray
    t: float
    tau: float
    residual: float
    penalty_value: float
    dual_value: Optional[float] = None
    inexact: bool = False
    inner_iterations: int = 0
    inner_measure: float = 0.0

    def scalars(self) -> Dict[str, object]:
        return {
            'n': self.n,
            't': self.t,
            'tau': self.tau,
            'residual': self.residual,
            'J': self.penalty_value,
            'G': self.dual_value,
            'inexact': self.inexact,
            'inner_iterations': self.inner_iterations,
            'inner_measure': self.inner_measure,
        }


@dataclass(frozen=True)
class AlmTrajectory:
    states: Tuple[AlmState, ...]
    initial: AlmState
    g_delta: np.ndarray
    schedule: Dict[str, object]
    inner_tol: float
    max_inner: int
    stop: str
    stopped: bool
    penalty: Dict[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def gamma(self) -> Optional[int]:
        """Index at which the stopping rule fired, None for an unstopped run."""
        return self.states[-1].n if self.stopped and self.states else None

    @property
    def final(self) -> AlmState:
        return self.states[-1] if self.states else self.initial

    @property
    def p0(self) -> np.ndarray:
        return self.initial.p

    @property
    def residuals(self) -> List[float]:
        return [state.residual for state in self.states]

    def state(self, n: int) -> AlmState:
        """State with index n; n = 0 gives the starting point."""
        if n == 0:
            return self.initial
        if not 1 <= n <= len(self.states):
            raise IndexError(f"Trajectory has states 1..{len(self.states)}, asked for {n}")
        return self.states[n - 1]

    def previous_p(self, n: int) -> np.ndarray:
        return self.state(n - 1).p

    @property
    def any_inexact(self) -> bool:
        return any(state.inexact for state in self.states)

    def residual_monotonicity_violations(self, factor: float = 10.0) -> List[int]:
        """Indices n + 1 where residual(n + 1) exceeds residual(n) + factor * tol * (1 + residual(n))."""
        violations = []
        for prev, cur in zip(self.states[:-1], self.states[1:]):
            slack = factor * self.inner_tol * (1.0 + prev.residual)
            if cur.residual > prev.residual + slack:
                violations.append(cur.n)
        return violations

    def dual_step_mismatch(self) -> float:
        """Largest | ||K u_n - g_delta|| - ||p_n - p_(n-1)|| / tau_n | over the run."""
        worst = 0.0
        for state in self.states:
            step = float(np.linalg.norm(state.p - self.previous_p(state.n))) / state.tau
            worst = max(worst, abs(step - state.residual))
        return worst

    def to_dict(self) -> Dict[str, object]:
        return {
            'schedule': self.schedule,
            'penalty': self.penalty,
            'p0': self.p0.tolist(),
            'inner_tol': self.inner_tol,
            'max_inner': self.max_inner,
            'stop': self.stop,
            'stopped': self.stopped,
            'gamma': self.gamma,
            'states': [state.scalars() for state in self.states],
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([state.scalars() for state in self.states])

    def vectors_frame(self, kind: str = 'u') -> pd.DataFrame:
        """One row per state with the entries of u (or p) as columns."""
        if kind not in ('u', 'p'):
            raise ConfigError(f"kind must be 'u' or 'p', got {kind}")
        rows = [getattr(state, kind) for state in self.states]
        frame = pd.DataFrame(np.array(rows) if rows else np.empty((0, len(getattr(self.initial, kind)))))
        frame.insert(0, 'n', [state.n for state in self.states])
        return frame
