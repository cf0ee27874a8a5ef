from dataclasses import asdict, dataclass, field
from typing import Dict, List, Literal, Optional, Sequence, Union

import numpy as np

from ..utils.exceptions import ConfigError
from .record import SweepRecord

__all__ = ['DegeneracyReport', 'degenerate_detect', 'degenerate_diagnostics']

DEFAULT_WINDOW = 4


@dataclass
class DegeneracyReport:
    window: int
    N: Optional[int]
    trend: Literal['constant', 'increasing', 'mixed', 'insufficient']
    diagnostics: Dict[str, object] = field(default_factory=dict)

    @property
    def degenerate(self) -> bool:
        return self.N is not None

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


def degenerate_detect(sweep: Union[SweepRecord, Sequence[Optional[int]]],
                      window: int = DEFAULT_WINDOW) -> DegeneracyReport:
    """Stopping-index pattern over the last `window` noise levels.

    Equal indices mean the stopped index stays bounded (degenerate case); strictly increasing indices
    indicate divergence. Unstopped runs in the window make the pattern 'insufficient'.
    """
    if window < 3:
        raise ConfigError(f"degeneracy window must be >= 3, got {window}")
    indices = list(sweep.gamma_indices if isinstance(sweep, SweepRecord) else sweep)
    tail = indices[-window:]
    if len(tail) < window or any(index is None for index in tail):
        return DegeneracyReport(window=window, N=None, trend='insufficient')
    if all(index == tail[0] for index in tail):
        return DegeneracyReport(window=window, N=int(tail[0]), trend='constant')
    if all(b > a for a, b in zip(tail[:-1], tail[1:])):
        return DegeneracyReport(window=window, N=None, trend='increasing')
    return DegeneracyReport(window=window, N=None, trend='mixed')


def _trend(values: List[float]) -> str:
    if len(values) < 2:
        return 'insufficient'
    steps = np.diff(values)
    if np.all(steps <= 0):
        return 'nonincreasing'
    if np.all(steps >= 0):
        return 'nondecreasing'
    return 'mixed'


def degenerate_diagnostics(sweep: SweepRecord, report: DegeneracyReport) -> Dict[str, object]:
    """Consequences of a bounded stopping index evaluated on the window that produced it.

    Checks ||K u_N - g|| < (rho + 1) delta on every run of the window, and reports the behaviour of
    ||p_N|| and of G(p_N, g_delta) (when available) along the window.
    """
    runs = sweep.runs[-report.window:]
    residual_rows = [
        {'delta': run.delta, 'exact_residual': run.exact_residual, 'bound': (sweep.rho + 1.0) * run.delta,
         'ok': run.exact_residual is not None and run.exact_residual < (sweep.rho + 1.0) * run.delta}
        for run in runs
    ]
    p_norms = [run.p_norm for run in runs if run.p_norm is not None]
    dual_values = [run.dual_value for run in runs if run.dual_value is not None and np.isfinite(run.dual_value)]
    diagnostics = {
        'residual_bound': residual_rows,
        'residual_bound_ok': all(row['ok'] for row in residual_rows),
        'p_norms': p_norms,
        'p_norm_max': max(p_norms) if p_norms else None,
        'p_norm_trend': _trend(p_norms),
        'dual_values': dual_values,
        'dual_trend': _trend(dual_values) if dual_values else 'unavailable',
    }
    report.diagnostics = diagnostics
    return diagnostics
