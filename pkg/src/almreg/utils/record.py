import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

__all__ = ['Timer', 'RunSummary', 'SweepSummary', 'CertificationSummary']


class TimeRecode:
    def __init__(self) -> None:
        self._start = time.perf_counter()
        self._end = None

    def end(self) -> None:
        self._end = time.perf_counter()

    @property
    def done(self) -> bool:
        return self._end is not None

    @property
    def elapsed(self) -> Optional[float]:
        return self._end - self._start if self._end is not None else None


class Timer:
    """Named wall-clock records; `get` closes a record that is still open."""

    def __init__(self) -> None:
        self.history: Dict[str, TimeRecode] = {}

    def start_record(self, name: str) -> bool:
        if name not in self.history:
            self.history[name] = TimeRecode()
            return True
        return False

    def end_record(self, name: str) -> bool:
        if name in self.history:
            self.history[name].end()
            return True
        return False

    def get(self, name: str, as_pop: bool = True) -> Optional[float]:
        if name not in self.history:
            return None
        record = self.history.pop(name) if as_pop else self.history[name]
        if not record.done:
            record.end()
        return record.elapsed


@dataclass
class RunSummary:
    label: str
    delta: float
    gamma: Optional[int]
    t_gamma: Optional[float]
    residual: Optional[float]
    stopped: bool
    violations: List[str] = field(default_factory=list)
    total_time: Optional[float] = None
    success: bool = False


@dataclass
class SweepSummary:
    label: str
    deltas: List[float]
    gamma_indices: List[Optional[int]]
    slopes: Dict[str, Optional[float]]
    degenerate_index: Optional[int] = None
    gamma_trend: Optional[str] = None
    violations: List[str] = field(default_factory=list)
    band_failures: List[str] = field(default_factory=list)
    total_time: Optional[float] = None
    success: bool = False


@dataclass
class CertificationSummary:
    label: str
    certified: bool
    fenchel_gap: Optional[float] = None
    theta: Optional[float] = None
    failure: Optional[str] = None
    sparse_constants: Optional[Dict[str, float]] = None
    total_time: Optional[float] = None
    success: bool = False
