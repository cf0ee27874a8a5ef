import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.stats import linregress

from ..utils.exceptions import InsufficientDataError

__all__ = ['slope_fit', 'RateReport', 'rate_report']

DISAGREEMENT = 0.2
MIN_POINTS = 3


def _valid(points: Sequence[Tuple[float, float]]) -> np.ndarray:
    data = np.array([(x, y) for x, y in points if x is not None and y is not None], dtype=np.float64).reshape(-1, 2)
    keep = np.all(np.isfinite(data), axis=1) & (data[:, 0] > 0) & (data[:, 1] > 0)
    return data[keep]


def slope_fit(points: Sequence[Tuple[float, float]]) -> Tuple[float, float, float]:
    """Least-squares line through (log x, log y) over points with positive coordinates: (slope, intercept, r^2).

    Needs at least three such points with distinct abscissae.
    """
    data = _valid(points)
    if len(data) < MIN_POINTS or np.unique(data[:, 0]).size < MIN_POINTS:
        raise InsufficientDataError(min(len(data), int(np.unique(data[:, 0]).size)))
    result = linregress(np.log(data[:, 0]), np.log(data[:, 1]))
    return float(result.slope), float(result.intercept), float(result.rvalue ** 2)


@dataclass
class RateReport:
    """Log-log slope of an error quantity against delta (or t_n), with the fit over the asymptotic half."""
    name: str
    abscissa_name: str
    ordinate_name: str
    abscissa: List[Optional[float]]
    ordinate: List[Optional[float]]
    slope: Optional[float] = None
    intercept: Optional[float] = None
    r_squared: Optional[float] = None
    tail_slope: Optional[float] = None
    disagreement: bool = False
    band: Optional[Tuple[float, float]] = None
    lhs: List[Optional[float]] = field(default_factory=list)
    rhs: List[Optional[float]] = field(default_factory=list)
    note: Optional[str] = None
    vanishing: bool = False

    @property
    def band_ok(self) -> Optional[bool]:
        if self.band is None or self.slope is None:
            return None
        return self.band[0] <= self.slope <= self.band[1]

    def summary_line(self) -> str:
        if self.vanishing:
            return f"{self.name}: {self.note}"
        slope = "n/a" if self.slope is None else f"{self.slope:.4f}"
        line = f"{self.name}: slope {slope} (band {self.band}, ok {self.band_ok})"
        return line if self.note is None else f"{line} [{self.note}]"

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data['band'] = None if self.band is None else list(self.band)
        data['band_ok'] = self.band_ok
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> 'RateReport':
        data = {key: value for key, value in data.items() if key != 'band_ok'}
        if data.get('band') is not None:
            data['band'] = tuple(data['band'])
        return cls(**data)

    def to_frame(self) -> pd.DataFrame:
        """Columns: abscissa, ordinate, lhs, rhs, slack."""
        count = len(self.abscissa)
        lhs = self.lhs if len(self.lhs) == count else [None] * count
        rhs = self.rhs if len(self.rhs) == count else [None] * count
        slack = [None if a is None or b is None else b - a for a, b in zip(lhs, rhs)]
        return pd.DataFrame({'abscissa': self.abscissa, 'ordinate': self.ordinate, 'lhs': lhs, 'rhs': rhs,
                             'slack': slack})

    def to_json(self, path: Union[Path, str]) -> None:
        with open(path, 'w') as f:
            json.dump(self.to_dict(), f, indent=4)

    def to_csv(self, path: Union[Path, str]) -> None:
        self.to_frame().to_csv(path, index=False)


def rate_report(name: str, abscissa_name: str, ordinate_name: str, x: Sequence[Optional[float]],
                y: Sequence[Optional[float]], band: Optional[Tuple[float, float]] = None,
                tail: Literal['low', 'high'] = 'low', lhs: Optional[Sequence[Optional[float]]] = None,
                rhs: Optional[Sequence[Optional[float]]] = None, zero_tol: Optional[float] = None) -> RateReport:
    """Fit the full set of points and the half nearest the asymptotic end (`low` abscissa for delta -> 0,
    `high` for t -> infinity). Too few usable points leave the slopes empty and set `note`.

    With `zero_tol`, ordinates of magnitude at most zero_tol count as zero and leave the fit. When every
    ordinate is zero in that sense the report is marked `vanishing` and carries no band.
    """
    report = RateReport(name=name, abscissa_name=abscissa_name, ordinate_name=ordinate_name,
                        abscissa=list(x), ordinate=list(y), band=band,
                        lhs=list(lhs) if lhs is not None else [], rhs=list(rhs) if rhs is not None else [])
    if zero_tol is not None:
        y = [None if value is None else (0.0 if abs(value) <= zero_tol else value) for value in y]
        present = [value for value in y if value is not None]
        if present and not any(present):
            report.vanishing = True
            report.band = None
            report.note = f"identically zero at round-off level (|{ordinate_name}| <= {zero_tol:.1e})"
            return report
    points = list(zip(x, y))
    try:
        report.slope, report.intercept, report.r_squared = slope_fit(points)
    except InsufficientDataError as e:
        report.note = str(e)
        return report

    valid = _valid(points)
    order = np.argsort(valid[:, 0])
    half = valid[order][: math.ceil(len(valid) / 2)] if tail == 'low' else valid[order][len(valid) // 2:]
    try:
        report.tail_slope = slope_fit([tuple(point) for point in half])[0]
    except InsufficientDataError:
        return report
    report.disagreement = abs(report.tail_slope - report.slope) > DISAGREEMENT
    return report
