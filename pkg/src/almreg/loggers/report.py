import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import pandas as pd
from loguru import logger

from ..certify.fit import RateReport
from ..stopping.record import SweepRecord
from ..utils.exceptions import ConfigError

__all__ = ['report_emit', 'load_report', 'rates_frame', 'runs_frame']

FORMATS = ('json', 'csv')


def runs_frame(record: SweepRecord) -> pd.DataFrame:
    """One row per noise level; distances and bound slacks become columns."""
    return pd.DataFrame([run.to_row() for run in record.runs])


def rates_frame(reports: Sequence[RateReport]) -> pd.DataFrame:
    return pd.DataFrame([
        {'name': report.name, 'abscissa': report.abscissa_name, 'ordinate': report.ordinate_name,
         'slope': report.slope, 'tail_slope': report.tail_slope, 'r_squared': report.r_squared,
         'band_low': None if report.band is None else report.band[0],
         'band_high': None if report.band is None else report.band[1],
         'band_ok': report.band_ok, 'disagreement': report.disagreement, 'vanishing': report.vanishing,
         'note': report.note}
        for report in reports
    ])


def report_emit(record: SweepRecord, reports: Sequence[RateReport], format: Literal['json', 'csv'],
                path: Union[Path, str], extras: Optional[Dict[str, Any]] = None) -> List[Path]:
    """Write a sweep and its rate fits.

    json: the full nested record (config echo, seeds, per-run slacks), the rate reports and `extras`.
    csv: the per-run table at `path`, plus `<stem>_rates.csv` with one row per rate fit.
    """
    if format not in FORMATS:
        raise ConfigError(f"report format must be one of {FORMATS}, got {format}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    if format == 'json':
        path = path.with_suffix('.json')
        payload = {'record': record.to_dict(), 'reports': [report.to_dict() for report in reports],
                   **(extras or {})}
        with open(path, 'w') as f:
            json.dump(payload, f, indent=4)
        written = [path]
    else:
        path = path.with_suffix('.csv')
        rates_path = path.with_name(f"{path.stem}_rates.csv")
        runs_frame(record).to_csv(path, index=False)
        rates_frame(reports).to_csv(rates_path, index=False)
        written = [path, rates_path]

    for item in written:
        logger.info(f"Report saved at {str(item)}")
    return written


def load_report(path: Union[Path, str]) -> Tuple[SweepRecord, List[RateReport], Dict[str, Any]]:
    """Read a JSON report back into the sweep record, its rate reports and the remaining top-level fields."""
    with open(path) as f:
        payload = json.load(f)
    if 'record' not in payload:
        raise ConfigError(f"{path} is not a sweep report (no 'record' field)")
    record = SweepRecord.from_dict(payload.pop('record'))
    reports = [RateReport.from_dict(report) for report in payload.pop('reports', [])]
    return record, reports, payload
