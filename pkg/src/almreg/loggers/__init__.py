from .report import load_report, rates_frame, report_emit, runs_frame
from .stdout import StdOutLogger
