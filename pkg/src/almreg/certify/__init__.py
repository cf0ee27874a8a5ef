from .bounds import BoundCheck, BoundReport, check_error_bounds, dual_bregman, symmetric_distance
from .fit import RateReport, rate_report, slope_fit
from .lq_rates import LqRateInputs, bregman_lower_constant, bregman_radius, lq_norm, lq_norm_rate_inputs
from .source import SourceCertificate, certify_source_condition
from .sparse import SparseConstants, sparse_constants, sparse_error_bounds
from .strict import strict_metrics
