from .admissibility import AdmissibilityReport, apriori_admissible
from .apriori import APrioriRule, power_law_index
from .base import BaseStoppingRule
from .builder import build_stopping_rule, resolve_rho
from .degeneracy import DegeneracyReport, degenerate_detect, degenerate_diagnostics
from .fixed import FixedRule
from .morozov import MorozovRule, last_discrepancy_index, morozov_index
from .record import RunRecord, SweepRecord
from .registry import STOPPING_DICT
from .rho import f_rho, gamma_tradeoff_infimum, gamma_tradeoff_numeric, optimal_rho
