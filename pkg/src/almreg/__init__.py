from pathlib import Path

from .alm import alm_run, alm_step
from .certify import certify_source_condition, check_error_bounds, rate_report, slope_fit
from .pipelines import noisefree_run, single_run, sweep_run
from .problems import add_noise, gen_problem_lq, gen_problem_quadratic, gen_problem_sparse, gen_problem_tv
from .runner_main import main_cli
from .stopping import morozov_index, optimal_rho

version = (Path(__file__).parent / "VERSION").read_text().strip()

__version__ = version
