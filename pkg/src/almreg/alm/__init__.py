from .dual import GuelerSlack, dual_objective, gueler_slack
from .iteration import alm_run, alm_step, initial_state
from .state import AlmState, AlmTrajectory, RunCaps
