from omegaconf import DictConfig, OmegaConf

from ..utils.exceptions import ConfigError
from .base import StepSchedule
from .constant import ConstantSchedule
from .registry import SCHEDULE_DICT


def build_schedule(solver_conf) -> StepSchedule:
    """Schedule from the solver section: `tau` is the constant step, `taus` and `tail` describe a sequence."""
    if isinstance(solver_conf, DictConfig):
        solver_conf = OmegaConf.to_container(solver_conf, resolve=True)
    schedule_name = solver_conf.get('schedule', 'constant')
    if schedule_name not in SCHEDULE_DICT:
        raise ConfigError(f"{schedule_name} not in schedule dict! Choose from {sorted(SCHEDULE_DICT)}")

    if schedule_name == 'constant':
        return ConstantSchedule(solver_conf.get('tau', 1.0))
    taus = solver_conf.get('taus')
    if not taus:
        raise ConfigError("sequence schedule needs a nonempty `taus` list")
    return SCHEDULE_DICT[schedule_name](taus, tail=solver_conf.get('tail'))
