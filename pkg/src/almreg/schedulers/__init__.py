from .base import StepSchedule
from .builder import build_schedule
from .constant import ConstantSchedule
from .registry import SCHEDULE_DICT
from .sequence import SequenceSchedule
