from typing import Dict, Type

from .base import StepSchedule
from .constant import ConstantSchedule
from .sequence import SequenceSchedule

SCHEDULE_DICT: Dict[str, Type[StepSchedule]] = {
    'constant': ConstantSchedule,
    'sequence': SequenceSchedule,
}
