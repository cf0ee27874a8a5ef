from typing import Dict, Type

from .base import BasePenalty
from .lq import LqPenalty
from .quadratic import QuadraticPenalty
from .tv import TVPenalty

PENALTY_DICT: Dict[str, Type[BasePenalty]] = {
    'quadratic': QuadraticPenalty,
    'lq': LqPenalty,
    'tv': TVPenalty,
}
