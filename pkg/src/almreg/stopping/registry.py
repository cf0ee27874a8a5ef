from typing import Dict, Type

from .apriori import APrioriRule
from .base import BaseStoppingRule
from .fixed import FixedRule
from .morozov import MorozovRule

STOPPING_DICT: Dict[str, Type[BaseStoppingRule]] = {
    'morozov': MorozovRule,
    'a_priori': APrioriRule,
    'fixed': FixedRule,
}
