from .base import BasePenalty, InnerDiagnostics, Subgradient, SubproblemSpec
from .bregman import bregman, symmetric_bregman
from .builder import build_penalty
from .lq import LqPenalty
from .prox import prox_power, prox_scalar_power
from .quadratic import QuadraticPenalty
from .registry import PENALTY_DICT
from .tv import TVPenalty
