from .base import BaseOperator, as_vector, inner, norm
from .builder import build_operator
from .custom import (
    CompositionOperator,
    ConvolutionOperator,
    DenseOperator,
    DiagonalOperator,
    FunctionOperator,
    GradientOperator,
    IdentityOperator,
    MaskedSamplingOperator,
)
from .diagnostics import adjoint_check, operator_norm_estimate
from .grid import GridShape
from .registry import OPERATOR_DICT
