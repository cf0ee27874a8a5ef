from typing import Dict, Type

from .base import BaseOperator
from .custom import (
    CompositionOperator,
    ConvolutionOperator,
    DenseOperator,
    DiagonalOperator,
    GradientOperator,
    IdentityOperator,
    MaskedSamplingOperator,
)

OPERATOR_DICT: Dict[str, Type[BaseOperator]] = {
    'identity': IdentityOperator,
    'dense': DenseOperator,
    'diagonal': DiagonalOperator,
    'convolution': ConvolutionOperator,
    'masked_sampling': MaskedSamplingOperator,
    'composition': CompositionOperator,
    'gradient': GradientOperator,
}
