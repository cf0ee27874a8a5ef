from typing import Any, Mapping, Optional, Union

from omegaconf import DictConfig, OmegaConf

from ..utils.exceptions import ConfigError
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
from .registry import OPERATOR_DICT


def _to_dict(conf: Union[DictConfig, Mapping[str, Any], str]) -> dict:
    if isinstance(conf, str):
        return {'name': conf}
    if isinstance(conf, DictConfig):
        return OmegaConf.to_container(conf, resolve=True)
    return dict(conf)


def build_operator(conf: Union[DictConfig, Mapping[str, Any], str], dim: Optional[int] = None) -> BaseOperator:
    """Instantiate an operator from a config node such as `{name: convolution, kernel: [...], grid: [32, 1]}`.

    `dim` fills in the size of an identity operator when the config leaves it out.
    """
    conf = _to_dict(conf)
    name = conf.get('name')
    if name not in OPERATOR_DICT:
        raise ConfigError(f"{name} not in operator dict! Choose from {sorted(OPERATOR_DICT)}")

    try:
        if name == 'identity':
            size = conf.get('dim', dim)
            if size is None:
                raise ConfigError("identity operator needs `dim`")
            op = IdentityOperator(int(size))
        elif name == 'dense':
            if conf.get('path') is not None:
                op = DenseOperator.from_csv(conf['path'])
            elif conf.get('matrix') is not None:
                op = DenseOperator(conf['matrix'])
            else:
                raise ConfigError("dense operator needs `matrix` or `path`")
        elif name == 'diagonal':
            op = DiagonalOperator(conf['weights'])
        elif name == 'convolution':
            op = ConvolutionOperator(conf['kernel'], conf['grid'])
        elif name == 'masked_sampling':
            op = MaskedSamplingOperator(conf['mask'])
        elif name == 'gradient':
            op = GradientOperator(conf['grid'])
        else:
            op = CompositionOperator(build_operator(conf['outer'], dim=dim), build_operator(conf['inner'], dim=dim))
    except KeyError as e:
        raise ConfigError(f"{name} operator config is missing field {e}") from e

    if dim is not None and op.dim_in != dim:
        raise ConfigError(f"{name} operator takes {op.dim_in} inputs, expected {dim}")
    return op
