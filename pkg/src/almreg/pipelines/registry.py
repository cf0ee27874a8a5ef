from typing import Dict, Type

from .base import BasePipeline
from .certification import CertifyPipeline
from .noisefree import NoisefreePipeline
from .single import SinglePipeline
from .sweep import SweepPipeline

PIPELINE_DICT: Dict[str, Type[BasePipeline]] = {
    'run': SinglePipeline,
    'sweep': SweepPipeline,
    'noisefree': NoisefreePipeline,
    'certify': CertifyPipeline,
}
