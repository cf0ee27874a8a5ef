from .base import BasePipeline
from .builder import build_caps, build_p0, build_pipeline, build_sweep_config
from .certification import CertifyPipeline, certify_instance
from .noisefree import NoisefreePipeline, NoisefreeResult, noisefree_run
from .registry import PIPELINE_DICT
from .single import SinglePipeline, SingleResult, single_run
from .sweep import SweepConfig, SweepPipeline, SweepResult, sweep_run
