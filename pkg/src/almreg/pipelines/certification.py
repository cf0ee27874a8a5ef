import json
from dataclasses import asdict
from pathlib import Path
from typing import Optional

from loguru import logger
from omegaconf import DictConfig

from ..certify.sparse import SparseConstants, sparse_constants
from ..loggers.stdout import StdOutLogger
from ..penalties.lq import LqPenalty
from ..problems.base import ProblemInstance
from ..utils.exceptions import RestrictedInjectivityError
from ..utils.record import CertificationSummary, Timer
from .base import BasePipeline

__all__ = ['CertifyPipeline', 'certify_instance']


def certify_instance(instance: ProblemInstance) -> CertificationSummary:
    """Summary of the instance's source certificate; l1 certificates also get the restricted-injectivity constants."""
    cert = instance.certificate
    if cert is None:
        return CertificationSummary(label=instance.label, certified=False,
                                    failure="instance carries no source element", success=True)

    constants: Optional[SparseConstants] = None
    failure = cert.failure
    pen = instance.penalty
    if cert.certified and isinstance(pen, LqPenalty) and pen.q == 1.0:
        try:
            constants = sparse_constants(instance.K, cert, seed=instance.seed)
        except RestrictedInjectivityError as e:
            failure = str(e)
    certified = cert.certified and failure is None and (constants is None or constants.probes_ok)
    return CertificationSummary(
        label=instance.label,
        certified=certified,
        fenchel_gap=cert.fenchel_gap,
        theta=cert.theta,
        failure=failure,
        sparse_constants=None if constants is None else constants.to_dict(),
        success=True,
    )


class CertifyPipeline(BasePipeline):
    mode = 'certify'

    def __init__(
        self,
        conf: DictConfig,
        instance: ProblemInstance,
        logger: Optional[StdOutLogger],
        timer: Timer,
        logging_dir: Optional[Path] = None,
    ):
        super(CertifyPipeline, self).__init__(conf, instance, logger, timer, logging_dir)
        self.summary: Optional[CertificationSummary] = None

    def run(self) -> bool:
        self.timer.start_record(name='certify')
        self.summary = certify_instance(self.instance)
        self.timer.end_record(name='certify')
        self.summary.total_time = self.timer.get(name='certify', as_pop=False)

        logger.info("-" * 40)
        if self.summary.certified:
            logger.info(f"{self.instance.label}: source condition certified (gap {self.summary.fenchel_gap}, "
                        f"theta {self.summary.theta})")
        else:
            logger.warning(f"{self.instance.label}: not certified ({self.summary.failure})")
        logger.info("-" * 40)
        self.save_summary()
        return self.summary.certified

    def save_summary(self):
        if self.logging_dir is None:
            return self.summary
        with open(self.logging_dir / "certificate.json", 'w') as f:
            json.dump(self.instance.describe(), f, indent=4)
        summary_path = self.logging_dir / f"{self.mode}_summary.json"
        with open(summary_path, 'w') as f:
            json.dump(asdict(self.summary), f, indent=4)
        logger.info(f"Certification summary saved at {str(summary_path)}")
        return self.summary
