from abc import ABC, abstractmethod
from pathlib import Path
from typing import List, Literal, Optional

from omegaconf import DictConfig

from ..loggers.stdout import StdOutLogger
from ..problems.base import ProblemInstance
from ..utils.record import Timer


class BasePipeline(ABC):
    mode: str = 'base'

    def __init__(
        self,
        conf: DictConfig,
        instance: ProblemInstance,
        logger: Optional[StdOutLogger],
        timer: Timer,
        logging_dir: Optional[Path] = None,
    ):
        super(BasePipeline, self).__init__()
        self.conf = conf
        self.instance = instance
        self.logger = logger
        self.timer = timer
        self.logging_dir = None if logging_dir is None else Path(logging_dir)

    def log_results(
        self,
        prefix: Literal['run', 'sweep', 'noisefree', 'certify'],
        delta: Optional[float] = None,
        gamma: Optional[int] = None,
        t: Optional[float] = None,
        residual: Optional[float] = None,
        violations: Optional[List[str]] = None,
        elapsed_time: Optional[float] = None,
    ):
        if self.logger is None:
            return
        self.logger(
            prefix=prefix,
            delta=delta,
            gamma=gamma,
            t=t,
            residual=residual,
            violations=violations,
            elapsed_time=elapsed_time,
        )

    @abstractmethod
    def run(self) -> bool:
        """Execute the pipeline; True when every asserted inequality holds."""
        raise NotImplementedError

    @abstractmethod
    def save_summary(self):
        raise NotImplementedError
