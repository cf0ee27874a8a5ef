from typing import List, Literal, Optional

from loguru import logger


class StdOutLogger:
    def __init__(self, label: str, total_runs: Optional[int] = None) -> None:
        super(StdOutLogger, self).__init__()
        self.label = label
        self.total_runs = total_runs if total_runs is not None else "???"

    def __call__(
        self,
        prefix: Literal['run', 'sweep', 'noisefree', 'certify'],
        index: Optional[int] = None,
        delta: Optional[float] = None,
        gamma: Optional[int] = None,
        t: Optional[float] = None,
        residual: Optional[float] = None,
        violations: Optional[List[str]] = None,
        elapsed_time: Optional[float] = None,
        **kwargs
    ):
        if index is not None and prefix == 'sweep':
            logger.info(f"[{self.label}] run: {index + 1} / {self.total_runs}")
        if delta is not None:
            logger.info(f"{prefix} delta: {delta:.4e}")
        if gamma is not None:
            logger.info(f"{prefix} stopping index: {gamma} (t = {t:.4g})")
        elif prefix in ('run', 'sweep'):
            logger.warning(f"{prefix} did not stop")
        if residual is not None:
            logger.info(f"{prefix} residual: {residual:.6e}")
        if elapsed_time is not None:
            logger.info(f"elapsed_time: {elapsed_time:.4f}")
        if violations:
            logger.warning(f"{prefix} violations: {violations}")
