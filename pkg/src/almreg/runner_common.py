from pathlib import Path
from typing import Literal, Optional

from omegaconf import DictConfig, OmegaConf

from .loggers.report import load_report, report_emit
from .pipelines import build_pipeline
from .problems import build_problem
from .utils.logger import add_file_handler, set_logger, yaml_for_logging


def run_common(
    conf: DictConfig,
    mode: str,
    logging_dir: Path,
    log_level: Literal['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'] = 'INFO'
) -> bool:
    logger = set_logger(level=log_level)

    # Basic setup
    add_file_handler(logging_dir / "result.log")
    OmegaConf.save(config=conf, f=(logging_dir / "hparams.yaml"))

    logger.info(f"Mode: {mode} | Problem: {conf.problem.kind}")
    logger.info(f"Result will be saved at {logging_dir}")
    logger.debug(f"Config:\n{yaml_for_logging(conf)}")

    instance = build_problem(conf.problem)
    pipeline = build_pipeline(pipeline_type=mode, conf=conf, instance=instance, logging_dir=logging_dir)

    try:
        return pipeline.run()
    except KeyboardInterrupt:
        logger.warning("Interrupted.")
        return False


def report_common(input_path: Path, output_path: Optional[Path] = None,
                  log_level: Literal['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'] = 'INFO') -> bool:
    logger = set_logger(level=log_level)
    record, reports, extras = load_report(input_path)
    output_path = Path(input_path).with_suffix('.csv') if output_path is None else Path(output_path)
    report_emit(record, reports, 'csv', output_path)
    logger.info(f"Re-rendered {len(record.runs)} runs of {record.label}")
    return bool(extras.get('ok', True))
