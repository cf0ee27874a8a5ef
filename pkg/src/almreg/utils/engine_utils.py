import argparse
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import List, Literal, Optional, Sequence, Union

from omegaconf import DictConfig, OmegaConf

from .exceptions import ConfigError

OUTPUT_ROOT_DIR = "./outputs"
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
SECTIONS = ('problem', 'solver', 'stopping')
REQUIRED_SECTIONS = {'certify': ('problem',)}
MODES = ('run', 'noisefree', 'sweep', 'certify')


@dataclass
class ConfigSummary:
    mode: Optional[str] = None
    project_id: Optional[str] = None
    logging_dir: Optional[Path] = None


def _add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        '--config', type=str, default=None,
        dest='config',
        help="Combined config (YAML or JSON) holding any of the problem/solver/stopping/output sections")

    parser.add_argument(
        '--problem', type=str, default=None,
        dest='problem',
        help="Config for the problem instance")

    parser.add_argument(
        '--solver', type=str, default=None,
        dest='solver',
        help="Config for step sizes, initial dual element and iteration caps")

    parser.add_argument(
        '--stopping', type=str, default=None,
        dest='stopping',
        help="Config for the stopping rule and the noise levels")

    parser.add_argument(
        '--output', type=str, default=None,
        dest='output',
        help="Config for the output directory and report format")


def parse_args_almreg(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:

    parser = argparse.ArgumentParser(description="Parser for almreg configuration")
    parser.add_argument(
        '--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'], default=LOG_LEVEL,
        dest='log_level',
        help="Logging level")

    subparsers = parser.add_subparsers(dest='command', required=True)

    # -------- Solver commands ----------------------------------------

    run_parser = subparsers.add_parser('run', help="Single run at stopping.delta (noisefree when delta is 0)")
    _add_config_arguments(run_parser)

    sweep_parser = subparsers.add_parser('sweep', help="Discrepancy-stopped runs over geometric noise levels")
    _add_config_arguments(sweep_parser)

    certify_parser = subparsers.add_parser('certify', help="Check the source certificate of a problem instance")
    _add_config_arguments(certify_parser)
    certify_parser.add_argument(
        '--instance', type=str, default=None,
        dest='instance',
        help="Instance file (YAML or JSON) with K as CSV, u_dagger, p_dagger and optionally g; replaces the problem")

    # -------- Report commands ----------------------------------------

    report_parser = subparsers.add_parser('report', help="Re-render a stored JSON sweep report as CSV")
    report_parser.add_argument(
        'input', type=Path,
        help="JSON report written by `sweep`")
    report_parser.add_argument(
        '--out', type=Path, default=None,
        dest='out',
        help="CSV path (defaults to the input path with a .csv suffix)")

    return parser.parse_args(argv)


def set_arguments(
    config: Optional[Union[Path, str]] = None,
    problem: Optional[Union[Path, str]] = None,
    solver: Optional[Union[Path, str]] = None,
    stopping: Optional[Union[Path, str]] = None,
    output: Optional[Union[Path, str]] = None,
    instance: Optional[Union[Path, str]] = None,
    command: Optional[str] = None,
) -> DictConfig:
    """Merge the combined config with the section files; section files win.

    An instance file replaces the problem section with `{kind: file, path: ...}`.
    """
    conf = OmegaConf.create()
    if config is not None:
        conf.merge_with(OmegaConf.load(config))
    for path in (problem, solver, stopping, output):
        if path is not None:
            conf.merge_with(OmegaConf.load(path))
    if instance is not None:
        conf.problem = {'kind': 'file', 'path': str(instance)}

    required = REQUIRED_SECTIONS.get(command, SECTIONS)
    missing: List[str] = [section for section in required if section not in conf]
    if missing:
        raise ConfigError(f"config is missing sections {missing}")
    if 'output' not in conf:
        conf.output = {'dir': OUTPUT_ROOT_DIR, 'project_id': None, 'format': 'json', 'dump_vectors': False}
    return conf


def get_new_logging_dir(output_root_dir, project_id, mode: Literal['run', 'noisefree', 'sweep', 'certify']):
    version_idx = 0
    project_dir: Path = Path(output_root_dir) / project_id

    while (project_dir / f"version_{version_idx}").exists():
        version_idx += 1

    new_logging_dir: Path = project_dir / f"version_{version_idx}"
    new_logging_dir.mkdir(exist_ok=True, parents=True)

    summary_path = new_logging_dir / f"{mode}_summary.json"
    with open(summary_path, 'w') as f:
        json.dump({"success": False}, f, indent=4)

    return new_logging_dir


def resolve_mode(command: str, conf: DictConfig) -> str:
    """`run` with a zero (or missing) noise level becomes a noisefree run."""
    if command != 'run':
        return command
    delta = conf.stopping.get('delta')
    return 'run' if delta is not None and float(delta) > 0 else 'noisefree'


def validate_config(conf: DictConfig, mode: str) -> ConfigSummary:
    if mode not in MODES:
        raise ConfigError(f"{mode} is not a runner mode! Choose from {list(MODES)}")
    kind = conf.problem.get('kind')
    if kind is None:
        raise ConfigError("problem.kind is required")

    output_dir = conf.output.get('dir') or OUTPUT_ROOT_DIR
    project_id = conf.output.get('project_id') or f"{str(kind).lower()}_{mode}"
    logging_dir: Path = get_new_logging_dir(output_root_dir=output_dir, project_id=project_id, mode=mode)

    return ConfigSummary(mode=mode, project_id=project_id, logging_dir=logging_dir)
