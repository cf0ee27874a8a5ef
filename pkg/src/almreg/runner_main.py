import sys
from typing import Optional, Sequence

from loguru import logger
from omegaconf.errors import OmegaConfBaseException

from almreg.runner_common import report_common, run_common
from almreg.utils.engine_utils import parse_args_almreg, resolve_mode, set_arguments, validate_config
from almreg.utils.exceptions import AlmregError, ConfigError
from almreg.utils.logger import set_logger

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2


def main_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Exit code 0 when every asserted inequality holds, 1 on a violation, 2 on a configuration error."""
    args_parsed = parse_args_almreg(argv)
    set_logger(level=args_parsed.log_level)

    try:
        if args_parsed.command == 'report':
            ok = report_common(args_parsed.input, args_parsed.out, log_level=args_parsed.log_level)
        else:
            conf = set_arguments(
                config=args_parsed.config,
                problem=args_parsed.problem,
                solver=args_parsed.solver,
                stopping=args_parsed.stopping,
                output=args_parsed.output,
                instance=getattr(args_parsed, 'instance', None),
                command=args_parsed.command,
            )
            mode = resolve_mode(args_parsed.command, conf)
            config_summary = validate_config(conf, mode)
            ok = run_common(conf, mode=config_summary.mode, logging_dir=config_summary.logging_dir,
                            log_level=args_parsed.log_level)
    except (ConfigError, OmegaConfBaseException, FileNotFoundError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except AlmregError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_VIOLATION

    return EXIT_OK if ok else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main_cli())
