"""CoopEq application entry and setup."""

import logging
import sys
from typing import Optional, Sequence

from .cli.commands import EXIT_SOLVER, EXIT_USAGE, build_parser, run, settings_overrides
from .core.errors import ConfigError, GameError, SolverError
from .core.settings import Settings, ensure_app_dirs, get_logs_dir, load_settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(settings: Settings) -> None:
    """Attach stderr and log-file handlers to the package logger."""
    root = logging.getLogger("coopeq")
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    root.setLevel(logging.DEBUG)
    root.propagate = False

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(settings.log_level.upper())
    console.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    root.addHandler(console)

    if settings.log_to_file:
        try:
            handler = logging.FileHandler(get_logs_dir() / "coopeq.log", encoding="utf-8")
        except OSError as e:
            root.warning("Cannot open log file: %s", e)
        else:
            handler.setLevel(logging.DEBUG)
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            root.addHandler(handler)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        settings = load_settings().with_overrides(**settings_overrides(args))
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        ensure_app_dirs()
    except OSError as e:
        print(f"error: cannot create app data dir: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(settings)
    log = logging.getLogger(__name__)

    try:
        return run(args, settings, sys.stdout)
    except (GameError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as e:
        log.error("Solver failure in %s: %s", args.command, e)
        return EXIT_SOLVER
