"""projlab command-line entry point."""

import os
import signal
import sys
from typing import List, Optional

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from projlab.cli.commands import run_compute, run_sweep, run_table
from projlab.cli.output import write_output
from projlab.cli.parsing import build_parser, build_run_config, config_overrides
from projlab.cli.verify import render_checks, run_suite
from projlab.errors import ConfigError, OutOfRange, ParseError, ProjLabError
from projlab.services.config import apply_overrides, dump_config, load_config
from projlab.services.log import LogService
from projlab.shared_state import RunState, bus, shutdown_event

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# Bad input of any kind exits like an argparse error
USAGE_ERRORS = (ParseError, ConfigError, OutOfRange)


def _dispatch(rc, state: RunState) -> int:
    if rc.command == "compute":
        write_output(run_compute(rc), rc.out)
    elif rc.command == "sweep":
        write_output(run_sweep(rc), rc.out)
    elif rc.command == "table":
        write_output(run_table(rc), rc.out)
    else:
        outcomes = run_suite(rc, state)
        write_output(render_checks(outcomes, rc.format), rc.out)
        if state.failed_checks():
            return EXIT_FAILED
    return EXIT_OK


def run(argv: Optional[List[str]] = None) -> int:
    """Run one CLI invocation and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    log_service = None
    try:
        config = load_config(args.config)
        rc = build_run_config(args, config)
        rc.config = apply_overrides(config, config_overrides(rc))

        log_conf = rc.config["log"]
        log_service = LogService(bus, timezone=log_conf["timezone"],
                                 log_file=args.log_file or log_conf["file"] or None,
                                 max_file_size=log_conf["max_file_size"])
        log_service.start()
        if args.show_config:
            sys.stderr.write(dump_config(rc.config))

        state = RunState()
        state.set_config(rc.config)
        return _dispatch(rc, state)
    except USAGE_ERRORS as e:
        bus.log_error(f"{type(e).__name__}: {e}")
        _report(log_service, e)
        return EXIT_USAGE
    except ProjLabError as e:
        bus.log_error(f"{type(e).__name__}: {e}")
        _report(log_service, e)
        return EXIT_FAILED
    finally:
        if log_service is not None:
            log_service.stop()


def _report(log_service: Optional[LogService], error: Exception) -> None:
    # Without a running log service the message still has to reach stderr.
    if log_service is None:
        sys.stderr.write(f"projlab: {error}\n")


def main():
    """Main entry point."""
    def signal_handler(sig, frame):
        sys.stderr.write("\nShutting down...\n")
        shutdown_event.set()

    signal.signal(signal.SIGINT, signal_handler)
    signal.signal(signal.SIGTERM, signal_handler)

    sys.exit(run())


if __name__ == "__main__":
    main()
