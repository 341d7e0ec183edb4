import argparse
import logging
import sys

from quadprop.configs.run_config import load_config
from quadprop.simulation import run_kernel, run_scan, run_simulate, run_wigner
from quadprop.utils.errors import (CausticError, ConfigError, ExpressionDomainError,
                                   ExpressionError, FamilyMismatchError, IntegrationError,
                                   QuadratureError, SpanError)

COMMANDS = {
    'simulate': run_simulate,
    'kernel': run_kernel,
    'scan': run_scan,
    'wigner': run_wigner,
}

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

CONFIG_ERRORS = (ConfigError, ExpressionError, FamilyMismatchError)
NUMERIC_ERRORS = (IntegrationError, CausticError, ExpressionDomainError, QuadratureError,
                  SpanError)


def _parse_args(argv=None):
    parser = argparse.ArgumentParser(
        description="Exact propagation of quadratic Hamiltonians: coefficient time series, "
        "kernels, Wigner grids and Paul-trap stability scans")
    parser.add_argument(
        "command",
        choices=sorted(COMMANDS),
        help="What to compute.")
    parser.add_argument(
        "config",
        type=str,
        help="Path to the INI run configuration.")
    parser.add_argument(
        "--output",
        type=str,
        default=None,
        help="Output file; overrides outputs.path.")
    parser.add_argument(
        "--format",
        type=str,
        choices=("csv", "json"),
        default=None,
        help="Output format; overrides outputs.format.")
    parser.add_argument(
        "--rtol",
        type=float,
        default=None,
        help="Relative integration tolerance.")
    parser.add_argument(
        "--atol",
        type=float,
        default=None,
        help="Absolute integration tolerance.")
    parser.add_argument(
        "--verbose",
        type=int,
        default=0,
        choices=(0, 1, 2),
        help="0 warnings only, 1 progress, 2 debug.")
    return parser.parse_args(argv)


def _init_logging(verbose):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(
        level=level,
        format="[%(asctime)s] %(levelname)s: %(message)s",
        handlers=[logging.StreamHandler(stream=sys.stderr)])


def _fail(e):
    message = str(e).replace('\n', ' ')
    print(f"error: {type(e).__name__}: {message}", file=sys.stderr)


def main(argv=None):
    args = _parse_args(argv)
    _init_logging(args.verbose)

    for name, value in (('rtol', args.rtol), ('atol', args.atol)):
        if value is not None and not value > 0:
            _fail(ConfigError(f"--{name} must be positive, got {value}"))
            return EXIT_CONFIG

    overrides = {
        'outputs.path': args.output,
        'outputs.format': args.format,
        'integration.rtol': args.rtol,
        'integration.atol': args.atol,
    }
    try:
        config = load_config(args.config, overrides=overrides)
        path = COMMANDS[args.command](config, verbose=args.verbose > 0)
    except CONFIG_ERRORS as e:
        _fail(e)
        return EXIT_CONFIG
    except NUMERIC_ERRORS as e:
        _fail(e)
        return EXIT_NUMERIC
    except OSError as e:
        _fail(e)
        return EXIT_IO

    logging.info(f"{args.command} finished: {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
