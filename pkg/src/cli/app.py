"""Argument parsing and dispatch for the kosweep command."""

import argparse
import logging
import sys
from typing import List, Optional

from ..core.errors import KOSweepError
from ..core.genus import CERTIFICATES
from ..core.obstruction import STRATEGIES
from ..core.settings import AppSettings
from ..version import get_version
from .commands import COMMANDS, LATTICE_FORMS, Session
from .formatters import FORMATS, error_record, render

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--cache-dir", help="Bernoulli cache directory")
    common.add_argument("--workers", type=int, help="sweep worker processes")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="kosweep",
        description="Exact Bernoulli, genus, lattice and KO computations.",
    )
    parser.add_argument("--version", action="version", version=get_version())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bernoulli", parents=[common], help="B_m exactly")
    p.add_argument("m", type=int)
    p.add_argument("--upto", action="store_true", help="list B_1 .. B_m")

    p = sub.add_parser("tconst", parents=[common], help="t(m) with its factors")
    p.add_argument("m", type=int)

    p = sub.add_parser("aconst", parents=[common], help="A(m, n)")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)

    p = sub.add_parser("sweep", parents=[common], help="check A(m, 2) = 1")
    p.add_argument("--max", type=int, help="largest m (default from settings)")
    p.add_argument("--strategy", choices=STRATEGIES, default="cross_check")

    p = sub.add_parser("primes", parents=[common], help="regular prime classes")
    p.add_argument("--below", type=int, default=100)
    p.add_argument("--very-regular", action="store_true")

    p = sub.add_parser("genus", parents=[common], help="Ahat and L numbers")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--manifold", metavar="FILE")
    source.add_argument("--builtin", choices=sorted(CERTIFICATES))
    source.add_argument("--polynomials", type=int, metavar="J")

    p = sub.add_parser("lattice", parents=[common], help="intersection forms")
    form = p.add_mutually_exclusive_group(required=True)
    form.add_argument("--form", choices=sorted(LATTICE_FORMS))
    form.add_argument("--gram", metavar="FILE", help="JSON array of integer rows")
    p.add_argument("--represent", type=int, metavar="T")
    p.add_argument("--even", action="store_true", help="even vectors only")
    p.add_argument("--bound", type=int, default=8)

    p = sub.add_parser("ko", parents=[common], help="KO groups and surjectivity")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--group", type=int, metavar="N")
    what.add_argument("--table", type=int, metavar="N")
    what.add_argument("--report", type=int, nargs=2, metavar=("d", "k"))

    p = sub.add_parser("report", parents=[common], help="full reproduction")
    p.add_argument("--max", type=int, help="sweep bound (default from settings)")

    return parser


def configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def run(argv: Optional[List[str]] = None, settings: Optional[AppSettings] = None) -> int:
    """Parse argv, run one command and print its document on stdout."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(args.verbose)
    settings = settings or AppSettings()
    try:
        session = Session(
            settings.cache_dir(args.cache_dir),
            settings.workers(args.workers),
            settings.sweep_max(),
        )
        session.open()
        try:
            document = COMMANDS[args.command](args, session)
        finally:
            session.close()
    except KOSweepError as e:
        logger.debug("%s failed", args.command, exc_info=True)
        print(error_record(e), file=sys.stderr)
        return EXIT_DOMAIN

    print(render(document, args.format))
    return EXIT_OK
