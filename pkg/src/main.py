import argparse
import logging
import sys

from src.commands import cmd_check, cmd_compare, cmd_convergence, cmd_critical, cmd_run
from src.core.config import get_settings
from src.kdv.errors import KdvError

logger = logging.getLogger("src")


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="kdv",
        description="KdV equation under saturated distributed feedback: simulator and certificate checker",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help=f"Output directory (default: $KDV_OUTPUT_DIR or {settings.KDV_OUTPUT_DIR})")
    common.add_argument("--seed", type=int, default=None, help="Seed echoed in reports and used by property suites")
    common.add_argument("--quiet", action="store_true", help="Only warnings and errors")
    common.add_argument("--jobs", type=int, default=1, help="Run scenarios or refinement levels concurrently")

    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="Simulate scenarios and check their decay envelopes")
    run.add_argument("--scenario", action="append", required=True, help="Scenario file (repeatable)")
    run.add_argument("--slack", type=float, default=None, help="Relative envelope slack")
    run.set_defaults(func=cmd_run)

    check = sub.add_parser("check", parents=[common], help="Run the randomized property suites")
    check.set_defaults(func=cmd_check)

    conv = sub.add_parser("convergence", parents=[common], help="Combined (h, dt) refinement study")
    conv.add_argument("--scenario", action="append", required=True)
    conv.add_argument("--levels", type=int, default=4)
    conv.set_defaults(func=cmd_convergence)

    compare = sub.add_parser("compare", parents=[common], help="Saturated against linear feedback energy")
    compare.add_argument("--scenario", action="append", required=True)
    compare.set_defaults(func=cmd_compare)

    critical = sub.add_parser("critical", parents=[common], help="Match a length against the critical set")
    critical.add_argument("length", help="Domain length, e.g. 6.2831 or 2pi")
    critical.add_argument("--bound", type=int, default=50)
    critical.add_argument("--tol", type=float, default=1e-9)
    critical.set_defaults(func=cmd_critical)
    return parser


def main(argv=None) -> int:
    settings = get_settings()
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.quiet else getattr(logging, settings.KDV_LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except KdvError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
