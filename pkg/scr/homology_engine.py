"""
Homology Engine

Computes heart-valued homology of complexes of pair spaces and the ℓ¹-homology /
bounded cohomology of finite groups from JSON task files, and runs the seeded
law suites.

Commands:
    compute <file>      → run the task in the file
    les <file>          → run the file's short exact sequence as a long exact sequence task
    duality <file>      → run the file's module through the duality check
    check-laws          → run a property suite (--suite, --seed, --cases)

Config-driven constants (overridable through QAH_* environment variables or a .env file):
    DEFAULT_FORMAT, DEFAULT_MAX_DEGREE, DEFAULT_RESOURCE_CAP, DEFAULT_LOG_LEVEL

Exit codes: 0 success, 2 invalid input, 3 resource limit, 1 anything else
(including a law suite with failing cases).
"""

import argparse
import logging
import sys
import time

from conf.config import LOG_DIR, REPORT_DIR, TOOL_VERSION, WITNESS_DIR
from lib.common.errors import (
    ComposabilityError,
    DimensionMismatch,
    EndpointMismatch,
    FieldMismatch,
    NotAComplex,
    NotBounded,
    NotEquivariant,
    NotStrictExact,
    ResourceLimit,
    TaskValidationError,
    UnknownSuite,
)
from lib.common.export_utils import export_report, render
from lib.common.logger import setup_logger
from lib.common.task_loader import load_task
from lib.common.utils import input_digest, load_env_defaults, report_name
from lib.domain.laws import SUITES, run_suite
from lib.domain.tasks import run_task

VALIDATION_ERRORS = (
    TaskValidationError,
    NotBounded,
    NotAComplex,
    NotStrictExact,
    FieldMismatch,
    DimensionMismatch,
    ComposabilityError,
    NotEquivariant,
    EndpointMismatch,
    UnknownSuite,
    FileNotFoundError,
)

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_RESOURCE = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# Main
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=None, help="Report format (default: json).")
    common.add_argument("--max-degree", type=int, default=None, help="Highest homological degree computed.")
    common.add_argument("--resource-cap", type=int, default=None,
                        help="Largest allowed |G|^(n+1) · dim M (default: 100000).")
    common.add_argument("--output", default=None, help="Write the report to this file instead of stdout.")
    common.add_argument("--export", action="store_true", help=f"Also export the report to {REPORT_DIR}/.")
    common.add_argument("--log_level", default=None, help="Logging level (default: INFO).")
    common.add_argument("--quiet", action="store_true", help="Suppress console logs (keep progress bars visible).")

    parser = argparse.ArgumentParser(description="Heart-valued homology and ℓ¹-homology of finite groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("compute", "Run the task in a task file."),
                       ("les", "Long exact sequence of the file's short exact sequence."),
                       ("duality", "Duality check for the file's module.")):
        cmd = sub.add_parser(name, parents=[common], help=text)
        cmd.add_argument("file", help="Path to the JSON task file.")

    laws = sub.add_parser("check-laws", parents=[common], help="Run a seeded law suite.")
    laws.add_argument("--suite", required=True, help=f"One of: {', '.join(SUITES)}.")
    laws.add_argument("--seed", type=int, default=0, help="Base seed (default: 0).")
    laws.add_argument("--cases", type=int, default=100, help="Number of cases (default: 100).")
    laws.add_argument("--workers", type=int, default=1, help="Worker processes (default: 1).")
    laws.add_argument("--witness_dir", default=WITNESS_DIR, help=f"Where failing cases go (default: {WITNESS_DIR}).")
    return parser


def _settings(args: argparse.Namespace) -> dict:
    """Flags win over the environment, the environment over the defaults."""
    settings = load_env_defaults()
    for key in ("format", "max_degree", "resource_cap", "log_level"):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    return settings


def _run(args: argparse.Namespace, settings: dict) -> tuple[dict, int]:
    logger = logging.getLogger(__name__)
    if args.command == "check-laws":
        started = time.perf_counter()
        suite = run_suite(args.suite, args.seed, args.cases, workers=args.workers, export_dir=args.witness_dir)
        report = {
            "tool_version": TOOL_VERSION,
            "input_digest": input_digest({"suite": args.suite, "seed": args.seed, "cases": args.cases}),
            "operation": "check-laws",
            "results": suite,
            "timing": {"seconds": round(time.perf_counter() - started, 6)},
        }
        if not suite["passed"]:
            logger.error(f"Suite '{args.suite}' has {len(suite['failures'])} failing case(s)")
        return report, EXIT_OK if suite["passed"] else EXIT_FAILED

    task = load_task(args.file)
    if args.command != "compute":
        operation = "les" if args.command == "les" else "duality"
        logger.info(f"Running the file's data as a '{operation}' task")
        task.task = task.task.model_copy(update={"operation": operation})
    return run_task(task, max_degree=settings["max_degree"], cap=settings["resource_cap"]), EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    settings = _settings(args)

    setup_logger(level=settings["log_level"], log_dir=LOG_DIR, quiet=args.quiet)
    logger = logging.getLogger(__name__)

    try:
        report, code = _run(args, settings)
    except VALIDATION_ERRORS as exc:
        logger.error(f"Invalid input: {exc}")
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ResourceLimit as exc:
        logger.error(f"Resource limit: {exc}")
        print(f"error: ResourceLimit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except Exception as exc:
        logger.exception(f"Unexpected failure: {exc}")
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED

    fmt = settings["format"]
    if args.output:
        export_report(report, fmt, args.output)
    else:
        sys.stdout.write(render(report, fmt))
    if args.export:
        suffix = "json" if fmt == "json" else "txt"
        export_report(report, fmt, f"{REPORT_DIR}/{report_name(report['operation'], report['input_digest'])}.{suffix}")
    return code


if __name__ == "__main__":
    sys.exit(main())
