"""Command-line front end for the experiment runner.

Exit codes: 0 on success, 1 when an experiment's built-in assertions fail
(artifacts and ``report.json`` are still written), 2 when the config is
rejected before anything runs (no files are produced), and 3 when the
config asks for more than the desk-scale resource caps allow.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import experiments

__all__ = ["main"]

_EXIT_OK = 0
_EXIT_ASSERTION = 1
_EXIT_CONFIG = 2
_EXIT_RESOURCE = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iprep",
        description="Run, validate, or list declarative experiments.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="execute one experiment config")
    run.add_argument("--config", required=True, help="path to a JSON config")
    run.add_argument(
        "--out",
        default=None,
        help="output directory (default: 'out' from the config, else "
        "runs/<experiment>)",
    )
    run.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker threads for independent jobs (default 1)",
    )

    validate = commands.add_parser(
        "validate", help="check a config against its schema without running"
    )
    validate.add_argument(
        "--config", required=True, help="path to a JSON config"
    )

    commands.add_parser(
        "list", help="print known experiment names and required fields"
    )
    return parser


def _load_config(path: str):
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as err:
        print(f"cannot read config: {err}", file=sys.stderr)
    except json.JSONDecodeError as err:
        print(f"config is not valid JSON: {err}", file=sys.stderr)
    return None


def _cmd_run(args) -> int:
    config = _load_config(args.config)
    if config is None:
        return _EXIT_CONFIG
    try:
        experiments.validate_config(config)
    except experiments.ConfigError as err:
        print(f"invalid config: {err}", file=sys.stderr)
        return _EXIT_CONFIG
    out_dir = args.out or config.get("out") or f"runs/{config['experiment']}"
    try:
        report = experiments.run(config, out_dir, threads=args.threads)
    except experiments.ConfigError as err:
        print(f"invalid config: {err}", file=sys.stderr)
        return _EXIT_CONFIG
    except experiments.ResourceLimitError as err:
        print(f"resource limit: {err}", file=sys.stderr)
        return _EXIT_RESOURCE
    for entry in report.assertions:
        status = "PASS" if entry["passed"] else "FAIL"
        detail = f" ({entry['detail']})" if entry["detail"] else ""
        print(f"[{status}] {entry['name']}{detail}")
    print(
        f"wrote {len(report.files)} artifact(s) + report.json to {out_dir} "
        f"in {report.wall_time_s:.2f}s"
    )
    if not report.passed:
        print("one or more built-in assertions failed", file=sys.stderr)
        return _EXIT_ASSERTION
    return _EXIT_OK


def _cmd_validate(args) -> int:
    config = _load_config(args.config)
    if config is None:
        return _EXIT_CONFIG
    try:
        experiments.validate_config(config)
    except experiments.ConfigError as err:
        print(f"invalid config: {err}", file=sys.stderr)
        return _EXIT_CONFIG
    print(f"config OK: {config['experiment']}")
    return _EXIT_OK


def _cmd_list() -> int:
    for name in experiments.EXPERIMENT_NAMES:
        fields = ", ".join(experiments.required_fields(name))
        print(f"{name}: requires {fields}")
    return _EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "validate":
        return _cmd_validate(args)
    return _cmd_list()


if __name__ == "__main__":
    sys.exit(main())
