"""Command-line entry point: run recipes, list them, validate configs.

Exit codes: 0 success (including validation warnings), 2 configuration or
usage error.  Worker-process count is taken from the ``COGMC_THREADS``
environment variable; there is deliberately no flag for it because results
never depend on it.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import (
    ConfigError,
    list_recipes,
    load_config,
    recipe_config,
    run_experiment,
    validate_config,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cogmc",
        description="Underlay cognitive molecular-communication experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a figure recipe and write CSV + JSON")
    run_p.add_argument("--recipe", required=True, help="recipe name (see list-recipes)")
    run_p.add_argument("--config", help="JSON file overriding recipe parameters")
    run_p.add_argument("--seed", type=int, help="master RNG seed (required for stochastic recipes)")
    run_p.add_argument("--out", help="output path prefix for <prefix>.csv/.json")

    sub.add_parser("list-recipes", help="show the recipe catalog")

    val_p = sub.add_parser("validate", help="check a config file without running")
    val_p.add_argument("--config", required=True, help="JSON config file")

    return parser


def _cmd_run(args) -> int:
    config = recipe_config(args.recipe)
    if args.config:
        config = load_config(args.config, base=config)
    csv_path, json_path = run_experiment(
        args.recipe, seed=args.seed, out_prefix=args.out, config=config
    )
    print(csv_path)
    print(json_path)
    return 0


def _cmd_list(args) -> int:
    for name, recipe in list_recipes().items():
        print(f"{name}\t{recipe.description}")
    return 0


def _cmd_validate(args) -> int:
    report, config = validate_config(args.config)
    for message in report.messages:
        print(f"warning: {message}")
    print(f"ok: {args.config}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "list-recipes": _cmd_list,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
