"""
Command-line entry point.

    levylt density   --lambda 1.5 --time 1 --grid -10:10:401 --output p.csv
    levylt resolvent --lambda 1.5 --energy 1 --grid -5:5:200 --output r.csv
    levylt ltdist    --lambda 1.5 --time 1 --endpoint fixed --xb 0 --grid 0:3:121 --output w.csv
    levylt moment    --lambda 1.5 --time 1 --endpoint free --grid -3:3:121 --output mu.csv
    levylt simulate  --lambda 1 --paths 3 --steps 1000 --time 1 --seed 42 --output paths.csv
    levylt verify    --suite analytic --tolerance default
    levylt figures   --output-dir figures/

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

from levylt.cli.commands import execute
from levylt.cli.figures import figure_recipes, retarget
from levylt.cli.serializers import write_curve, write_svg
from levylt.cli.verify import render_table, run_suite
from levylt.core.resources import configure_logging, load_config, resolve_worker_count
from levylt.core.schemas import DomainError, GridSpec, LevyLTError, RunConfig, WalkModel

logger = logging.getLogger(__name__)

CURVE_COMMANDS = ("density", "resolvent", "ltdist", "moment", "simulate")

# Flags whose values may start with '-' (negative numbers, grids such as -10:10:401).
VALUE_FLAGS = {
    "--lambda", "--diffusion", "--time", "--energy", "--grid", "--x", "--x2", "--xa", "--xb",
    "--epsilon",
}


def _join_values(argv: Sequence[str]) -> List[str]:
    """`--grid -10:10:401` → `--grid=-10:10:401` so argparse does not read the value as a flag."""
    joined: List[str] = []
    args = list(argv)
    index = 0
    while index < len(args):
        arg = args[index]
        if arg in VALUE_FLAGS and index + 1 < len(args) and args[index + 1].startswith("-"):
            joined.append(f"{arg}={args[index + 1]}")
            index += 2
            continue
        joined.append(arg)
        index += 1
    return joined


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levylt",
        description="Local-time statistics of symmetric Lévy random walks.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for name in CURVE_COMMANDS:
        sub = commands.add_parser(name, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        sub.add_argument("--lambda", dest="lam", type=float, help="Lévy index λ in [1, 2].")
        sub.add_argument("--diffusion", type=float, default=1.0, help="Diffusion constant D.")
        sub.add_argument("--time", type=float, help="Elapsed time t.")
        sub.add_argument("--energy", type=float, help="Laplace energy E (resolvent).")
        sub.add_argument("--grid", type=str, help="Inclusive grid min:max:count.")
        sub.add_argument("--x", type=float, help="Observation point (defaults to x_a).")
        sub.add_argument("--x2", type=float, help="Second point of a two-point moment.")
        sub.add_argument("--xa", type=float, default=0.0, help="Initial point x_a.")
        sub.add_argument("--xb", type=float, help="Final point x_b for a fixed endpoint.")
        sub.add_argument("--endpoint", choices=["fixed", "free"], default="free")
        sub.add_argument("--order", type=int, choices=[1, 2], default=1)
        sub.add_argument("--paths", type=int, help="Number of Monte Carlo paths.")
        sub.add_argument("--steps", type=int, help="Time steps per path.")
        sub.add_argument("--seed", type=int, default=0)
        sub.add_argument("--epsilon", type=float, help="Endpoint acceptance window for λ < 2.")
        sub.add_argument("--estimate", choices=["paths", "distribution", "moment"], default="paths")
        sub.add_argument("--scaled", action="store_true", help="Emit the dimensionless variables.")
        sub.add_argument("--format", choices=["csv", "json"], default="csv")
        sub.add_argument("--svg", type=str, help="Also write an SVG line chart here.")
        sub.add_argument("--output", type=str, help="Output file.")

    verify = commands.add_parser("verify", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    verify.add_argument("--suite", choices=["analytic", "montecarlo", "all"], default="analytic")
    verify.add_argument("--tolerance", choices=["default", "strict", "loose"], default="default")

    figures = commands.add_parser("figures", formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    figures.add_argument("--output-dir", type=str, default="figures")
    figures.add_argument("--format", choices=["csv", "json"], default="csv")
    figures.add_argument("--only", nargs="*", help="Recipe names to run (default: all).")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.command == "verify":
        return RunConfig(command="verify", suite=args.suite, tolerance=args.tolerance)
    return RunConfig(
        command=args.command,
        model=WalkModel(lam=args.lam, diffusion=args.diffusion) if args.lam is not None else None,
        t=args.time,
        E=args.energy,
        grid=GridSpec.parse(args.grid) if args.grid else None,
        x=args.x,
        x2=args.x2,
        x_a=args.xa,
        x_b=args.xb,
        endpoint=args.endpoint,
        order=args.order,
        paths=args.paths,
        steps=args.steps,
        seed=args.seed,
        epsilon=args.epsilon,
        estimate=args.estimate,
        scaled=args.scaled,
        output=args.output,
        format=args.format,
        svg=args.svg,
    )


def _write_outputs(config: RunConfig, settings: Dict[str, Any], workers: int) -> None:
    digits = int(settings.get("output", {}).get("significant_digits", 17))
    outputs = execute(config, settings, workers)
    for curve, path in outputs:
        write_curve(curve, path, config.format, digits)
        logger.info(f"Wrote {len(curve.rows)} rows to {path}")
    if config.svg:
        curve, _ = outputs[0]
        write_svg(curve, config.svg, title=f"{config.command}, λ = {config.model.lam:g}")


def run_figures(output_dir: str, fmt: str, only: Optional[List[str]], settings: Dict[str, Any], workers: int) -> None:
    target = Path(output_dir)
    for recipe in figure_recipes(settings):
        if only and recipe.name not in only:
            continue
        logger.info(f"--- Figure {recipe.name}: {recipe.description} ({len(recipe.runs)} runs) ---")
        for run in recipe.runs:
            _write_outputs(retarget(run, target).model_copy(update={"format": fmt}), settings, workers)


def _describe_validation(error: ValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ())) or "arguments"
    return f"invalid {location}: {first.get('msg', error)}"


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parses `argv`, runs the command and returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_values(argv))
    except SystemExit as e:
        return int(e.code or 0)

    try:
        settings = load_config()
        workers = resolve_worker_count(settings)
        if args.command == "figures":
            run_figures(args.output_dir, args.format, args.only, settings, workers)
            return 0
        config = config_from_args(args)
        if config.command == "verify":
            results = run_suite(config.suite, config.tolerance, settings, workers)
            sys.stdout.write(render_table(results))
            return 0 if all(result.passed for result in results) else 1
        _write_outputs(config, settings, workers)
        return 0
    except ValidationError as e:
        sys.stderr.write(f"levylt {args.command}: {_describe_validation(e)}\n")
        return 2
    except DomainError as e:
        parameter = f" (parameter --{e.parameter})" if e.parameter else ""
        sys.stderr.write(f"levylt {args.command}: {e}{parameter}\n")
        return 2
    except (LevyLTError, ValueError) as e:
        sys.stderr.write(f"levylt {args.command}: {e}\n")
        return 2


def main_cli():
    """Console entry point: environment, logging, then `run`."""
    load_dotenv()
    configure_logging()
    sys.exit(run())


if __name__ == "__main__":
    main_cli()
