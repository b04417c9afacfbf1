#!/usr/bin/env python3
"""
mipsbench CLI entrypoint.

This module provides the command-line interface for mipsbench:
- `mipsbench sweep`: replicated parameter sweeps written to a results CSV
  plus a JSON run manifest
- `mipsbench oracle-check`: the exact bias/variance property suite
- `mipsbench slope-demo`: one embedding-selection run on synthetic data
- `mipsbench bootstrap-cdf`: relative squared errors w.r.t. IPS over
  bootstrap resamples
- `mipsbench sample`: export synthetic logged data as CSV

Exit codes: 0 success, 1 configuration or input error, 2 more than half
of the seeds of some (estimator, value) cell failed (or, for oracle-check,
a property check failed), 130 interrupted.
"""

from pathlib import Path
from typing import List, Optional, Sequence
import argparse
import logging
import sys

from mipsbench.harness import (
    EXPERIMENTS,
    ESTIMATOR_NAMES,
    SWEEP_PARAMS,
    SweepSpec,
    bootstrap_cdf,
    default_values,
    emit_report,
    run_replications,
)
from mipsbench.harness.grids import DESK_REPLICATIONS
from mipsbench.ingest import DatasetReader, write_dataset_csv
from mipsbench.ingest.sources import CsvFileSource
from mipsbench.models import fit_action_posterior, posterior_weights
from mipsbench.estimators import mips
from mipsbench.oracle import run_oracle_checks
from mipsbench.output.console import Console
from mipsbench.slope import DEFAULT_DELTA, select_embedding_dims
from mipsbench.synthgen import (
    LoggingPolicy,
    SyntheticConfig,
    TargetPolicy,
    build_environment,
    ground_truth_value,
    on_policy_rollout,
    sample_logged_data,
)

logger = logging.getLogger(__name__)

FAILURE_THRESHOLD = 0.5

# flag -> SyntheticConfig field
CONFIG_FLAGS = {
    "num_actions": int,
    "context_dim": int,
    "embed_dims": int,
    "embed_cardinality": int,
    "beta": float,
    "epsilon": float,
    "reward_noise": float,
    "num_deficient_actions": int,
}


def _csv_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _add_config_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("synthetic environment")
    for name, kind in CONFIG_FLAGS.items():
        flag = "--" + name.replace("_", "-")
        group.add_argument(flag, type=kind, default=None, help=f"SyntheticConfig.{name}")
    group.add_argument("--sigma", dest="reward_noise", type=float, help="Alias of --reward-noise")
    group.add_argument("--withheld-dims", type=str, default=None, help="Comma-separated embedding dims hidden from estimators")
    group.add_argument("--seed", type=int, default=None, help="Master seed")


def _config_from_args(args: argparse.Namespace, base: Optional[SyntheticConfig] = None) -> SyntheticConfig:
    changes = {name: getattr(args, name) for name in CONFIG_FLAGS if getattr(args, name) is not None}
    if args.withheld_dims is not None:
        changes["withheld_dims"] = tuple(int(k) for k in _csv_list(args.withheld_dims))
    if args.seed is not None:
        changes["seed"] = args.seed
    return (base or SyntheticConfig()).with_(**changes)


def _config_flags_set(args: argparse.Namespace) -> List[str]:
    names = [name for name in CONFIG_FLAGS if getattr(args, name) is not None]
    names += [name for name in ("withheld_dims", "seed") if getattr(args, name) is not None]
    return ["--" + name.replace("_", "-") for name in names]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mipsbench",
        description="mipsbench - off-policy evaluation with marginalized importance weights for large action spaces",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  mipsbench sweep --experiment actions --reps 50 --out actions.csv
  mipsbench sweep --param n --values 800,3200 --estimators ips,mips --out n.csv
  mipsbench oracle-check
  mipsbench slope-demo --n 800
  mipsbench bootstrap-cdf --n 1000 --reps 150
        """,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress (INFO)")
    parser.add_argument("--debug", action="store_true", help="Log everything (DEBUG)")
    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    sweep = subparsers.add_parser("sweep", help="Run a replicated parameter sweep")
    sweep.add_argument("--experiment", choices=sorted(EXPERIMENTS), help="Named preset (parameter, base config, roster)")
    sweep.add_argument("--param", choices=SWEEP_PARAMS, help="Swept parameter")
    sweep.add_argument("--values", type=str, help="Comma-separated values (default: the parameter's grid)")
    sweep.add_argument("--full-grid", action="store_true", help="Use the full grids instead of the desk-scale ones")
    sweep.add_argument("--estimators", type=str, help=f"Comma-separated roster from: {', '.join(ESTIMATOR_NAMES)}")
    sweep.add_argument("--reps", type=int, default=DESK_REPLICATIONS, help="Replications per value")
    sweep.add_argument("--n", type=int, default=None, help="Sample size when n is not swept")
    sweep.add_argument("--ground-truth-m", type=int, default=None, help="Contexts for the ground-truth value")
    sweep.add_argument("--target", choices=["epsilon-greedy", "logging"], default="epsilon-greedy")
    sweep.add_argument("--resample-environment", action="store_true", help="Draw a new environment for every seed")
    sweep.add_argument("--delta", type=float, default=DEFAULT_DELTA, help="SLOPE++ confidence level")
    sweep.add_argument("--workers", type=int, default=1, help="Worker processes")
    sweep.add_argument("--out", type=str, required=True, help="Results CSV path")
    _add_config_arguments(sweep)

    oracle = subparsers.add_parser("oracle-check", help="Run the exact oracle property suite")
    oracle.add_argument("--seed", type=int, default=0)
    oracle.add_argument("--instances", type=int, default=50, help="Random instances per identity check")
    oracle.add_argument("--draws", type=int, default=100_000, help="Draws per simulation check")
    oracle.add_argument("--simulated", type=int, default=5, help="Instances per simulation check")

    demo = subparsers.add_parser("slope-demo", help="Select embedding dimensions with SLOPE++ on one dataset")
    demo.add_argument("--n", type=int, default=800)
    demo.add_argument("--mode", choices=["greedy", "exhaustive"], default="greedy")
    demo.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    demo.add_argument("--ground-truth-m", type=int, default=100_000)
    _add_config_arguments(demo)

    cdf = subparsers.add_parser("bootstrap-cdf", help="Bootstrap CDF of squared errors relative to IPS")
    cdf.add_argument("--logged-data", type=str, help="Logging-policy dataset CSV (default: sample one)")
    cdf.add_argument("--on-policy-data", type=str, help="Target-policy dataset CSV (default: sample one)")
    cdf.add_argument("--size", type=int, default=10_000, help="Size of sampled datasets")
    cdf.add_argument("--n", type=int, default=1000, help="Bootstrap resample size")
    cdf.add_argument("--reps", type=int, default=150, help="Bootstrap resamples")
    cdf.add_argument("--estimators", type=str, default="dm,ips,dr,mips")
    cdf.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    cdf.add_argument("--out", type=str, help="Optional CSV for the CDF table")
    _add_config_arguments(cdf)

    sample = subparsers.add_parser("sample", help="Write synthetic logged data as CSV")
    sample.add_argument("--n", type=int, default=10_000)
    sample.add_argument("--on-policy", action="store_true", help="Sample from the target policy instead")
    sample.add_argument("--out", type=str, required=True)
    _add_config_arguments(sample)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main CLI entrypoint for the mipsbench command.

    Returns:
        Exit code:
            - 0: Success
            - 1: Configuration or input error
            - 2: Estimator failure threshold exceeded
            - 130: Interrupted by user (Ctrl+C)
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.DEBUG if args.debug else logging.INFO if args.verbose else logging.WARNING
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    if not args.command:
        parser.print_help()
        return 1

    try:
        if args.command == "sweep":
            return run_sweep(args)
        if args.command == "oracle-check":
            return run_oracle_check(args)
        if args.command == "slope-demo":
            return run_slope_demo(args)
        if args.command == "bootstrap-cdf":
            return run_bootstrap_cdf(args)
        if args.command == "sample":
            return run_sample(args)
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return 130
    except (ValueError, TypeError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    return 1


def sweep_spec_from_args(args: argparse.Namespace) -> SweepSpec:
    """Build the SweepSpec a ``sweep`` invocation describes."""
    overrides = {
        "replications": args.reps,
        "target": args.target,
        "resample_environment": args.resample_environment,
        "delta": args.delta,
        "workers": args.workers,
    }
    if args.n is not None:
        overrides["n"] = args.n
    if args.ground_truth_m is not None:
        overrides["ground_truth_m"] = args.ground_truth_m
    if args.estimators:
        overrides["roster"] = tuple(_csv_list(args.estimators))

    if args.experiment:
        spec = SweepSpec.from_experiment(args.experiment, **overrides)
        base = _config_from_args(args, spec.base)
        param = args.param or spec.param
    else:
        if not args.param:
            raise ValueError("either --experiment or --param is required")
        base = _config_from_args(args)
        param = args.param
        spec = None

    if args.values:
        values = tuple(_csv_list(args.values))
    elif spec is not None and param == spec.param and not args.full_grid:
        values = spec.values
    else:
        values = default_values(param, full=args.full_grid)

    if spec is None:
        return SweepSpec(param=param, values=values, base=base, **overrides)
    return spec.with_(param=param, values=values, base=base)


def run_sweep(args: argparse.Namespace) -> int:
    """Run a sweep, write the results and report the failure threshold."""
    spec = sweep_spec_from_args(args)
    logger.info(f"Sweeping {spec.param} over {spec.values} with {spec.replications} replications")
    report = run_replications(spec)
    files = emit_report(report, Path(args.out))
    Console().display_report(report, files)
    worst = report.max_failure_fraction()
    if worst > FAILURE_THRESHOLD:
        print(f"Error: {worst:.0%} of the seeds failed for some estimator (threshold {FAILURE_THRESHOLD:.0%})", file=sys.stderr)
        return 2
    return 0


def run_oracle_check(args: argparse.Namespace) -> int:
    checks = run_oracle_checks(seed=args.seed, num_instances=args.instances, simulation_draws=args.draws, simulated_instances=args.simulated)
    Console().display_checks(checks)
    return 0 if all(check.passed for check in checks) else 2


def run_slope_demo(args: argparse.Namespace) -> int:
    """Embedding selection on 20 binary dimensions (unless overridden)."""
    config = _config_from_args(args, SyntheticConfig(num_actions=1000, embed_dims=20, embed_cardinality=2))
    env = build_environment(config)
    data = sample_logged_data(env, config, args.n)
    target, logging_policy = TargetPolicy(env, config), LoggingPolicy(env, config)
    selection = select_embedding_dims(data, target, logging_policy, delta=args.delta, mode=args.mode)
    full = posterior_weights(data, target, logging_policy, fit_action_posterior(data))
    truth = ground_truth_value(env, config, args.ground_truth_m)
    Console().display_selection(selection, mips(data, full.weights).estimate, truth.value)
    return 0


def run_bootstrap_cdf(args: argparse.Namespace) -> int:
    """
    Bootstrap CDF on synthetic data.

    Datasets given as CSV must carry the generating config in their
    sidecar; the environment and both policies are rebuilt from it.
    """
    if args.logged_data:
        source = CsvFileSource(args.logged_data)
        logged = DatasetReader(source).read()
        generating = source.metadata().get("config")
        if not generating:
            raise ValueError(f"{args.logged_data}: the sidecar has no generating config to rebuild the policies from")
        config = SyntheticConfig.from_dict(generating)
        ignored = _config_flags_set(args)
        if ignored:
            logger.warning(f"Ignoring {', '.join(ignored)}: the environment is rebuilt from the config in {source.meta_path}")
    else:
        config = _config_from_args(args)
        logged = None
    env = build_environment(config)
    if logged is None:
        logged = sample_logged_data(env, config, args.size)
    if args.on_policy_data:
        on_policy = DatasetReader.from_file(args.on_policy_data).read()
    else:
        on_policy = on_policy_rollout(env, config, args.size)

    table = bootstrap_cdf(
        on_policy,
        logged,
        _csv_list(args.estimators),
        n=args.n,
        replications=args.reps,
        target=TargetPolicy(env, config),
        logging_policy=LoggingPolicy(env, config),
        env=env,
        seed=config.seed,
        delta=args.delta,
    )
    Console().display_cdf(table)
    if args.out:
        try:
            table.to_frame().to_csv(args.out, index=False, float_format="%.17g", lineterminator="\n")
        except OSError as e:
            raise OSError(f"Could not write CDF table to {args.out}: {e}") from e
    return 0


def run_sample(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    env = build_environment(config)
    data = on_policy_rollout(env, config, args.n) if args.on_policy else sample_logged_data(env, config, args.n)
    meta = write_dataset_csv(data, args.out, config=config.to_dict())
    Console().display_rows("SAMPLED DATA", {"records": len(data), "csv": args.out, "metadata": meta})
    return 0


if __name__ == "__main__":
    sys.exit(main())
