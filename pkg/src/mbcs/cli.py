"""Command-line front end.

Commands are deterministic given (config, seed): rerunning one writes
byte-identical primary outputs. The output directory precedence is the
``--out`` flag, then the MBCS_OUT_DIR environment variable, then the current
directory.
"""

import argparse
import os
import sys
from dataclasses import replace

from .distribution import full_distribution
from .errors import MbcsError
from .permanent import set_thread_count
from .sampling import empirical_distribution, exact_sample, total_variation
from .serialize import (
    distribution_to_csv,
    instance_from_config,
    load_run_config,
    samples_to_csv,
    save_matrix,
    write_json,
)
from .unitaries import haar_unitary
from .verify import SUITES, run_suite


def _out_dir(args, config=None) -> str:
    path = (
        args.out
        or os.environ.get("MBCS_OUT_DIR")
        or (config.out_dir if config is not None else None)
        or "."
    )
    os.makedirs(path, exist_ok=True)
    return path


def _apply_threads(args) -> None:
    if args.threads:
        set_thread_count(args.threads)


def cmd_gen_unitary(args) -> int:
    if not args.n or args.n < 1:
        print("gen-unitary needs a positive size via --n", file=sys.stderr)
        return 2
    if args.seed is None:
        print("gen-unitary needs --seed", file=sys.stderr)
        return 2
    u = haar_unitary(args.n, args.seed)
    path = os.path.join(_out_dir(args), "unitary.json")
    save_matrix(u, path)
    print(f"wrote {path}")
    return 0


def _build_instance(args):
    config = load_run_config(args.config)
    if args.mode:
        config = replace(config, mode=args.mode)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    return config, instance_from_config(config)


def cmd_probs(args) -> int:
    _apply_threads(args)
    config, inst = _build_instance(args)
    dist = full_distribution(inst, config.mode)
    out = _out_dir(args, config)
    csv_path = os.path.join(out, "distribution.csv")
    distribution_to_csv(dist, csv_path)
    summary = {
        "events": len(dist),
        "total_mass": dist.total_mass,
        "mass_deficit": dist.mass_deficit,
        "bins": inst.grid.size,
        "half_width": inst.grid.half_width,
        "k_min": inst.grid.k_min,
        "k_max": inst.grid.k_max,
        "theta": inst.theta,
        "validity_bound": inst.validity_bound,
        "mode": config.mode,
        "seed": config.seed,
    }
    summary_path = os.path.join(out, "summary.json")
    write_json(summary, summary_path)
    print(f"wrote {csv_path} and {summary_path}")
    return 0


def cmd_sample(args) -> int:
    if not args.n or args.n < 1:
        print("sample needs a positive draw count via --n", file=sys.stderr)
        return 2
    _apply_threads(args)
    config, inst = _build_instance(args)
    dist = full_distribution(inst, config.mode)
    batch = exact_sample(dist, args.n, config.seed)
    out = _out_dir(args, config)
    csv_path = os.path.join(out, "samples.csv")
    samples_to_csv(batch, csv_path)
    empirical = empirical_distribution(batch)
    summary = {
        "draws": args.n,
        "seed": config.seed,
        "mass_deficit": batch.mass_deficit,
        "support_events": len(dist),
        "observed_events": len(empirical),
        "tvd_vs_exact": total_variation(empirical, dist.normalized()),
    }
    summary_path = os.path.join(out, "sample_summary.json")
    write_json(summary, summary_path)
    print(f"wrote {csv_path} and {summary_path}")
    return 0


def cmd_verify(args) -> int:
    if not args.suite:
        print(f"verify needs --suite (one of {sorted(SUITES)})", file=sys.stderr)
        return 2
    _apply_threads(args)
    report = run_suite(args.suite)
    path = os.path.join(_out_dir(args), f"verify_{args.suite}.json")
    write_json(report, path)
    for check in report["checks"]:
        flag = "PASS" if check["passed"] else "FAIL"
        print(f"[{flag}] {args.suite}/{check['name']}: "
              f"{check['statistic']:.3e} vs {check['threshold']:.3e}")
    print(f"wrote {path}")
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbcs",
        description="Time- and polarization-resolved multiphoton sampling toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "gen-unitary": (cmd_gen_unitary, "write a seeded Haar-random unitary (size via --n)"),
        "probs": (cmd_probs, "enumerate the full event distribution for a config"),
        "sample": (cmd_sample, "draw seeded samples from a config's distribution"),
        "verify": (cmd_verify, "run a built-in verification suite"),
    }
    for name, (func, help_text) in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=str, help="path to a run-config JSON document")
        p.add_argument("--seed", type=int, help="64-bit seed (overrides the config seed)")
        p.add_argument("--out", type=str, help="output directory")
        p.add_argument("--n", type=int, help="count: draws for sample, size for gen-unitary")
        p.add_argument("--suite", type=str, choices=sorted(SUITES), help="verification suite")
        p.add_argument(
            "--mode",
            type=str,
            choices=["pol-resolved", "pol-insensitive"],
            help="override the config's detection mode",
        )
        p.add_argument("--threads", type=int, help="worker threads (speed only, never output)")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in ("probs", "sample") and not args.config:
        print(f"{args.command} needs --config", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except MbcsError as err:
        # expected failures (validation, size guards) get a message, not a trace
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
