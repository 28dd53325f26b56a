"""Command-line entry points.

    abeltv run --config cfg.json
    abeltv verify-bounds [--trials N] [--seed S]
    abeltv phantom --name nested-annuli --out u0.csv [--n 128]

Exit code 0 iff every run succeeds / every bound check passes. Output is
CSV/JSON only; plotting belongs to downstream tools.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import ExperimentConfig, run_experiment, verify_bounds
from .grids import make_grids
from .phantoms import BUILTIN_PHANTOM_NAMES, builtin_phantom, rasterize_phantom

__all__ = ["main"]


def _cmd_run(args) -> int:
    cfg = ExperimentConfig.from_json_file(args.config)
    outcomes = run_experiment(cfg)
    for out, run in zip(outcomes, cfg.runs):
        if out.status == "ok":
            r = out.report
            print(
                f"run {out.index}: sigma2_frac={run.variance_fraction:g} "
                f"err_l2_uh={r.err_l2_uh:.6f} c_star={r.c_star:.4f} status=ok"
            )
        else:
            print(f"run {out.index}: sigma2_frac={run.variance_fraction:g} status=failed")
    print(f"results written to {cfg.output_dir / 'results.csv'}")
    return 0 if all(o.status == "ok" for o in outcomes) else 1


def _cmd_verify_bounds(args) -> int:
    summary = verify_bounds(seed=args.seed, trials=args.trials)
    print(f"bound suites: {summary.trials} trials, seed {summary.seed}")
    for line in summary.format_lines():
        print(line)
    print("all bounds hold" if summary.all_passed else "BOUND VIOLATION (implementation bug)")
    return 0 if summary.all_passed else 1


def _cmd_phantom(args) -> int:
    grid, _ = make_grids(args.n)
    u0 = rasterize_phantom(builtin_phantom(args.name), grid)
    u0.to_csv(args.out)
    print(f"wrote {args.name} at n_r={args.n} to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="abeltv",
        description="TV-regularized Abel inversion experiments and bound checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a reconstruction experiment from a JSON config")
    p_run.add_argument("--config", required=True, help="path to the experiment JSON config")
    p_run.set_defaults(func=_cmd_run)

    p_vb = sub.add_parser("verify-bounds", help="run the analytic inequality suites")
    p_vb.add_argument("--trials", type=int, default=1000)
    p_vb.add_argument("--seed", type=int, default=20240)
    p_vb.set_defaults(func=_cmd_verify_bounds)

    p_ph = sub.add_parser("phantom", help="rasterize a built-in phantom to CSV")
    p_ph.add_argument("--name", required=True, choices=list(BUILTIN_PHANTOM_NAMES))
    p_ph.add_argument("--out", required=True)
    p_ph.add_argument("--n", type=int, default=128, help="radial cell count (default 128)")
    p_ph.set_defaults(func=_cmd_phantom)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
