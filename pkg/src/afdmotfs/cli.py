"""Command line front end: ``analyze``, ``simulate`` and ``attack``."""

import argparse
import json
import os
import sys

from .analytics import robustness_report
from .experiments import (
    ExperimentConfig,
    plot_script,
    run_attack_demo,
    run_experiment,
    write_curves,
)


def _analyze(args):
    report = robustness_report(args.waveform, args.n, args.theta_max, args.d, args.epsilon)
    print(report.to_json() if args.json else report.to_text())


def _load(args):
    cfg = ExperimentConfig.from_json(args.config)
    if args.seed is not None:
        cfg.master_seed = args.seed
    return cfg


def _simulate(args):
    cfg = _load(args)
    curves = run_experiment(cfg, workers=args.workers)
    paths = write_curves(curves, cfg, args.out)
    if args.plot_script:
        with open(os.path.join(args.out, "plot_curves.py"), "w") as fh:
            fh.write(plot_script(paths, log_y=cfg.experiment != "BerVsOtfsK"))
    for curve, path in zip(curves, paths):
        print(f"{curve.label}: {path}")


def _attack(args):
    cfg = _load(args)
    results = run_attack_demo(cfg)
    print(json.dumps({wf: r.to_dict() for wf, r in results.items()}, indent=2))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afdmotfs",
        description="Brute-force eavesdropping robustness of AFDM and OTFS.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="closed-form maximum attempt counts")
    p.add_argument("--waveform", choices=["afdm", "otfs"], required=True)
    p.add_argument("--n", type=int, required=True, help="number of subcarriers")
    p.add_argument("--theta-max", type=float, default=0.3)
    p.add_argument("--d", type=float, default=0.3, help="upper end D of the c1 search range")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_analyze)

    p = sub.add_parser("simulate", help="run a Monte Carlo BER experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=".")
    p.add_argument("--seed", type=int, default=None, help="override master_seed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--plot-script", action="store_true",
                   help="also write plot_curves.py next to the CSV files")
    p.set_defaults(func=_simulate)

    p = sub.add_parser("attack", help="single-shot brute-force attack demo")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_attack)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
