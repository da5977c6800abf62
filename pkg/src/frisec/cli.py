"""Command-line entry point.

Thin client over the harness: preset sweeps (fig2..fig5), config-file runs,
a small-instance selftest against the exhaustive oracle, and `serve` to
expose the same functionality over HTTP.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from frisec import harness
from frisec.channel import FadingParams, PathLossModel, SystemGeometry, dbm_to_watts, realize_channels
from frisec.numerics import RngStream
from frisec.schemes import exhaustive_joint_optimum, run_ao_ceo


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--trials", type=int, default=None, help="trials per sweep point")
    parser.add_argument("--seed", type=int, default=None, help="base seed (default: FRIS_SEED env or 1)")
    parser.add_argument("--out", type=str, default=None, help="output CSV path")
    parser.add_argument("--threads", type=int, default=1, help="worker processes")
    parser.add_argument("--schemes", type=str, default=None,
                        help="comma-separated scheme ids (default: all)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frisec",
        description="Secrecy-rate experiments for fluid reflecting surfaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in harness.PRESETS:
        p = sub.add_parser(name, help=f"preset sweep {name}")
        _add_common_flags(p)
    run_p = sub.add_parser("run", help="run a sweep described by a config file")
    run_p.add_argument("--config", type=str, required=True, help="key = value config file")
    _add_common_flags(run_p)
    sub.add_parser("selftest", help="verify the optimizer against the exhaustive small-instance oracle")
    serve_p = sub.add_parser("serve", help="start the HTTP service")
    serve_p.add_argument("--host", type=str, default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8000)
    return parser


def _parse_schemes(raw: str | None):
    if raw is None:
        return None
    return tuple(s.strip() for s in raw.split(",") if s.strip())


def _execute_sweep(config: harness.ExperimentConfig, out_path: str | None) -> int:
    result = harness.run_sweep(config)
    print(harness.format_summary_table(result.summaries, result.errors))
    path = out_path or config.out_path
    if path:
        harness.write_csv(result.records, path, config.sweep_variable)
        print(f"wrote {len(result.records)} records to {path}")
    return 0


def run_selftest(instances: int = 100, verbose: bool = True) -> int:
    """AO-CEO vs the exhaustive joint optimum on tiny instances.

    Passes when at least 90% of instances land within 2% relative of the
    optimum objective ratio and none exceed it.
    """
    geom = SystemGeometry(
        ap_position=(0.0, 0.0, 10.0), bob_position=(50.0, 0.0, 1.5),
        eve_position=(55.0, 5.0, 1.5), fris_center=(45.0, 10.0, 5.0),
        num_locations=6)
    pathloss = PathLossModel()
    fading = FadingParams()
    power = dbm_to_watts(20.0)
    noise = fading.noise_power
    cfg = harness.ExperimentConfig(m=2, n=6, n_hat=2, b=1)
    ao = cfg.ao_params()

    within = 0
    exceeded = 0
    for k in range(instances):
        trial = RngStream(314159).child(k)
        channels = realize_channels(geom, pathloss, fading, 2, trial.child(0))
        best_ratio, _, _ = exhaustive_joint_optimum(channels, power, noise, 2, 1)
        ao_run = replace(ao, ceo=replace(ao.ceo, rng=trial.child(10)))
        res = run_ao_ceo(channels, power, noise, 2, 1, ao_run)
        if res.objective_ratio > best_ratio * (1.0 + 1e-9):
            exceeded += 1
        if res.objective_ratio >= best_ratio * 0.98:
            within += 1
    ok = within >= int(np.ceil(0.9 * instances)) and exceeded == 0
    if verbose:
        print(f"selftest: {within}/{instances} within 2% of the exhaustive optimum, "
              f"{exceeded} exceeded it")
        print("selftest PASS" if ok else "selftest FAIL")
    return 0 if ok else 1


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    try:
        if args.command in harness.PRESETS:
            config = harness.preset_config(
                args.command,
                trials=args.trials,
                seed=args.seed,
                schemes=_parse_schemes(args.schemes),
                threads=args.threads,
            )
            return _execute_sweep(config, args.out)
        if args.command == "run":
            if not os.path.isfile(args.config):
                print(f"error: config file not found: {args.config}", file=sys.stderr)
                return 1
            config = harness.load_config_file(args.config)
            overrides = {}
            if args.trials is not None:
                overrides["trials"] = args.trials
            if args.seed is not None:
                overrides["base_seed"] = args.seed
            if args.threads != 1:
                overrides["threads"] = args.threads
            schemes = _parse_schemes(args.schemes)
            if schemes:
                overrides["schemes"] = schemes
            if overrides:
                config = harness.config_from_mapping(overrides, base=config)
            return _execute_sweep(config, args.out)
        if args.command == "selftest":
            return run_selftest()
        if args.command == "serve":
            import uvicorn

            from frisec.service.app import create_app

            uvicorn.run(create_app(), host=args.host, port=args.port)
            return 0
        raise AssertionError("unreachable")
    except Exception as exc:  # surface a diagnostic, not a traceback
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
