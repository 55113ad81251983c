"""Command-line entry point: ``hybridom run|list-presets|validate|oracle-check``."""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .errors import HybridomError
from .outputs import write_outputs
from .response import Variant
from .scenarios import PRESET_DESCRIPTIONS, PRESETS, TOLERANCE_PROFILES, load_config, run_scenario
from .validation import VALIDATION_PRESETS, compare_with_oracle

OUT_DIR_ENV = "HYBRIDOM_OUT_DIR"
ORACLE_RTOL = 1e-3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hybridom", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a preset or a config file and write CSV/plot/meta files")
    run.add_argument("scenario", help="preset name or path to a key = value config file")
    run.add_argument("--out-dir", default=os.environ.get(OUT_DIR_ENV, "."),
                     help=f"output directory (default: ${OUT_DIR_ENV} or the current directory)")
    run.add_argument("--variant", choices=[v.value for v in Variant],
                     help="override the scenario's response variant")
    run.add_argument("--workers", type=int, default=None, help="worker processes (default: all cores)")
    run.add_argument("--tolerance-profile", choices=sorted(TOLERANCE_PROFILES), default="default")

    sub.add_parser("list-presets", help="list built-in figure and oracle presets")

    val = sub.add_parser("validate", help="check a config file or preset without running it")
    val.add_argument("config")

    oc = sub.add_parser("oracle-check", help="compare the closed form with direct time integration")
    oc.add_argument("preset", help="validation preset name, or 'all'")
    oc.add_argument("--points", type=int, default=21, help="probe detunings across [0.8, 1.2] omega_m")
    return parser


def _cmd_run(args) -> int:
    scenario = load_config(args.scenario)
    if args.variant:
        scenario = replace(scenario, variant=Variant.parse(args.variant))
    result = run_scenario(scenario, workers=args.workers,
                          tolerances=TOLERANCE_PROFILES[args.tolerance_profile])
    manifest = write_outputs(result, args.out_dir)
    for path in manifest.values():
        print(path)
    if result.failed_points:
        print(f"{result.failed_points} of {len(result.rows)} points failed", file=sys.stderr)
        return 1
    return 0


def _cmd_list(args) -> int:
    width = max(map(len, list(PRESETS) + list(VALIDATION_PRESETS)))
    print("figure presets (run):")
    for name in PRESETS:
        print(f"  {name:<{width}}  {PRESET_DESCRIPTIONS.get(name, '')}")
    print("oracle presets (oracle-check):")
    for name, vp in VALIDATION_PRESETS.items():
        print(f"  {name:<{width}}  {vp.description}")
    return 0


def _cmd_validate(args) -> int:
    scenario = load_config(args.config)
    print(f"{scenario.name}: ok ({scenario.axis.quantity} axis, {scenario.axis.count} points)")
    return 0


def _cmd_oracle(args) -> int:
    import numpy as np

    names = list(VALIDATION_PRESETS) if args.preset == "all" else [args.preset]
    status = 0
    for name in names:
        vp = VALIDATION_PRESETS.get(name)
        deltas = None
        if vp is not None:
            deltas = np.linspace(0.8, 1.2, args.points) * vp.params.omega_m
        cmp = compare_with_oracle(name, deltas)
        worst = float(cmp.rel_error.max())
        ok = worst <= ORACLE_RTOL
        status |= not ok
        print(f"{name}: max relative |c_-| error {worst:.3e} over {cmp.delta.size} points "
              f"({'ok' if ok else 'FAIL'})")
    return status


COMMANDS = {"run": _cmd_run, "list-presets": _cmd_list, "validate": _cmd_validate,
            "oracle-check": _cmd_oracle}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except HybridomError as exc:
        print(f"hybridom: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
