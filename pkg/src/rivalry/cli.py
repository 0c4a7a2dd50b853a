"""Command-line front end: ``rivalry {simulate,sweep,levelt,classify}``.

Exit codes: 0 success, 1 an expected Levelt verdict was contradicted,
2 usage or configuration error, 3 numerical failure, 4 inconclusive verdict.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .analysis import AnalysisConfig, AnalysisError, analyze, analyze_arrays
from .experiments import (
    SweepSpec,
    check_expectations,
    find_regime_bands,
    grid_range,
    run_levelt_suite,
    run_sweep,
)
from .integrator import NumericalBlowupError, SimConfig, Trajectory, default_sim_config, simulate
from .models import ModelError, ModelInstance, Stimulus, default_params

EXIT_OK = 0
EXIT_CONTRADICTED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_INCONCLUSIVE = 4

# equal input inside each model's widest rivalry band
DEFAULT_STIMULUS = {
    "wilson": 20.0,
    "laing-chow": 0.3,
    "lc-adaptation": 0.7,
    "lc-depression": 0.8,
    "kalarickal": 0.8,
}

AXIS_NAMES = {"equal": "equal_stimulus", "cross-inhibition": "cross_inhibition",
              "asymmetric": "asymmetric_s1"}


class UsageError(Exception):
    pass


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected s1,s2 but got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric stimulus {text!r}") from None


def _param(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected k=v but got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric value in {text!r}") from None


def parse_grid(text: str) -> tuple[float, ...]:
    """``lo:hi:step`` or a comma-separated list of values."""
    if ":" in text:
        try:
            lo, hi, step = (float(v) for v in text.split(":"))
        except ValueError:
            raise UsageError(f"grid must be lo:hi:step, got {text!r}") from None
        if step <= 0 or hi < lo:
            raise UsageError(f"empty grid {text!r}")
        return grid_range(lo, hi, step)
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"non-numeric grid {text!r}") from None
    if not values:
        raise UsageError("empty grid")
    return values


def _jobs_default() -> int:
    try:
        return max(1, int(os.environ.get("RIVALRY_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rivalry", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="JSON file of option values; flags win")
        p.add_argument("--model", required=False, help="wilson, laing-chow, lc-adaptation, "
                                                      "lc-depression or kalarickal")
        p.add_argument("--param", type=_param, action="append", metavar="K=V",
                       help="override a model parameter (repeatable)")
        p.add_argument("--seed", type=int)

    def sim_flags(p):
        p.add_argument("--dt", type=float)
        p.add_argument("--dur", type=float, help="simulated time in ms")
        p.add_argument("--record-every", type=int)
        p.add_argument("--scheme", choices=("rk4", "euler"))
        p.add_argument("--initial", help="initial-state preset or comma-separated vector")

    def analysis_flags(p):
        p.add_argument("--t-transient", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--epsilon-fusion", type=float)
        p.add_argument("--min-switches", type=int)

    p = sub.add_parser("simulate", help="integrate one model and write its trajectory")
    common(p)
    sim_flags(p)
    analysis_flags(p)
    p.add_argument("--stim", type=_pair, help="s1,s2")
    p.add_argument("--out", type=Path, help="trajectory CSV path (default trajectory.csv)")

    p = sub.add_parser("sweep", help="run a one-dimensional parameter sweep")
    common(p)
    sim_flags(p)
    analysis_flags(p)
    p.add_argument("--axis", choices=tuple(AXIS_NAMES))
    p.add_argument("--grid", help="lo:hi:step or v1,v2,...")
    p.add_argument("--replicates", type=int)
    p.add_argument("--s2", type=float, help="eye-2 input for asymmetric sweeps")
    p.add_argument("--stimulus", type=float, help="equal input for cross-inhibition sweeps")
    p.add_argument("--cross-param", help="swept coupling parameter (default per model)")
    p.add_argument("--refine", action="store_true", help="bisect regime-band edges")
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", type=Path, help="output prefix; writes PREFIX.csv and PREFIX.json")

    p = sub.add_parser("levelt", help="evaluate the Levelt propositions for one model")
    common(p)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", type=Path, help="LeveltReport JSON path")

    p = sub.add_parser("classify", help="analyse a trajectory CSV")
    p.add_argument("--config", type=Path)
    p.add_argument("--in", dest="input", type=Path)
    p.add_argument("--model")
    analysis_flags(p)
    p.add_argument("--intervals", action="store_true", help="include the interval list")
    return parser


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Fill options not given on the command line from ``--config``."""
    if args.config is None:
        return args
    try:
        data = json.loads(args.config.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    for raw, value in data.items():
        key = raw.replace("-", "_")
        if key == "in":
            key = "input"
        if not hasattr(args, key):
            raise UsageError(f"unknown config key {raw!r}")
        if key == "param":
            items = value.items() if isinstance(value, dict) else (_param(v) for v in value)
            cli = dict(args.param or [])
            merged = {k: float(v) for k, v in items}
            merged.update(cli)
            args.param = list(merged.items())
        elif key == "stim" and getattr(args, key) is None:
            args.stim = _pair(value) if isinstance(value, str) else tuple(float(v) for v in value)
        elif getattr(args, key) in (None, False):
            if key in ("out", "input", "config"):
                value = Path(value)
            setattr(args, key, value)
    return args


def _model(args) -> ModelInstance:
    if not args.model:
        raise UsageError("--model is required")
    model = default_params(args.model)
    if args.param:
        model = model.with_params(**dict(args.param))
    return model


def _sim(args, model: ModelInstance) -> SimConfig:
    over: dict[str, Any] = {}
    if args.dt is not None:
        over["dt"] = args.dt
    if args.dur is not None:
        over["duration"] = args.dur
    if args.record_every is not None:
        over["record_every"] = args.record_every
    if args.scheme is not None:
        over["scheme"] = args.scheme
    if args.seed is not None:
        over["seed"] = args.seed
    if args.initial is not None:
        init = args.initial
        if isinstance(init, str) and "," in init:
            init = tuple(float(v) for v in init.split(","))
        over["initial_state"] = init
    return default_sim_config(model, **over)


def _analysis(args) -> AnalysisConfig:
    over: dict[str, Any] = {}
    if args.t_transient is not None:
        over["t_transient"] = args.t_transient
    if args.delta is not None:
        over["delta"] = args.delta
    if args.epsilon_fusion is not None:
        over["epsilon_fusion"] = args.epsilon_fusion
    if args.min_switches is not None:
        over["min_switches_rivalry"] = args.min_switches
    return AnalysisConfig(**over)


def _print_json(obj: Any) -> None:
    print(json.dumps(obj, indent=2))


def cmd_simulate(args) -> int:
    model = _model(args)
    config = _sim(args, model)
    stim = Stimulus(*args.stim) if args.stim else Stimulus.equal(DEFAULT_STIMULUS[model.kind])
    cfg = _analysis(args)
    traj = simulate(model, stim, config)
    out = args.out or Path("trajectory.csv")
    traj.write(out)
    _print_json(analyze(traj, cfg).summary())
    return EXIT_OK


def cmd_sweep(args) -> int:
    model = _model(args)
    if args.axis is None:
        raise UsageError("--axis is required")
    axis = AXIS_NAMES[args.axis]
    if args.grid is None:
        raise UsageError("--grid is required")
    grid = parse_grid(str(args.grid))
    fixed: dict[str, Any] = {}
    if axis == "asymmetric_s1":
        if args.s2 is None:
            raise UsageError("--s2 is required for asymmetric sweeps")
        fixed["s2"] = args.s2
    if axis == "cross_inhibition":
        fixed["stimulus"] = args.stimulus if args.stimulus is not None else DEFAULT_STIMULUS[model.kind]
        if args.cross_param:
            fixed["param"] = args.cross_param
    spec = SweepSpec(model, axis, grid, fixed=fixed, replicates=args.replicates or 1,
                     sim=_sim(args, model), analysis=_analysis(args))
    result = run_sweep(spec, jobs=args.jobs or _jobs_default())
    bands = find_regime_bands(result, refine=args.refine)
    prefix = args.out or Path(f"sweep_{model.kind}_{axis}")
    Path(f"{prefix}.csv").write_text(result.to_csv())
    doc = result.to_dict()
    doc["bands"] = [{"regime": b.regime.value, "lo": b.lo, "hi": b.hi,
                     "lower_edge": b.lower_edge, "upper_edge": b.upper_edge} for b in bands]
    Path(f"{prefix}.json").write_text(json.dumps(doc, indent=2) + "\n")
    for b in bands:
        print(f"{b.regime.value:14s} {b.lo:g} .. {b.hi:g}  ({b.n_rows} rows)")
    failed = [r.value for r in result.rows if r.error]
    if failed:
        print(f"simulation failed at {len(failed)} grid value(s): {failed}", file=sys.stderr)
    return EXIT_OK


def cmd_levelt(args) -> int:
    model = _model(args)
    report = run_levelt_suite(model, seed=args.seed or 0, jobs=args.jobs or _jobs_default(),
                              progress=lambda msg: print(msg, file=sys.stderr))
    if args.out:
        args.out.write_text(report.to_json() + "\n")
    missed, inconclusive = check_expectations(report)
    doc = report.to_dict(sweeps=False)
    doc["expectations"] = {"missed": missed, "inconclusive": inconclusive}
    _print_json(doc)
    if inconclusive:
        for key in inconclusive:
            prop = key.partition(".")[0]
            note = report.verdicts[prop].note if prop in report.verdicts else "not evaluated"
            print(f"inconclusive: {key}: {note}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    if missed:
        print(f"expected verdicts not reached: {', '.join(missed)}", file=sys.stderr)
        return EXIT_CONTRADICTED
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.input is None:
        raise UsageError("--in is required")
    cfg = _analysis(args)
    model = default_params(args.model) if args.model else None
    try:
        traj = Trajectory.read_csv(args.input, model=model)
    except ValueError as exc:
        if "cannot infer model" not in str(exc):
            raise UsageError(str(exc)) from None
        report = _classify_generic(args.input, cfg)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    else:
        report = analyze(traj, cfg)
    _print_json(report.to_dict() if args.intervals else report.summary())
    return EXIT_OK


def _classify_generic(path: Path, cfg: AnalysisConfig):
    """Analyse a ``t,a1,a2`` file that belongs to no model, with activity scale 1."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 3:
        raise UsageError(f"{path}:1: expected a model header or three columns t,a1,a2")
    t = data[:, 0]
    duration = float(t[-1] + (t[1] - t[0]) - t[0]) if len(t) > 1 else 1.0
    return analyze_arrays(t, data[:, 1], data[:, 2], cfg.resolve(1.0, duration))


COMMANDS = {"simulate": cmd_simulate, "sweep": cmd_sweep, "levelt": cmd_levelt,
            "classify": cmd_classify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(args)
        return COMMANDS[args.command](args)
    except (UsageError, ModelError, AnalysisError, ValueError) as exc:
        print(f"rivalry {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalBlowupError as exc:
        print(f"rivalry {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
