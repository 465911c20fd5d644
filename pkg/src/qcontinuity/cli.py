"""Command-line entry point.

Exit status: 0 when every verdict holds, 1 when a violation was found,
2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .campaign import CampaignConfig, run_campaign, tightness_sweep
from .catalog import CATALOG, evaluate, parse_params
from .errors import ConfigError, ContinuityError
from .hamiltonians import solve_beta
from .io import load_spectrum
from .reports import VIOLATED, BoundReport, dumps, summarize, table_dumps

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def _grid(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty grid")
    return vals


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def default_config_path():
    return resources.files("qcontinuity") / "data" / "default.json"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None, help="report format (default json)")
    common.add_argument("--seed", type=_u64, default=None, help="campaign seed, overrides the config")
    common.add_argument("--trials", type=_positive, default=None, help="trials per scenario, overrides the config")
    common.add_argument("--threads", type=_positive, default=None, help="worker threads")

    parser = argparse.ArgumentParser(prog="qcontinuity", description="Entropy continuity bounds: evaluation and verification")
    sub = parser.add_subparsers(dest="command", required=True)

    bound = sub.add_parser("bound", help="work with named bounds")
    bsub = bound.add_subparsers(dest="action", required=True)
    ev = bsub.add_parser("eval", parents=[common], help="evaluate one bound")
    ev.add_argument("--name", required=True, help=f"one of: {', '.join(CATALOG)}")
    ev.add_argument("--params", nargs="*", default=[], metavar="K=V", help="numeric parameters, e.g. E=1 eps=0.2")
    ev.add_argument("--spec", default=None, help="spectrum JSON (default: number operator)")
    bsub.add_parser("list", help="list named bounds")

    ver = sub.add_parser("verify", parents=[common], help="run a seeded verification campaign")
    ver.add_argument("--config", default=None, help="campaign JSON (default: packaged default.json)")
    ver.add_argument("--out", default=None, help="write the report here instead of stdout")

    tight = sub.add_parser("tightness", parents=[common], help="extremal-pair tightness sweep")
    tight.add_argument("--spec", required=True, help="spectrum JSON")
    tight.add_argument("--E", type=_grid, required=True, help="comma-separated energies")
    tight.add_argument("--eps", type=_grid, required=True, help="comma-separated distances")
    tight.add_argument("--out", default=None, help="output path (default stdout)")

    gib = sub.add_parser("gibbs", parents=[common], help="solve for the Gibbs state at mean energy E")
    gib.add_argument("--spec", required=True, help="spectrum JSON")
    gib.add_argument("--E", type=float, required=True)
    return parser


def cmd_bound_eval(args) -> int:
    params = parse_params(args.params)
    spec_path = args.spec or params.pop("spec", None)
    spec = load_spectrum(spec_path) if spec_path else None
    value = evaluate(args.name, params, spec)
    inputs = {k: v for k, v in params.items()}
    if isinstance(value, tuple):
        lo, hi = value
        report = BoundReport(args.name, inputs, float(hi), {"lower": float(lo), "upper": float(hi)})
    else:
        report = BoundReport(args.name, inputs, float(value))
    _emit(dumps([report], args.format or "json"), None)
    return EXIT_OK


def cmd_bound_list(args) -> int:
    width = max(map(len, CATALOG))
    for name, (_, required, summary) in CATALOG.items():
        print(f"{name:<{width}}  [{', '.join(required)}]  {summary}")
    return EXIT_OK


def cmd_verify(args) -> int:
    config = CampaignConfig.from_file(args.config or default_config_path())
    if args.seed is not None:
        config.seed = args.seed
    if args.trials is not None:
        config.trials = args.trials
        # the command-line value wins over per-scenario counts
        config.scenarios = {k: {kk: vv for kk, vv in (v or {}).items() if kk != "trials"} for k, v in config.scenarios.items()}
    if args.threads is not None:
        config.threads = args.threads
    fmt = args.format or config.format
    reports = run_campaign(config)
    _emit(dumps(reports, fmt), args.out or config.output)

    counts = summarize(reports)
    n_viol = sum(c.get(VIOLATED, 0) for c in counts.values())
    for name, c in counts.items():
        print(f"{name}: " + ", ".join(f"{k}={v}" for k, v in sorted(c.items())), file=sys.stderr)
    print(f"{len(reports)} reports, {n_viol} violated", file=sys.stderr)
    return EXIT_VIOLATION if n_viol else EXIT_OK


def cmd_tightness(args) -> int:
    spec = load_spectrum(args.spec)
    rows = tightness_sweep(spec, args.E, args.eps)
    _emit(table_dumps(rows, args.format or "csv"), args.out)
    return EXIT_OK


def cmd_gibbs(args) -> int:
    spec = load_spectrum(args.spec)
    sol = solve_beta(spec, args.E)
    out = {
        "E": args.E,
        "beta": sol.beta,
        "F": sol.F_value,
        "truncation": sol.truncation,
        "tail_bound": sol.tail_bound,
        "energy": sol.energy,
    }
    if (args.format or "json") == "json":
        _emit(json.dumps(out, indent=1) + "\n", None)
    else:
        _emit(table_dumps([out], "csv"), None)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    handlers = {
        "verify": cmd_verify,
        "tightness": cmd_tightness,
        "gibbs": cmd_gibbs,
    }
    if args.command == "bound":
        handler = cmd_bound_eval if args.action == "eval" else cmd_bound_list
    else:
        handler = handlers[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ContinuityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
