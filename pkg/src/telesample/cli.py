"""Command-line front end.

    telesample analyze  --synthetic spec.yaml --out runs/a
    telesample optimize --input well1.csv --time-col time --value-col gas --out runs/b
    telesample battery  --interval-new 5 --interval-ref 1 --life-ref 1440
    telesample report   runs/b/run_report.json --out runs/b/figures

Exit codes: 0 success, 2 input or configuration error, 3 no feasible rate.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import NoFeasibleRate, TelesampleError
from .ingestion import (
    generate,
    load_document,
    parse_csv,
    regularize,
    synthetic_spec_from_document,
)
from .optimization import (
    DEFAULT_FACTORS,
    CostModel,
    battery_life,
    evaluate_table,
    select_best,
    transmission_ratio,
    transmissions_per_hour,
)
from .report import build_run_report, dumps, fmt, write_figures
from .resampling import CompensationConfig

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3

REPORT_NAME = "run_report.json"
DEFAULT_LIFE_REF_HOURS = 1440.0


class StageError(Exception):
    def __init__(self, stage: str, exc: BaseException):
        super().__init__(f"{stage}: {type(exc).__name__}: {exc}")


def _factor_list(text: str) -> list:
    try:
        factors = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"factors must be comma-separated integers, got {text!r}")
    if not factors or any(f < 1 for f in factors):
        raise argparse.ArgumentTypeError(f"factors must be integers >= 1, got {text!r}")
    return factors


def _load_config(args):
    doc = {}
    if args.config:
        try:
            doc = load_document(args.config)
        except TelesampleError as exc:
            raise StageError("config", exc)
    try:
        comp = CompensationConfig(**(doc.get("compensation") or {}))
        cost = dict(doc.get("cost") or {})
        if args.e_target is not None:
            cost["E_target"] = args.e_target
        model = CostModel.from_dict(cost)
    except (TypeError, ValueError) as exc:
        raise StageError("config", exc)
    return comp, model


def _load_signal(args):
    if args.input:
        try:
            raw = parse_csv(Path(args.input), args.time_col, args.value_col)
        except (OSError, TelesampleError) as exc:
            raise StageError("parse_csv", exc)
        try:
            reg = regularize(raw, args.max_gap_factor)
        except (TelesampleError, ValueError) as exc:
            raise StageError("regularize", exc)
        descriptor = {
            "type": "csv",
            "path": str(args.input),
            "time_col": args.time_col,
            "value_col": args.value_col,
            "max_gap_factor": args.max_gap_factor,
            "segments": [[fmt(a), fmt(b)] for a, b in reg.segments],
            "filled": reg.filled,
        }
        return reg.signal, descriptor
    try:
        doc = load_document(args.synthetic)
        spec = synthetic_spec_from_document(doc, args.seed)
        signal = generate(spec)
    except (TelesampleError, TypeError) as exc:
        raise StageError("generate", exc)
    return signal, {"type": "synthetic", "path": str(args.synthetic), "spec": spec.to_dict()}


def _run(args, mode: str) -> int:
    comp, model = _load_config(args)
    signal, descriptor = _load_signal(args)
    try:
        table = evaluate_table(signal, args.factors, comp, model, max_workers=args.workers)
    except (TelesampleError, ValueError) as exc:
        raise StageError("evaluate", exc)
    best = select_best(table, args.factors) if mode == "optimize" else None
    config = {
        "compensation": {
            "hampel_window": comp.hampel_window,
            "hampel_k": comp.hampel_k,
            "boundary": comp.boundary,
        },
        "cost_model": model.to_dict(),
        "factors": sorted(set(args.factors)),
    }
    report = build_run_report(descriptor, config, table, best, model,
                              args.life_ref, signal.interval, mode=mode)
    text = dumps(report)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / REPORT_NAME).write_text(text, encoding="utf-8")
        write_figures(report, out)
        print(f"wrote {out / REPORT_NAME}")
    else:
        sys.stdout.write(text)

    if mode == "optimize":
        if best is None:
            err = NoFeasibleRate(table, model.E_target)
            print(f"error: optimize_rate: NoFeasibleRate: {err}", file=sys.stderr)
            return EXIT_INFEASIBLE
        print(f"best factor {best.factor} (interval {best.interval:g} s)", file=sys.stderr)
    return EXIT_OK


def cmd_analyze(args) -> int:
    return _run(args, "analyze")


def cmd_optimize(args) -> int:
    return _run(args, "optimize")


def cmd_battery(args) -> int:
    _, model = _load_config(args)
    try:
        n_new = transmissions_per_hour(args.interval_new)
        n_ref = transmissions_per_hour(args.interval_ref)
        ratio = transmission_ratio(args.interval_ref, args.interval_new)
        life = battery_life(args.interval_new, args.interval_ref, args.life_ref, model)
    except TelesampleError as exc:
        raise StageError("battery", exc)
    print(f"transmissions/hour at {args.interval_ref:g} s: {n_ref:.9g}")
    print(f"transmissions/hour at {args.interval_new:g} s: {n_new:.9g}")
    print(f"transmission ratio: {ratio:.9g}")
    print(f"projected life: {life:.9g} h ({life / 24:.9g} days)")
    return EXIT_OK


def cmd_report(args) -> int:
    import json

    try:
        report = json.loads(Path(args.report).read_text(encoding="utf-8"))
        out = Path(args.out) if args.out else Path(args.report).parent / "figures"
        paths = write_figures(report, out)
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
        raise StageError("report", exc)
    for p in paths:
        print(p)
    return EXIT_OK


def _add_run_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH", help="CSV file with a header row")
    src.add_argument("--synthetic", metavar="SPECFILE", help="synthetic signal spec (YAML/JSON)")
    p.add_argument("--time-col", default="t")
    p.add_argument("--value-col", default="v")
    p.add_argument("--max-gap-factor", type=float, default=3.0,
                   help="gaps longer than this many intervals split the record")
    p.add_argument("--factors", type=_factor_list, default=list(DEFAULT_FACTORS),
                   help="comma-separated decimation factors (default 1,5,10,15,20)")
    p.add_argument("--e-target", type=float, default=None,
                   help="relative L2 error bound (default 0.02)")
    p.add_argument("--config", metavar="SPECFILE",
                   help="document with 'compensation' and 'cost' sections")
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--seed", type=int, default=None, help="override the synthetic spec seed")
    p.add_argument("--life-ref", type=float, default=DEFAULT_LIFE_REF_HOURS,
                   help="battery life in hours at the input's own interval")
    p.add_argument("--workers", type=int, default=None,
                   help="evaluate factors on this many threads")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="telesample",
        description="Find the lowest sampling rate whose reconstruction stays within tolerance.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="error-vs-rate curves for both pipelines")
    _add_run_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("optimize", help="pick the minimum-cost feasible factor")
    _add_run_args(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("battery", help="battery life projection for a new interval")
    p.add_argument("--interval-new", type=float, required=True, metavar="SECONDS")
    p.add_argument("--interval-ref", type=float, default=1.0, metavar="SECONDS")
    p.add_argument("--life-ref", type=float, default=DEFAULT_LIFE_REF_HOURS, metavar="HOURS")
    p.add_argument("--config", metavar="SPECFILE")
    p.add_argument("--e-target", type=float, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_battery)

    p = sub.add_parser("report", help="write figure CSVs and a summary from a run report")
    p.add_argument("report", metavar="RUN_REPORT")
    p.add_argument("--out", metavar="DIR")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; keep its code
        return int(exc.code or 0)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
