"""Command-line front end.

Usage:
    nodescale factor --metric area --from 130 --to 45
    nodescale scale --metric power --from 45 --to 32 --value 100
    nodescale table --baseline 130 --format csv
    nodescale classical --metric energy --from 130 --to 65
    nodescale error --metric delay
    nodescale fit --input points.csv --metric area
    nodescale compare --from 10 --to 7

Exit codes: 0 success, 1 usage error, 2 unsupported node, 3 data or fit error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any, Sequence

from . import __version__
from .analysis import compare_reference, error_series, read_reference_csv, shipped_reference
from .classical import classical_factor
from .errors import DataError, FitError, UnsupportedMetricError, UnsupportedNodeError
from .fitting import evaluate, fit_polynomial, read_points_csv, rebaseline, select
from .model import TABLE_VERSION, shipped_table_text
from .nodes import NODES, PRIMARY_METRICS, metric, node
from .query import Measure, factor, scale_value

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NODE = 2
EXIT_DATA = 3

FORMATS = ("plain", "json", "csv")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise _UsageError(f"{self.prog}: error: {message}")


def _fmt(value: Any, precision: int) -> str:
    if isinstance(value, float):
        return f"{value:.{precision}g}"
    return str(value)


def _render(records: list[dict], fmt: str, precision: int, *, scalar: str | None = None, single: bool = False) -> str:
    """Render records.

    ``single`` results become one JSON object instead of an array; ``scalar``
    names the field that plain output prints on its own for such results.
    """
    if fmt == "json":
        payload: Any = records[0] if single else records
        return json.dumps(payload) + "\n"
    columns = list(records[0]) if records else []
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in records:
            writer.writerow([repr(r[c]) if isinstance(r[c], float) else r[c] for c in columns])
        return buf.getvalue()
    if single and scalar is not None:
        return _fmt(records[0][scalar], precision) + "\n"
    cells = [[_fmt(r[c], precision) for c in columns] for r in records]
    widths = [max(len(c), *(len(row[i]) for row in cells)) if cells else len(c) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _pair(args) -> tuple:
    return node(args.from_nm), node(args.to_nm)


def cmd_factor(args) -> list[dict]:
    m = metric(args.metric)
    a, b = _pair(args)
    return [{"metric": m.value, "from_nm": a.feature_nm, "to_nm": b.feature_nm, "factor": factor(m, a, b)}]


def cmd_scale(args) -> list[dict]:
    m = metric(args.metric)
    a, b = _pair(args)
    if not args.value > 0:
        raise _UsageError("--value must be positive")
    out = scale_value(Measure(args.value, args.unit, m, a), b)
    return [
        {
            "metric": m.value,
            "from_nm": a.feature_nm,
            "to_nm": b.feature_nm,
            "value": args.value,
            "scaled_value": out.value,
            "unit": out.unit,
        }
    ]


def cmd_table(args) -> list[dict]:
    base = node(args.baseline)
    metrics = [metric(s) for s in args.metrics.split(",")] if args.metrics else list(PRIMARY_METRICS)
    rows = []
    for n in NODES:
        row: dict[str, Any] = {"node_nm": n.feature_nm}
        for m in metrics:
            row[m.value] = 1.0 / factor(m, base, n)
        rows.append(row)
    return rows


def cmd_classical(args) -> list[dict]:
    m = metric(args.metric)
    a, b = _pair(args)
    return [{"metric": m.value, "from_nm": a.feature_nm, "to_nm": b.feature_nm, "factor": classical_factor(m, a, b)}]


def cmd_error(args) -> list[dict]:
    base = node(args.baseline)
    metrics = [metric(args.metric)] if args.metric else list(PRIMARY_METRICS)
    series = {m: error_series(m, base) for m in metrics}
    rows = []
    for n in series[metrics[0]]:
        row: dict[str, Any] = {"node_nm": n.feature_nm}
        for m in metrics:
            row[f"{m.value}_error_pct"] = series[m][n]
        rows.append(row)
    return rows


def cmd_fit(args) -> list[dict]:
    m = metric(args.metric)
    points = select(read_points_csv(args.input), m)
    if not points:
        raise DataError(f"{args.input}: no {m.value} points")
    if args.baseline is not None:
        points = rebaseline(points, args.baseline)
    model = fit_polynomial(points, degree=args.degree)
    if not model.accepted:
        print(f"warning: R^2 = {model.r_squared:.4f} is below the 0.99 acceptance gate", file=sys.stderr)
    if model.exact_fit:
        print("warning: exact fit (as many distinct nodes as coefficients); R^2 is not validated", file=sys.stderr)
    record = model.to_dict()
    if args.evaluate:
        values = {}
        for n in NODES:
            if model.extrapolates(n):
                print(f"warning: {n} lies outside the fitted range; value is extrapolated", file=sys.stderr)
            values[f"{n.feature_nm:g}"] = evaluate(model, n, override=args.allow_rejected)
        record["values"] = values
    if args.format == "json":
        return [record]
    flat = {k: v for k, v in record.items() if k not in ("fitted_range", "values")}
    flat["fitted_from_nm"], flat["fitted_to_nm"] = record["fitted_range"]
    for k, v in record.get("values", {}).items():
        flat[f"value_{k}nm"] = v
    return [flat]


def cmd_compare(args) -> list[dict]:
    entries = read_reference_csv(args.reference) if args.reference else shipped_reference()
    a, b = _pair(args)
    return [r.to_dict() for r in compare_reference(entries, a, b)]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS, help="significant digits in plain output")

    parser = _Parser(prog="nodescale", description="CMOS technology-scaling factors from 130 nm to 7 nm.")
    parser.add_argument("--format", choices=FORMATS, default="plain")
    parser.add_argument("--precision", type=int, default=4, help="significant digits in plain output")
    parser.add_argument(
        "--version", action="version", version=f"nodescale {__version__} (trend table version {TABLE_VERSION})"
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    def pair(p):
        p.add_argument("--metric", required=True)
        p.add_argument("--from", dest="from_nm", required=True, help="current node in nm")
        p.add_argument("--to", dest="to_nm", required=True, help="target node in nm")

    p = sub.add_parser("factor", parents=[common], help="scaling factor between two nodes")
    pair(p)
    p.set_defaults(func=cmd_factor, scalar="factor", single=True)

    p = sub.add_parser("scale", parents=[common], help="carry a value to another node")
    pair(p)
    p.add_argument("--value", type=float, required=True)
    p.add_argument("--unit", default="")
    p.set_defaults(func=cmd_scale, scalar="scaled_value", single=True)

    p = sub.add_parser("table", parents=[common], help="relative trends at every node")
    p.add_argument("--metrics", help="comma-separated metrics (default: area,delay,power,energy)")
    p.add_argument("--baseline", default="130", help="node whose values are 1.0")
    p.add_argument("--raw", action="store_true", help="print the packaged calibrated table file verbatim")
    p.set_defaults(func=cmd_table, scalar=None, single=False)

    p = sub.add_parser("classical", parents=[common], help="constant-field scaling factor")
    pair(p)
    p.set_defaults(func=cmd_classical, scalar="factor", single=True)

    p = sub.add_parser("error", parents=[common], help="deviation from classical scaling per node")
    p.add_argument("--metric", help="primary or derived metric (default: all primary metrics)")
    p.add_argument("--baseline", default="130")
    p.set_defaults(func=cmd_error, scalar=None, single=False)

    p = sub.add_parser("fit", parents=[common], help="fit a log-domain polynomial to digitized points")
    p.add_argument("--input", required=True, help="CSV: node_nm,metric,relative_value,source,baseline_nm")
    p.add_argument("--metric", required=True)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--baseline", default=None, help="rebaseline points to this node before fitting")
    p.add_argument("--evaluate", action="store_true", help="also evaluate the fit at every supported node")
    p.add_argument("--allow-rejected", action="store_true", help="evaluate even when R^2 < 0.99")
    p.set_defaults(func=cmd_fit, scalar=None, single=True)

    p = sub.add_parser("compare", parents=[common], help="compare percent reductions with reference data")
    p.add_argument("--reference", help="CSV: source,metric,from_nm,to_nm,reduction_lo,reduction_hi")
    p.add_argument("--from", dest="from_nm", required=True)
    p.add_argument("--to", dest="to_nm", required=True)
    p.set_defaults(func=cmd_compare, scalar=None, single=False)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "raw", False):
            sys.stdout.write(shipped_table_text())
            return EXIT_OK
        if args.precision < 1:
            raise _UsageError("--precision must be at least 1")
        records = args.func(args)
        sys.stdout.write(_render(records, args.format, args.precision, scalar=args.scalar, single=args.single))
        return EXIT_OK
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedNodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NODE
    except UnsupportedMetricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
