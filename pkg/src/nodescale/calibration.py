"""Offline construction of the shipped relative-trend table.

The pipeline:

1. Area: the transistor-area series (relative to 65 nm, with a 130 nm reading)
   is rebaselined to 130 nm and fitted.  The logic-area series (relative to
   45 nm) is rebaselined through that fit's 45 nm value and fitted too.  The
   two are combined step by step: each node-to-next-node factor is the
   geometric mean over the fits whose range covers both nodes (all fits when
   none does), so neither source is extrapolated where the other has data.
2. Delay: the gate-delay series is fitted, the fit is extrapolated to 130 nm,
   the points are rebaselined with that value and refitted.
3. Power: points are formed as switching energy / gate delay at the nodes both
   series share, then treated like delay.
4. Anchors: the log trend of each metric is moved onto the published factor
   constraints with the smallest change (a least-norm projection); the
   correction found at the anchored nodes is interpolated linearly in
   generation index to the remaining nodes.
5. Energy is set to power x delay at every node.

Run ``python -m nodescale.calibration --write`` to regenerate the table.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, InfeasibleAnchorsError
from .fitting import (
    DigitizedPoint,
    FitModel,
    evaluate,
    evaluate_trend,
    fit_quadratic,
    parse_points_csv,
    rebaseline,
    select,
)
from .model import TABLE_RESOURCE, Provenance, RelativeTrend, format_table_csv
from .nodes import BASELINE, NODES, Metric, TechNode, node, primary_metric

ANCHOR_TOLERANCE = 0.005
ANCHORS_HEADER = ("metric", "from_nm", "to_nm", "factor")

AREA_PRIMARY_SOURCE = "holt-transistor-area"
AREA_SECONDARY_SOURCE = "bohr-logic-area"
DELAY_SOURCE = "holt-gate-delay"
ENERGY_SOURCE = "holt-switching-energy"
POWER_SOURCE = "holt-derived-power"


@dataclass(frozen=True)
class Anchor:
    metric: Metric
    from_node: TechNode
    to_node: TechNode
    factor: float


@dataclass
class CalibrationRun:
    trends: dict[Metric, RelativeTrend]
    fits: dict[str, FitModel]
    source_trends: dict[str, RelativeTrend]
    unanchored: dict[Metric, RelativeTrend]
    worst_violation: dict[Metric, float] = field(default_factory=dict)


def parse_anchors_csv(text: str) -> tuple[Anchor, ...]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != ANCHORS_HEADER:
        raise DataError(f"anchor header must be {','.join(ANCHORS_HEADER)}, got {reader.fieldnames}")
    out = []
    for row in reader:
        try:
            factor = float(row["factor"])
        except ValueError:
            raise DataError(f"bad anchor factor {row['factor']!r}") from None
        if not factor > 0:
            raise DataError(f"anchor factor must be positive, got {factor}")
        out.append(Anchor(primary_metric(row["metric"]), node(row["from_nm"]), node(row["to_nm"]), factor))
    return tuple(out)


def _data_text(name: str) -> str:
    return resources.files("nodescale.data").joinpath(name).read_text(encoding="utf-8")


def shipped_anchors() -> tuple[Anchor, ...]:
    return parse_anchors_csv(_data_text("anchors.csv"))


def shipped_points() -> tuple[DigitizedPoint, ...]:
    return parse_points_csv(_data_text("digitized_points.csv"))


def apply_anchors(trend: RelativeTrend, anchors: Iterable[Anchor]) -> tuple[RelativeTrend, float]:
    """Move ``trend`` onto the anchor constraints; return it with the worst relative violation."""
    anchors = [a for a in anchors if a.metric == trend.metric]
    if not anchors:
        return trend, 0.0
    nodes = list(NODES)
    idx = {n: i for i, n in enumerate(nodes)}
    x = np.log10([trend.values[n] for n in nodes])

    rows = [np.eye(len(nodes))[idx[BASELINE]]]
    rhs = [0.0]
    for a in anchors:
        r = np.zeros(len(nodes))
        r[idx[a.from_node]] += 1.0
        r[idx[a.to_node]] -= 1.0
        rows.append(r)
        rhs.append(math.log10(a.factor))
    A = np.array(rows)
    b = np.array(rhs)
    x_new = x + A.T @ np.linalg.pinv(A @ A.T) @ (b - A @ x)

    worst = 0.0
    for a in anchors:
        got = 10.0 ** (x_new[idx[a.from_node]] - x_new[idx[a.to_node]])
        worst = max(worst, abs(got / a.factor - 1.0))
    if worst > ANCHOR_TOLERANCE:
        raise InfeasibleAnchorsError(
            f"{trend.metric.value} anchors conflict: worst violation {100 * worst:.3f}% "
            f"exceeds {100 * ANCHOR_TOLERANCE:.1f}%"
        )

    anchored = sorted({BASELINE} | {a.from_node for a in anchors} | {a.to_node for a in anchors}, key=idx.get)
    g = np.array([n.gen_index for n in nodes])
    g_anchor = np.array([n.gen_index for n in anchored])
    delta = x_new - x
    correction = np.interp(g, g_anchor, delta[[idx[n] for n in anchored]])
    logs = x + correction
    logs[idx[BASELINE]] = 0.0

    values = {n: float(10.0 ** logs[i]) for i, n in enumerate(nodes)}
    values[BASELINE] = 1.0
    prov = {n: (Provenance.ANCHOR if n in anchored else trend.provenance.get(n, Provenance.FITTED)) for n in nodes}
    out = RelativeTrend(trend.metric, values, prov)
    if not out.is_monotone_decreasing():
        raise InfeasibleAnchorsError(f"anchored {trend.metric.value} trend is no longer monotone")
    return out, worst


def _fit_to_130(points: tuple[DigitizedPoint, ...]) -> FitModel:
    """Fit a series with no 130 nm datum, rebaselining it through the fit's own extrapolation."""
    first = fit_quadratic(points)
    at_130 = evaluate(first, BASELINE)
    return fit_quadratic(rebaseline(points, BASELINE, baseline_value=at_130))


def derive_power_points(delay: Iterable[DigitizedPoint], energy: Iterable[DigitizedPoint]) -> tuple[DigitizedPoint, ...]:
    """Power readings as energy per switching event divided by gate delay."""
    d = {p.node_nm: p for p in delay}
    e = {p.node_nm: p for p in energy}
    common = [nm for nm in e if nm in d]
    if not common:
        raise DataError("delay and energy series share no nodes")
    if len({d[nm].baseline_nm for nm in common} | {e[nm].baseline_nm for nm in common}) != 1:
        raise DataError("delay and energy series must share a baseline")
    return tuple(
        DigitizedPoint(nm, Metric.POWER, e[nm].relative_value / d[nm].relative_value, POWER_SOURCE, d[nm].baseline_nm)
        for nm in common
    )


def splice_sources(models: Sequence[FitModel]) -> RelativeTrend:
    """Chain per-step factors from several fits of one metric into a trend."""
    if not models:
        raise DataError("no fits to combine")
    m = models[0].metric
    if any(f.metric != m for f in models):
        raise DataError("cannot splice fits of different metrics")
    logs = [0.0]
    prov = {NODES[0]: Provenance.ANCHOR}
    for p, q in zip(NODES, NODES[1:]):
        cover = [f for f in models if not f.extrapolates(p) and not f.extrapolates(q)] or list(models)
        steps = [float(f.log_value(q.gen_index) - f.log_value(p.gen_index)) for f in cover]
        logs.append(logs[-1] + sum(steps) / len(steps))
        prov[q] = Provenance.AVERAGED if len(cover) > 1 else Provenance.FITTED
    values = {n: 10.0**v for n, v in zip(NODES, logs)}
    values[NODES[0]] = 1.0
    return RelativeTrend(m, values, prov)


def run_calibration(
    points: Iterable[DigitizedPoint] | None = None,
    anchors: Iterable[Anchor] | None = None,
) -> CalibrationRun:
    pts = shipped_points() if points is None else tuple(points)
    anchors = shipped_anchors() if anchors is None else tuple(anchors)

    fits: dict[str, FitModel] = {}
    source_trends: dict[str, RelativeTrend] = {}

    area_a = rebaseline(select(pts, Metric.AREA, AREA_PRIMARY_SOURCE), BASELINE)
    fits[AREA_PRIMARY_SOURCE] = fit_quadratic(area_a)
    b_raw = select(pts, Metric.AREA, AREA_SECONDARY_SOURCE)
    b_base = node(b_raw[0].baseline_nm)
    area_b = rebaseline(b_raw, BASELINE, baseline_value=1.0 / evaluate(fits[AREA_PRIMARY_SOURCE], b_base))
    fits[AREA_SECONDARY_SOURCE] = fit_quadratic(area_b)

    delay_pts = select(pts, Metric.DELAY, DELAY_SOURCE)
    fits[DELAY_SOURCE] = _fit_to_130(delay_pts)
    power_pts = derive_power_points(delay_pts, select(pts, Metric.ENERGY, ENERGY_SOURCE))
    fits[POWER_SOURCE] = _fit_to_130(power_pts)

    for name, model in fits.items():
        source_trends[name] = evaluate_trend(model)

    unanchored = {
        Metric.AREA: splice_sources([fits[AREA_PRIMARY_SOURCE], fits[AREA_SECONDARY_SOURCE]]),
        Metric.DELAY: source_trends[DELAY_SOURCE],
        Metric.POWER: source_trends[POWER_SOURCE],
    }
    trends: dict[Metric, RelativeTrend] = {}
    worst: dict[Metric, float] = {}
    for m, t in unanchored.items():
        trends[m], worst[m] = apply_anchors(t, anchors)

    delay, power = trends[Metric.DELAY], trends[Metric.POWER]
    energy_vals = {n: power.values[n] * delay.values[n] for n in NODES}
    energy_prov = {
        n: Provenance.ANCHOR
        if power.provenance[n] is Provenance.ANCHOR and delay.provenance[n] is Provenance.ANCHOR
        else Provenance.FITTED
        for n in NODES
    }
    trends[Metric.ENERGY] = RelativeTrend(Metric.ENERGY, energy_vals, energy_prov)
    return CalibrationRun(trends, fits, source_trends, unanchored, worst)


def calibrate(
    points: Iterable[DigitizedPoint] | None = None,
    anchors: Iterable[Anchor] | None = None,
) -> dict[Metric, RelativeTrend]:
    """Rebuild the calibrated trends from digitized points and anchor constraints."""
    return run_calibration(points, anchors).trends


def shipped_table_path() -> Path:
    return Path(__file__).parent / "data" / TABLE_RESOURCE


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="python -m nodescale.calibration", description=__doc__.splitlines()[0])
    parser.add_argument("--write", action="store_true", help="overwrite the packaged table")
    parser.add_argument("--check", action="store_true", help="exit 1 if the packaged table is stale")
    args = parser.parse_args(argv)

    run = run_calibration()
    text = format_table_csv(run.trends)
    for name, model in run.fits.items():
        print(f"{name:24s} R^2={model.r_squared:.5f} n={model.n_points}", file=sys.stderr)
    if args.check:
        current = shipped_table_path().read_text(encoding="utf-8")
        if current != text:
            print("packaged table differs from a fresh calibration", file=sys.stderr)
            return 1
        return 0
    if args.write:
        shipped_table_path().write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
