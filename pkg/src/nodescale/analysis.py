"""Comparisons of the calibrated model against classical rules and external data."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from os import PathLike
from typing import Iterable, Mapping

from .classical import classical_factor
from .errors import DataError, MismatchError
from .model import RelativeTrend
from .nodes import BASELINE, NODES, Metric, NodeLike, TechNode, metric as as_metric, node, primary_metric
from .query import factor, percent_reduction

REFERENCE_HEADER = ("source", "metric", "from_nm", "to_nm", "reduction_lo", "reduction_hi")


def error_vs_classical(
    metric: Metric | str,
    at: NodeLike,
    baseline: NodeLike = BASELINE,
    trends: Mapping[Metric, RelativeTrend] | None = None,
) -> float:
    """Percent deviation of the modeled multiplier from the classical one.

    Both models are expressed as multipliers on the baseline value (the
    reciprocal of the scaling factor, the 1/K form of the classical rules) and
    the deviation is taken relative to the classical multiplier.
    """
    m = as_metric(metric)
    model = factor(m, baseline, at, trends)
    classical = classical_factor(m, baseline, at)
    return abs(classical / model - 1.0) * 100.0


def error_series(
    metric: Metric | str,
    baseline: NodeLike = BASELINE,
    trends: Mapping[Metric, RelativeTrend] | None = None,
) -> dict[TechNode, float]:
    """``error_vs_classical`` at every node at or below ``baseline``."""
    base = node(baseline)
    return {n: error_vs_classical(metric, n, base, trends) for n in NODES if n.gen_index >= base.gen_index}


def compound_rate(rate: float, generations: int | float) -> float:
    """Multiplier after ``generations`` steps at a fixed per-generation ``rate``.

    >>> round(1 / compound_rate(0.49, 8))
    301
    """
    return rate**generations


@dataclass(frozen=True)
class ReferenceEntry:
    source: str
    metric: Metric
    from_node: TechNode
    to_node: TechNode
    reduction_lo: float
    reduction_hi: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "metric", primary_metric(self.metric))
        object.__setattr__(self, "from_node", node(self.from_node))
        object.__setattr__(self, "to_node", node(self.to_node))
        lo, hi = float(self.reduction_lo), float(self.reduction_hi)
        if lo > hi:
            raise DataError(f"{self.source} {self.metric.value}: reduction range [{lo}, {hi}] is reversed")
        if not (-100.0 < lo and hi < 100.0):
            raise DataError(f"{self.source} {self.metric.value}: reductions must lie in (-100, 100)")
        object.__setattr__(self, "reduction_lo", lo)
        object.__setattr__(self, "reduction_hi", hi)

    @property
    def is_range(self) -> bool:
        return self.reduction_lo != self.reduction_hi


@dataclass(frozen=True)
class ErrorReport:
    source: str
    metric: Metric
    from_node: TechNode
    to_node: TechNode
    model_value: float
    reference_lo: float
    reference_hi: float
    error_pct: float

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "metric": self.metric.value,
            "from_nm": self.from_node.feature_nm,
            "to_nm": self.to_node.feature_nm,
            "model_reduction": self.model_value,
            "reference_lo": self.reference_lo,
            "reference_hi": self.reference_hi,
            "error_points": self.error_pct,
        }


def range_distance(value: float, lo: float, hi: float) -> float:
    """Distance from ``value`` to the closed interval [lo, hi] (0 inside)."""
    if value < lo:
        return lo - value
    if value > hi:
        return value - hi
    return 0.0


def compare_reference(
    entries: Iterable[ReferenceEntry],
    from_node: NodeLike,
    to_node: NodeLike,
    trends: Mapping[Metric, RelativeTrend] | None = None,
) -> list[ErrorReport]:
    """Model percent reductions for a node pair against reference rows.

    Errors are absolute percentage-point distances; for a range reference the
    distance to the nearest endpoint, zero inside the range.  Rows for other
    node pairs are skipped.
    """
    entries = list(entries)
    if not entries:
        raise DataError("no reference entries given")
    a, b = node(from_node), node(to_node)
    matching = [e for e in entries if e.from_node == a and e.to_node == b]
    if not matching:
        raise MismatchError(f"no reference entries for {a} -> {b}")
    out = []
    for e in matching:
        model = percent_reduction(factor(e.metric, a, b, trends))
        err = range_distance(model, e.reduction_lo, e.reduction_hi)
        out.append(ErrorReport(e.source, e.metric, a, b, model, e.reduction_lo, e.reduction_hi, err))
    return out


def parse_reference_csv(text: str) -> tuple[ReferenceEntry, ...]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != REFERENCE_HEADER:
        raise DataError(f"reference header must be {','.join(REFERENCE_HEADER)}, got {reader.fieldnames}")
    out = []
    for row in reader:
        try:
            lo, hi = float(row["reduction_lo"]), float(row["reduction_hi"])
        except ValueError:
            raise DataError(f"non-numeric reduction in {row}") from None
        out.append(ReferenceEntry(row["source"], row["metric"], row["from_nm"], row["to_nm"], lo, hi))
    return tuple(out)


def read_reference_csv(path: str | PathLike) -> tuple[ReferenceEntry, ...]:
    with open(path, encoding="utf-8") as fh:
        return parse_reference_csv(fh.read())


def shipped_reference() -> tuple[ReferenceEntry, ...]:
    text = resources.files("nodescale.data").joinpath("reference_10_7.csv").read_text(encoding="utf-8")
    return parse_reference_csv(text)


def area_factor_series(
    target: NodeLike,
    trends: Mapping[Metric, RelativeTrend] | None = None,
) -> dict[TechNode, float]:
    """Area factors from every larger node down to ``target``."""
    t = node(target)
    return {n: factor(Metric.AREA, n, t, trends) for n in NODES if n.gen_index <= t.gen_index}
