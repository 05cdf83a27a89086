"""Calibrated relative trends and the scaling-factor algebra built on them.

A relative trend stores, for one primary metric, the value at every supported
node normalized so that 130 nm is exactly 1.0.  A scaling factor between two
nodes is the ratio ``relative(from) / relative(to)``, so a quantity measured
at the current node is divided by the factor to obtain its value at the target
node.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import DataError
from .nodes import BASELINE, NODES, Metric, NodeLike, TechNode, node, primary_metric

TABLE_VERSION = "1"
TABLE_RESOURCE = "relative_trends.csv"
TABLE_HEADER = ("metric", "node_nm", "relative_value", "provenance")


class Provenance(str, Enum):
    ANCHOR = "anchor"
    FITTED = "fitted"
    AVERAGED = "averaged"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RelativeTrend:
    """Relative values of one primary metric across nodes (130 nm ≡ 1.0)."""

    metric: Metric
    values: Mapping[TechNode, float]
    provenance: Mapping[TechNode, Provenance] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "metric", primary_metric(self.metric))
        values = {node(n): float(v) for n, v in self.values.items()}
        for n, v in values.items():
            if not (v > 0 and math.isfinite(v)):
                raise DataError(f"{self.metric.value} relative value at {n} must be positive, got {v}")
        prov = {node(n): Provenance(p) for n, p in self.provenance.items()}
        object.__setattr__(self, "values", MappingProxyType(_ordered(values)))
        object.__setattr__(self, "provenance", MappingProxyType(_ordered(prov)))

    @property
    def nodes(self) -> tuple[TechNode, ...]:
        return tuple(self.values)

    def __getitem__(self, n: NodeLike) -> float:
        return self.values[node(n)]

    def is_monotone_decreasing(self) -> bool:
        vals = [self.values[n] for n in self.nodes]
        return all(a > b for a, b in zip(vals, vals[1:]))


def _ordered(mapping: dict) -> dict:
    return {n: mapping[n] for n in sorted(mapping, key=lambda t: t.gen_index)}


@dataclass(frozen=True)
class ScalingFactor:
    metric: Metric
    from_node: TechNode
    to_node: TechNode
    factor: float

    def __float__(self) -> float:
        return self.factor

    def apply(self, value: float) -> float:
        """Value at ``to_node`` of a quantity worth ``value`` at ``from_node``."""
        return value / self.factor


def format_table_csv(trends: Mapping[Metric, RelativeTrend] | Iterable[RelativeTrend]) -> str:
    """Serialize trends to the versioned table CSV (byte-stable for equal inputs)."""
    if isinstance(trends, Mapping):
        trends = trends.values()
    buf = io.StringIO()
    buf.write(f"# nodescale calibrated relative-trend table, version {TABLE_VERSION}\n")
    buf.write("# baseline 130 nm = 1.0; regenerate with: python -m nodescale.calibration --write\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_HEADER)
    for trend in sorted(trends, key=lambda t: list(Metric).index(t.metric)):
        for n, v in trend.values.items():
            writer.writerow([trend.metric.value, f"{n.feature_nm:g}", repr(v), trend.provenance.get(n, Provenance.FITTED).value])
    return buf.getvalue()


def parse_table_csv(text: str) -> dict[Metric, RelativeTrend]:
    rows = csv.DictReader(line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#"))
    if tuple(rows.fieldnames or ()) != TABLE_HEADER:
        raise DataError(f"trend table header must be {','.join(TABLE_HEADER)}, got {rows.fieldnames}")
    values: dict[Metric, dict] = {}
    prov: dict[Metric, dict] = {}
    for row in rows:
        m = primary_metric(row["metric"])
        n = node(row["node_nm"])
        try:
            values.setdefault(m, {})[n] = float(row["relative_value"])
        except ValueError:
            raise DataError(f"bad relative_value {row['relative_value']!r}") from None
        prov.setdefault(m, {})[n] = Provenance(row["provenance"])
    trends = {m: RelativeTrend(m, values[m], prov[m]) for m in values}
    for m, t in trends.items():
        if set(t.nodes) != set(NODES):
            raise DataError(f"trend table for {m.value} does not cover every supported node")
        if t.values[BASELINE] != 1.0:
            raise DataError(f"trend table for {m.value} is not baselined to 130 nm")
    return trends


@lru_cache(maxsize=1)
def shipped_table_text() -> str:
    return resources.files("nodescale.data").joinpath(TABLE_RESOURCE).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def shipped_trends() -> Mapping[Metric, RelativeTrend]:
    return MappingProxyType(parse_table_csv(shipped_table_text()))


def relative_value(metric: Metric | str, at: NodeLike, trends: Mapping[Metric, RelativeTrend] | None = None) -> float:
    """Calibrated relative value of a primary metric at a node (130 nm ≡ 1.0).

    >>> round(1 / relative_value("area", 45), 3)
    8.3
    """
    m = primary_metric(metric)
    n = node(at)
    table = shipped_trends() if trends is None else trends
    return table[m].values[n]


def scaling_factor(
    metric: Metric | str,
    from_node: NodeLike,
    to_node: NodeLike,
    trends: Mapping[Metric, RelativeTrend] | None = None,
) -> ScalingFactor:
    """Scaling factor of a primary metric between two nodes.

    The factor is greater than one when moving to a smaller node and its
    reciprocal when moving the other way.

    >>> round(scaling_factor("power", 45, 32).factor, 3)
    1.238
    """
    m = primary_metric(metric)
    a, b = node(from_node), node(to_node)
    if a == b:
        return ScalingFactor(m, a, b, 1.0)
    factor = relative_value(m, a, trends) / relative_value(m, b, trends)
    return ScalingFactor(m, a, b, factor)
