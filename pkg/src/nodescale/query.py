"""Value scaling between nodes, derived-metric factors and percent reductions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

from .errors import NonpositiveValueError, UnsupportedMetricError
from .model import RelativeTrend, scaling_factor
from .nodes import Metric, NodeLike, TechNode, metric as as_metric, node


@dataclass(frozen=True)
class Measure:
    value: float
    unit: str
    metric: Metric
    node: TechNode

    def __post_init__(self) -> None:
        v = float(self.value)
        if not (v > 0 and math.isfinite(v)):
            raise NonpositiveValueError(f"measure value must be positive, got {self.value!r}")
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "metric", as_metric(self.metric))
        object.__setattr__(self, "node", node(self.node))


def compose_derived(metric: Metric | str, primary: Callable[[Metric], float]) -> float:
    """Combine primary-metric factors into a derived-metric factor.

    ``primary`` maps a primary metric to its factor for the node pair in
    question, so the same rules apply to calibrated and classical factors.
    Throughput is treated as the reciprocal of delay.
    """
    m = as_metric(metric)
    if m is Metric.EDP:
        return primary(Metric.ENERGY) * primary(Metric.DELAY)
    if m is Metric.THROUGHPUT:
        return 1.0 / primary(Metric.DELAY)
    if m is Metric.POWER_DENSITY:
        return primary(Metric.POWER) / primary(Metric.AREA)
    if m is Metric.THROUGHPUT_PER_AREA:
        return 1.0 / (primary(Metric.DELAY) * primary(Metric.AREA))
    raise UnsupportedMetricError(f"{m.value} is not a derived metric")


def derived_factor(
    metric: Metric | str,
    from_node: NodeLike,
    to_node: NodeLike,
    trends: Mapping[Metric, RelativeTrend] | None = None,
) -> float:
    a, b = node(from_node), node(to_node)
    return compose_derived(metric, lambda p: scaling_factor(p, a, b, trends).factor)


def factor(
    metric: Metric | str,
    from_node: NodeLike,
    to_node: NodeLike,
    trends: Mapping[Metric, RelativeTrend] | None = None,
) -> float:
    """Calibrated factor for any primary or derived metric."""
    m = as_metric(metric)
    if m.is_primary:
        return scaling_factor(m, from_node, to_node, trends).factor
    if m.is_derived:
        return derived_factor(m, from_node, to_node, trends)
    raise UnsupportedMetricError(f"{m.value} has only a classical rule; use classical_factor")


def scale_value(
    measure: Measure,
    target: NodeLike,
    trends: Mapping[Metric, RelativeTrend] | None = None,
) -> Measure:
    """Carry a measured quantity to another node by dividing by the scaling factor.

    >>> m = Measure(100.0, "um^2", "area", 130)
    >>> round(scale_value(m, 45).value, 2)
    12.05
    """
    t = node(target)
    f = factor(measure.metric, measure.node, t, trends)
    return Measure(measure.value / f, measure.unit, measure.metric, t)


def percent_reduction(f: float) -> float:
    """Percent decrease implied by a factor: ``(1 - 1/f) * 100``."""
    if not f > 0:
        raise NonpositiveValueError(f"scaling factor must be positive, got {f}")
    return (1.0 - 1.0 / f) * 100.0
