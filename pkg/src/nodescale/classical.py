"""Constant-field (Dennard) scaling rules.

Each rule gives the exponent of ``K = from_nm / to_nm`` such that the classical
factor (old value / new value) is ``K ** exponent``.  Shrinking dimensions by
1/K therefore shows up as a factor of K, and doping, which rises by K, as 1/K.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType

from .nodes import Metric, NodeLike, metric as as_metric, node


@dataclass(frozen=True)
class ClassicalRule:
    metric: Metric
    exponent: int


_EXPONENTS = {
    Metric.DIMENSION: 1,
    Metric.DOPING: -1,
    Metric.VOLTAGE: 1,
    Metric.CURRENT: 1,
    Metric.CAPACITANCE: 1,
    Metric.DELAY: 1,
    Metric.POWER: 2,
    Metric.POWER_DENSITY: 0,
    Metric.AREA: 2,
    Metric.ENERGY: 3,
    Metric.EDP: 4,
    Metric.THROUGHPUT: -1,
    # throughput (1/K) over area (K^2)
    Metric.THROUGHPUT_PER_AREA: -3,
}

RULES = MappingProxyType({m: ClassicalRule(m, e) for m, e in _EXPONENTS.items()})


def k_ratio(from_node: NodeLike, to_node: NodeLike) -> float:
    """Nominal linear shrink K between two nodes."""
    return node(from_node).feature_nm / node(to_node).feature_nm


def classical_factor(metric: Metric | str, from_node: NodeLike, to_node: NodeLike) -> float:
    """Classical scaling factor of ``metric`` from one node to another.

    >>> classical_factor("area", 130, 65)
    4.0
    >>> classical_factor("power_density", 130, 7)
    1.0
    """
    rule = RULES[as_metric(metric)]
    a, b = node(from_node), node(to_node)
    if a == b:
        return 1.0
    return k_ratio(a, b) ** rule.exponent
