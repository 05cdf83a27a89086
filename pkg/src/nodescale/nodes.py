"""Supported technology nodes and the metric taxonomy."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import UnsupportedMetricError, UnsupportedNodeError

# Full generations take integer indices; the 40 nm and 28 nm half nodes sit at midpoints.
_GEN_INDEX = {
    130: 0.0,
    90: 1.0,
    65: 2.0,
    45: 3.0,
    40: 3.5,
    32: 4.0,
    28: 4.5,
    22: 5.0,
    14: 6.0,
    10: 7.0,
    7: 8.0,
}


@dataclass(frozen=True, order=False)
class TechNode:
    """A supported fabrication node.

    Construct through :func:`node` rather than directly so the feature size
    is validated against the supported set.
    """

    feature_nm: float
    gen_index: float

    def __str__(self) -> str:
        return f"{self.feature_nm:g} nm"


NODES: tuple[TechNode, ...] = tuple(TechNode(float(nm), g) for nm, g in _GEN_INDEX.items())
SUPPORTED_NM: tuple[float, ...] = tuple(n.feature_nm for n in NODES)
BASELINE: TechNode = NODES[0]

_BY_NM = {n.feature_nm: n for n in NODES}

NodeLike = Union[TechNode, int, float, str]


def node(value: NodeLike) -> TechNode:
    """Resolve ``value`` (a TechNode, a number of nm, or a string like "45" / "45nm")."""
    if isinstance(value, TechNode):
        if _BY_NM.get(value.feature_nm) != value:
            raise UnsupportedNodeError(value.feature_nm)
        return value
    raw = value
    if isinstance(value, str):
        text = value.strip().lower().removesuffix("nm").strip()
        try:
            value = float(text)
        except ValueError:
            raise UnsupportedNodeError(raw) from None
    if isinstance(value, bool):
        raise UnsupportedNodeError(raw)
    try:
        key = float(value)
    except (TypeError, ValueError):
        raise UnsupportedNodeError(raw) from None
    try:
        return _BY_NM[key]
    except KeyError:
        raise UnsupportedNodeError(raw) from None


def gen_index(value: NodeLike) -> float:
    return node(value).gen_index


class Metric(str, Enum):
    AREA = "area"
    DELAY = "delay"
    POWER = "power"
    ENERGY = "energy"

    EDP = "edp"
    THROUGHPUT = "throughput"
    POWER_DENSITY = "power_density"
    THROUGHPUT_PER_AREA = "throughput_per_area"

    DIMENSION = "dimension"
    DOPING = "doping"
    VOLTAGE = "voltage"
    CURRENT = "current"
    CAPACITANCE = "capacitance"

    def __str__(self) -> str:
        return self.value

    @property
    def is_primary(self) -> bool:
        return self in PRIMARY_METRICS

    @property
    def is_derived(self) -> bool:
        return self in DERIVED_METRICS

    @property
    def is_classical_only(self) -> bool:
        return self in CLASSICAL_ONLY_METRICS


PRIMARY_METRICS = (Metric.AREA, Metric.DELAY, Metric.POWER, Metric.ENERGY)
DERIVED_METRICS = (Metric.EDP, Metric.THROUGHPUT, Metric.POWER_DENSITY, Metric.THROUGHPUT_PER_AREA)
CLASSICAL_ONLY_METRICS = (
    Metric.DIMENSION,
    Metric.DOPING,
    Metric.VOLTAGE,
    Metric.CURRENT,
    Metric.CAPACITANCE,
)

_ALIASES = {
    "powerdensity": Metric.POWER_DENSITY,
    "power-density": Metric.POWER_DENSITY,
    "throughputperarea": Metric.THROUGHPUT_PER_AREA,
    "throughput-per-area": Metric.THROUGHPUT_PER_AREA,
    "throughput/area": Metric.THROUGHPUT_PER_AREA,
    "energy_delay_product": Metric.EDP,
}


def metric(value: Metric | str) -> Metric:
    """Resolve a metric from an enum member or a case-insensitive name."""
    if isinstance(value, Metric):
        return value
    key = str(value).strip().lower()
    if key in _ALIASES:
        return _ALIASES[key]
    try:
        return Metric(key)
    except ValueError:
        names = ", ".join(m.value for m in Metric)
        raise UnsupportedMetricError(f"unknown metric {value!r}; expected one of: {names}") from None


def primary_metric(value: Metric | str) -> Metric:
    m = metric(value)
    if not m.is_primary:
        raise UnsupportedMetricError(f"{m.value} is not a primary metric (area, delay, power, energy)")
    return m
