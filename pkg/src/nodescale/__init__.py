"""Technology-scaling factor estimation across CMOS nodes from 130 nm to 7 nm."""

from .classical import classical_factor
from .errors import NodeScaleError, UnsupportedMetricError, UnsupportedNodeError
from .model import TABLE_VERSION, RelativeTrend, ScalingFactor, relative_value, scaling_factor, shipped_trends
from .nodes import NODES, Metric, TechNode, node

__version__ = "0.1.0"

__all__ = [
    "Metric",
    "NODES",
    "NodeScaleError",
    "RelativeTrend",
    "ScalingFactor",
    "TABLE_VERSION",
    "TechNode",
    "UnsupportedMetricError",
    "UnsupportedNodeError",
    "classical_factor",
    "node",
    "relative_value",
    "scaling_factor",
    "shipped_trends",
]
