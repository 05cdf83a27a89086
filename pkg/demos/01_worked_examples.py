"""
Scaling a design between nodes
==============================

A scaling factor is the ratio of a metric's value at the current node to its
value at the target node, so a measured number is carried over by dividing.
"""

# %%
# Area of a block moved from 130 nm to 45 nm.
from nodescale import scaling_factor
from nodescale.query import Measure, derived_factor, percent_reduction, scale_value

area = scaling_factor("area", 130, 45)
print(f"area factor 130 -> 45 nm: {area.factor:.4g}")

block = Measure(100.0, "um^2", "area", 130)
print("scaled:", round(scale_value(block, 45).value, 2), block.unit)

# %%
# Power of a circuit moved from 45 nm to 32 nm.
power = scaling_factor("power", 45, 32)
print(f"power factor 45 -> 32 nm: {power.factor:.4g}")
print("scaled:", round(power.apply(100.0), 3), "mW")

# %%
# Going to a larger node gives the reciprocal factor.
print(f"area factor 45 -> 130 nm: {scaling_factor('area', 45, 130).factor:.4g}")

# %%
# Derived metrics combine the primary factors.  Throughput is the reciprocal of
# delay, so its factor is below one when a design speeds up.
for name in ("edp", "throughput", "power_density", "throughput_per_area"):
    print(f"{name:20s} 65 -> 22 nm: {derived_factor(name, 65, 22):.4g}")

# %%
# Percent reduction is the improvement expressed as a decrease.
for m in ("area", "delay", "power", "energy"):
    f = scaling_factor(m, 10, 7).factor
    print(f"{m:7s} 10 -> 7 nm: factor {f:.4g}, reduction {percent_reduction(f):.1f}%")
