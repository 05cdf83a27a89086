"""
Constant-field rules against the calibrated trends
==================================================

Classical scaling predicts every metric from the nominal linear shrink K.  The
calibrated trends follow measured silicon instead.  Here both are compared node
by node, relative to 130 nm.
"""

# %%
import numpy as np

from nodescale import NODES, classical_factor, scaling_factor
from nodescale.analysis import compound_rate, error_series
from nodescale.nodes import PRIMARY_METRICS

# %%
# Factors from 130 nm to each node.
print(f"{'node':>6s}" + "".join(f"{m.value:>18s}" for m in PRIMARY_METRICS))
for n in NODES:
    cells = [f"{scaling_factor(m, 130, n).factor:8.3g} /{classical_factor(m, 130, n):8.3g}" for m in PRIMARY_METRICS]
    print(f"{n.feature_nm:6g}" + "".join(f"{c:>18s}" for c in cells))
print("(calibrated / classical)")

# %%
# Deviation from the classical multiplier, in percent.  Area stays closest;
# delay and power fall far behind, and energy compounds both.
errs = np.array([[v for v in error_series(m).values()] for m in PRIMARY_METRICS])
for m, row in zip(PRIMARY_METRICS, errs):
    print(f"{m.value:7s}", " ".join(f"{v:8.1f}" for v in row))

# %%
# A fixed 0.49x area step per generation compounds to about 1/300 over eight
# generations, well short of the calibrated 130 -> 7 nm area factor.
print(f"0.49^8 = 1/{1 / compound_rate(0.49, 8):.0f}")
print(f"calibrated 130 -> 7 nm area factor: {scaling_factor('area', 130, 7).factor:.2f}")
