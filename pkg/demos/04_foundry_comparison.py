"""
Checking against external 10 nm -> 7 nm data
============================================

Percent reductions from the calibrated table are compared with a foundry's
published scaling data and with a predictive-model estimate.  A range
reference counts as matched anywhere inside the range.
"""

# %%
from nodescale.analysis import area_factor_series, compare_reference, shipped_reference

for r in compare_reference(shipped_reference(), 10, 7):
    ref = f"{r.reference_lo:g}" if r.reference_lo == r.reference_hi else f"{r.reference_lo:g}-{r.reference_hi:g}"
    print(f"{r.source:10s} {r.metric.value:6s} model {r.model_value:5.1f}%  reference {ref:>6s}%  error {r.error_pct:4.1f} pts")

# %%
# Area factors from each larger node down to 14 nm, the series behind a
# starting-node comparison chart.
for n, f in area_factor_series(14).items():
    print(f"{n.feature_nm:5g} nm -> 14 nm: {f:8.2f}")
