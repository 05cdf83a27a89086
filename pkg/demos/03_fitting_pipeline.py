"""
From digitized points to the shipped table
==========================================

The calibrated table is built offline: digitized trend points are fitted with
quadratics in log10(value) against generation index, the two area sources are
averaged, and the result is pinned to the published anchor factors.
"""

# %%
from nodescale.calibration import run_calibration, shipped_anchors, shipped_points
from nodescale.fitting import evaluate, fit_quadratic, rebaseline, select
from nodescale.model import format_table_csv, shipped_table_text

points = shipped_points()
print(len(points), "digitized points from", len({p.source for p in points}), "series")

# %%
# Fit one series by hand.  The transistor-area readings are relative to 65 nm
# and include a 130 nm reading, so they can be rebaselined directly.
area = rebaseline(select(points, "area", "holt-transistor-area"), 130)
model = fit_quadratic(area)
print("coefficients:", [round(c, 4) for c in model.coefficients], "R^2:", round(model.r_squared, 5))
for nm in (40, 28, 10, 7):
    tag = " (extrapolated)" if model.extrapolates(nm) else ""
    print(f"  {nm:>3d} nm -> {evaluate(model, nm):.4g}{tag}")

# %%
# The full pipeline.  Every fit must clear the R^2 >= 0.99 gate.
run = run_calibration()
for name, fit in run.fits.items():
    print(f"{name:24s} R^2 = {fit.r_squared:.4f}")

# %%
# Anchors win over the fits: compare the unanchored and final area trends.
for n, v in run.unanchored["area"].values.items():
    final = run.trends["area"]
    print(f"{n.feature_nm:5g} nm  fit {1 / v:9.2f}  final {1 / final[n]:9.2f}  [{final.provenance[n]}]")

print(len(shipped_anchors()), "anchor constraints")
print("regenerates shipped table:", format_table_csv(run.trends) == shipped_table_text())
