"""Log-domain polynomial fitting of digitized scaling-trend points.

Points are fitted as ``log10(relative_value) = c0 + c1*g + c2*g**2`` where ``g``
is the generation index of the node.  The coefficients come from the normal
equations of the ordinary least-squares problem and goodness of fit is the
coefficient of determination computed on the log values.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DataError,
    DegenerateDesignError,
    InsufficientPointsError,
    MismatchError,
    MissingBaselineError,
    NonpositiveValueError,
    RejectedModelError,
)
from .model import Provenance, RelativeTrend
from .nodes import NODES, Metric, NodeLike, TechNode, node, primary_metric

R2_THRESHOLD = 0.99
POINTS_HEADER = ("node_nm", "metric", "relative_value", "source", "baseline_nm")


@dataclass(frozen=True)
class DigitizedPoint:
    node_nm: float
    metric: Metric
    relative_value: float
    source: str = ""
    baseline_nm: float = 130.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "node_nm", node(self.node_nm).feature_nm)
        object.__setattr__(self, "baseline_nm", node(self.baseline_nm).feature_nm)
        object.__setattr__(self, "metric", primary_metric(self.metric))
        v = float(self.relative_value)
        if not (v > 0 and math.isfinite(v)):
            raise NonpositiveValueError(f"relative value must be positive and finite, got {self.relative_value!r}")
        object.__setattr__(self, "relative_value", v)

    @property
    def node(self) -> TechNode:
        return node(self.node_nm)

    @property
    def gen_index(self) -> float:
        return self.node.gen_index


@dataclass(frozen=True)
class FitModel:
    """A fitted log-domain polynomial for one metric.

    ``coefficients[k]`` multiplies ``g**k``.  ``fitted_range`` holds the lowest
    and highest generation index among the fitted points.
    """

    metric: Metric
    coefficients: tuple[float, ...]
    r_squared: float
    n_points: int
    fitted_range: tuple[float, float]
    baseline_nm: float = 130.0
    exact_fit: bool = False
    source: str = ""

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def accepted(self) -> bool:
        return self.r_squared >= R2_THRESHOLD

    def log_value(self, g: float | np.ndarray) -> float | np.ndarray:
        return np.polynomial.polynomial.polyval(g, self.coefficients)

    def extrapolates(self, at: NodeLike) -> bool:
        g = node(at).gen_index
        lo, hi = self.fitted_range
        return g < lo or g > hi

    def to_dict(self) -> dict:
        lo, hi = self.fitted_range
        out = {"metric": self.metric.value}
        out.update({f"c{k}": c for k, c in enumerate(self.coefficients)})
        out.update(
            r_squared=self.r_squared,
            n_points=self.n_points,
            fitted_range=[_nm_at(lo), _nm_at(hi)],
            degree=self.degree,
            baseline_nm=self.baseline_nm,
            accepted=self.accepted,
            exact_fit=self.exact_fit,
        )
        if self.source:
            out["source"] = self.source
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def _nm_at(g: float) -> float:
    for n in NODES:
        if n.gen_index == g:
            return n.feature_nm
    raise DataError(f"no node at generation index {g}")


def _validate(points: Sequence[DigitizedPoint]) -> Metric:
    if not points:
        raise InsufficientPointsError("no points to fit")
    metrics = {p.metric for p in points}
    if len(metrics) != 1:
        raise MismatchError(f"points mix metrics: {sorted(m.value for m in metrics)}")
    baselines = {p.baseline_nm for p in points}
    if len(baselines) != 1:
        raise MismatchError(f"points mix baselines {sorted(baselines)}; rebaseline them first")
    return metrics.pop()


def solve_normal_equations(x: np.ndarray, y: np.ndarray, degree: int) -> np.ndarray:
    """Least-squares polynomial coefficients (lowest power first) via ``VᵀV c = Vᵀy``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n_coef = degree + 1
    if x.size < n_coef:
        raise InsufficientPointsError(f"degree-{degree} fit needs at least {n_coef} points, got {x.size}")
    if np.unique(x).size < n_coef:
        raise DegenerateDesignError(
            f"degree-{degree} fit needs {n_coef} distinct generation indices, got {np.unique(x).size}"
        )
    vander = np.vander(x, n_coef, increasing=True)
    gram = vander.T @ vander
    rhs = vander.T @ y
    try:
        coef = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateDesignError(f"singular normal equations: {exc}") from None
    if not np.all(np.isfinite(coef)):
        raise DegenerateDesignError("normal equations produced non-finite coefficients")
    return coef


def r_squared(y: np.ndarray, fitted: np.ndarray) -> float:
    """Coefficient of determination ``1 - SS_res / SS_tot``."""
    y = np.asarray(y, dtype=float)
    resid = y - np.asarray(fitted, dtype=float)
    ss_res = float(resid @ resid)
    centered = y - y.mean()
    ss_tot = float(centered @ centered)
    if ss_tot == 0.0:
        # constant data: perfect if reproduced, otherwise unbounded below
        return 1.0 if ss_res <= 1e-24 else -math.inf
    return 1.0 - ss_res / ss_tot


def fit_polynomial(points: Iterable[DigitizedPoint], degree: int = 2) -> FitModel:
    pts = list(points)
    m = _validate(pts)
    if degree < 0:
        raise ValueError("degree must be non-negative")
    g = np.array([p.gen_index for p in pts])
    y = np.log10([p.relative_value for p in pts])
    coef = solve_normal_equations(g, y, degree)
    exact = np.unique(g).size == degree + 1
    fitted = np.polynomial.polynomial.polyval(g, coef)
    r2 = 1.0 if exact else r_squared(y, fitted)
    sources = sorted({p.source for p in pts if p.source})
    return FitModel(
        metric=m,
        coefficients=tuple(float(c) for c in coef),
        r_squared=r2,
        n_points=len(pts),
        fitted_range=(float(g.min()), float(g.max())),
        baseline_nm=pts[0].baseline_nm,
        exact_fit=bool(exact),
        source="+".join(sources),
    )


def fit_quadratic(points: Iterable[DigitizedPoint]) -> FitModel:
    """Second-order log-domain fit; see :func:`fit_polynomial`."""
    return fit_polynomial(points, degree=2)


def residuals(model: FitModel, points: Iterable[DigitizedPoint]) -> np.ndarray:
    pts = list(points)
    g = np.array([p.gen_index for p in pts])
    return np.log10([p.relative_value for p in pts]) - model.log_value(g)


def evaluate(model: FitModel, at: NodeLike, *, override: bool = False) -> float:
    """Relative value predicted by ``model`` at a node.

    Models below the R² gate are refused unless ``override`` is set.  Use
    :meth:`FitModel.extrapolates` to tell whether the node lies outside the
    fitted range.
    """
    if not model.accepted and not override:
        raise RejectedModelError(
            f"{model.metric.value} model has R^2 = {model.r_squared:.4f} < {R2_THRESHOLD}; pass override=True to use it"
        )
    return float(10.0 ** model.log_value(node(at).gen_index))


def evaluate_trend(model: FitModel, *, override: bool = False) -> RelativeTrend:
    """Evaluate a model at every supported node and normalize to 130 nm."""
    logs = {n: float(model.log_value(n.gen_index)) for n in NODES}
    if not model.accepted and not override:
        evaluate(model, NODES[0])
    base = logs[NODES[0]]
    values = {n: 10.0 ** (v - base) for n, v in logs.items()}
    return RelativeTrend(model.metric, values, {n: Provenance.FITTED for n in NODES})


def rebaseline(
    points: Iterable[DigitizedPoint],
    new_baseline: NodeLike,
    *,
    baseline_value: float | None = None,
) -> tuple[DigitizedPoint, ...]:
    """Re-express points relative to ``new_baseline``.

    Points are grouped by (metric, source) and each group is divided by its own
    datum at the new baseline.  When that datum is missing, ``baseline_value``
    supplies it (typically a fit evaluation, in the group's current units); this
    is only allowed for a single group.
    """
    pts = list(points)
    target = node(new_baseline)
    groups: dict[tuple[Metric, str], list[DigitizedPoint]] = {}
    for p in pts:
        groups.setdefault((p.metric, p.source), []).append(p)
    if baseline_value is not None and len(groups) > 1:
        raise MismatchError("baseline_value applies to a single (metric, source) series")
    divisors: dict[tuple[Metric, str], float] = {}
    for key, group in groups.items():
        at_base = [p for p in group if p.node_nm == target.feature_nm]
        if at_base:
            if len({p.relative_value for p in at_base}) > 1:
                raise DataError(f"conflicting {key[0].value} data at {target} in source {key[1]!r}")
            divisors[key] = at_base[0].relative_value
        elif baseline_value is not None:
            if not baseline_value > 0:
                raise NonpositiveValueError(f"baseline_value must be positive, got {baseline_value}")
            divisors[key] = float(baseline_value)
        else:
            raise MissingBaselineError(f"no {key[0].value} datum at {target} in source {key[1]!r}")
    out = []
    for p in pts:
        d = divisors[(p.metric, p.source)]
        v = 1.0 if p.node_nm == target.feature_nm else p.relative_value / d
        out.append(DigitizedPoint(p.node_nm, p.metric, v, p.source, target.feature_nm))
    return tuple(out)


def average_tables(a: RelativeTrend, b: RelativeTrend) -> RelativeTrend:
    """Per-node geometric mean of two trends of the same metric.

    The geometric mean makes the averaged factor between any two nodes the
    geometric mean of the two sources' factors.
    """
    if a.metric != b.metric:
        raise MismatchError(f"cannot average {a.metric.value} with {b.metric.value}")
    if set(a.nodes) != set(b.nodes):
        raise MismatchError("trends cover different node sets")
    values = {n: math.sqrt(a.values[n] * b.values[n]) for n in a.nodes}
    return RelativeTrend(a.metric, values, {n: Provenance.AVERAGED for n in a.nodes})


def parse_points_csv(text: str) -> tuple[DigitizedPoint, ...]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.DictReader(lines)
    if tuple(h.strip() for h in (reader.fieldnames or ())) != POINTS_HEADER:
        raise DataError(f"digitized-points header must be {','.join(POINTS_HEADER)}, got {reader.fieldnames}")
    out = []
    for lineno, row in enumerate(reader, start=2):
        row = {k.strip(): (v or "").strip() for k, v in row.items()}
        try:
            node_nm, value, base = float(row["node_nm"]), float(row["relative_value"]), float(row["baseline_nm"])
        except ValueError:
            raise DataError(f"line {lineno}: non-numeric field in {row}") from None
        out.append(DigitizedPoint(node_nm, row["metric"], value, row["source"], base))
    return tuple(out)


def read_points_csv(path: str | PathLike) -> tuple[DigitizedPoint, ...]:
    with open(path, encoding="utf-8") as fh:
        return parse_points_csv(fh.read())


def format_points_csv(points: Iterable[DigitizedPoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(POINTS_HEADER)
    for p in points:
        writer.writerow([f"{p.node_nm:g}", p.metric.value, repr(p.relative_value), p.source, f"{p.baseline_nm:g}"])
    return buf.getvalue()


def select(points: Iterable[DigitizedPoint], metric: Metric | str | None = None, source: str | None = None):
    m = None if metric is None else primary_metric(metric)
    return tuple(p for p in points if (m is None or p.metric == m) and (source is None or p.source == source))
