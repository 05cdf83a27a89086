import math

import pytest

from nodescale.calibration import (
    AREA_PRIMARY_SOURCE,
    AREA_SECONDARY_SOURCE,
    Anchor,
    apply_anchors,
    calibrate,
    derive_power_points,
    main,
    parse_anchors_csv,
    run_calibration,
    shipped_anchors,
    shipped_points,
)
from nodescale.errors import DataError, InfeasibleAnchorsError
from nodescale.fitting import DigitizedPoint, select
from nodescale.model import Provenance, RelativeTrend, format_table_csv, scaling_factor, shipped_table_text
from nodescale.nodes import NODES, Metric, node


@pytest.fixture(scope="module")
def run():
    return run_calibration()


def factor(trends, m, a, b):
    return scaling_factor(m, a, b, trends).factor


def test_regenerates_shipped_table(run):
    assert format_table_csv(run.trends) == shipped_table_text()
    assert main(["--check"]) == 0


def test_every_fit_passes_gate(run):
    assert set(run.fits) == {AREA_PRIMARY_SOURCE, AREA_SECONDARY_SOURCE, "holt-gate-delay", "holt-derived-power"}
    for model in run.fits.values():
        assert model.r_squared >= 0.99
        assert model.n_points >= 4


@pytest.mark.parametrize(
    "m, a, b, expected",
    [
        ("area", 130, 45, 8.3),
        ("area", 130, 7, 754.55),
        ("area", 22, 14, 1 / 0.37),
        ("area", 14, 10, 1 / 0.37),
        ("area", 10, 7, 1 / (1 - 0.367)),
        ("delay", 10, 7, 1 / (1 - 0.075)),
        ("power", 45, 32, 1.238),
        ("power", 10, 7, 1 / (1 - 0.30)),
    ],
)
def test_anchor_constraints_met(run, m, a, b, expected):
    assert factor(run.trends, m, a, b) == pytest.approx(expected, rel=5e-3)


def test_anchor_file_matches_published_values():
    got = {(a.metric.value, a.from_node.feature_nm, a.to_node.feature_nm): a.factor for a in shipped_anchors()}
    assert got[("area", 130, 45)] == 8.3
    assert got[("area", 130, 7)] == 754.55
    assert got[("delay", 10, 7)] == pytest.approx(1 / 0.925, rel=1e-15)


def test_energy_is_power_times_delay(run):
    t = run.trends
    for n in NODES:
        assert t[Metric.ENERGY][n] == pytest.approx(t[Metric.POWER][n] * t[Metric.DELAY][n], rel=1e-15)


def test_area_steps_average_sources_where_both_have_data(run):
    a, b = run.fits[AREA_PRIMARY_SOURCE], run.fits[AREA_SECONDARY_SOURCE]
    spliced = run.unanchored[Metric.AREA]
    for p, q in zip(NODES, NODES[1:]):
        fa = 10 ** (a.log_value(p.gen_index) - a.log_value(q.gen_index))
        fb = 10 ** (b.log_value(p.gen_index) - b.log_value(q.gen_index))
        covered = [not f.extrapolates(p) and not f.extrapolates(q) for f in (a, b)]
        if all(covered) or not any(covered):
            expected = math.sqrt(fa * fb)
        else:
            expected = fa if covered[0] else fb
        assert spliced[p] / spliced[q] == pytest.approx(expected, rel=1e-12)


def test_area_overlap_equals_average_tables(run):
    from nodescale.fitting import average_tables, evaluate_trend

    overlap = [n for n in NODES if 45 >= n.feature_nm >= 14]
    ta, tb = (evaluate_trend(run.fits[s]) for s in (AREA_PRIMARY_SOURCE, AREA_SECONDARY_SOURCE))
    ra = RelativeTrend(Metric.AREA, {n: ta[n] / ta[45] for n in overlap})
    rb = RelativeTrend(Metric.AREA, {n: tb[n] / tb[45] for n in overlap})
    avg = average_tables(ra, rb)
    spliced = run.unanchored[Metric.AREA]
    for n in overlap:
        assert spliced[n] / spliced[45] == pytest.approx(avg[n], rel=1e-12)


def test_splice_rejects_mixed_metrics(run):
    from nodescale.calibration import splice_sources

    with pytest.raises(DataError):
        splice_sources([run.fits[AREA_PRIMARY_SOURCE], run.fits["holt-gate-delay"]])
    with pytest.raises(DataError):
        splice_sources([])


def test_all_trends_monotone_and_tagged(run):
    for m, t in run.trends.items():
        assert t.is_monotone_decreasing()
        assert t.provenance[NODES[0]] is Provenance.ANCHOR
    area = run.trends[Metric.AREA]
    assert area.provenance[node(40)] is Provenance.AVERAGED
    assert area.provenance[node(45)] is Provenance.ANCHOR
    assert run.trends[Metric.DELAY].provenance[node(28)] is Provenance.FITTED


def test_half_nodes_lie_between_neighbours(run):
    for t in run.trends.values():
        assert t[45] > t[40] > t[32]
        assert t[32] > t[28] > t[22]
    model = run.fits[AREA_PRIMARY_SOURCE]
    from nodescale.fitting import evaluate

    assert evaluate(model, 45) > evaluate(model, 40) > evaluate(model, 32)


def test_calibrate_is_deterministic():
    assert format_table_csv(calibrate()) == format_table_csv(calibrate())


def test_apply_anchors_leaves_unconstrained_trend_alone():
    t = RelativeTrend(Metric.DELAY, {n: 10 ** (-0.1 * n.gen_index) for n in NODES})
    out, worst = apply_anchors(t, [])
    assert out is t and worst == 0.0


def test_apply_anchors_reports_conflicts():
    t = RelativeTrend(Metric.AREA, {n: 10 ** (-0.3 * n.gen_index) for n in NODES})
    conflicting = [
        Anchor(Metric.AREA, node(130), node(45), 8.0),
        Anchor(Metric.AREA, node(130), node(45), 9.0),
    ]
    with pytest.raises(InfeasibleAnchorsError, match="worst violation"):
        apply_anchors(t, conflicting)


def test_apply_anchors_rejects_non_monotone_result():
    t = RelativeTrend(Metric.AREA, {n: 10 ** (-0.3 * n.gen_index) for n in NODES})
    with pytest.raises(InfeasibleAnchorsError, match="monotone"):
        apply_anchors(t, [Anchor(Metric.AREA, node(45), node(32), 0.5)])


def test_anchor_parser():
    text = "# c\nmetric,from_nm,to_nm,factor\narea,130,45,8.3\n"
    (a,) = parse_anchors_csv(text)
    assert a.factor == 8.3 and a.to_node.feature_nm == 45
    with pytest.raises(DataError):
        parse_anchors_csv("metric,from_nm,to_nm,factor\narea,130,45,-1\n")


def test_power_points_are_energy_over_delay():
    pts = shipped_points()
    power = {p.node_nm: p.relative_value for p in derive_power_points(select(pts, "delay"), select(pts, "energy"))}
    assert power[45] == pytest.approx(0.598 / 0.83, rel=1e-15)
    with pytest.raises(DataError):
        derive_power_points([DigitizedPoint(65, "delay", 1.0)], [DigitizedPoint(45, "energy", 1.0)])
