import math

import pytest
from hypothesis import given, strategies as st

from nodescale.errors import DataError, UnsupportedMetricError, UnsupportedNodeError
from nodescale.model import (
    Provenance,
    RelativeTrend,
    format_table_csv,
    parse_table_csv,
    relative_value,
    scaling_factor,
    shipped_table_text,
    shipped_trends,
)
from nodescale.nodes import NODES, PRIMARY_METRICS, Metric

nodes = st.sampled_from(NODES)
primaries = st.sampled_from(PRIMARY_METRICS)


def test_relative_value_examples():
    assert relative_value("area", 130) == 1.0
    assert relative_value(Metric.AREA, 45) == pytest.approx(1 / 8.3, rel=5e-3)
    assert relative_value("area", 7) == pytest.approx(1 / 754.55, rel=5e-3)


def test_relative_value_errors():
    with pytest.raises(UnsupportedNodeError):
        relative_value("area", 50)
    with pytest.raises(UnsupportedMetricError):
        relative_value("edp", 45)


def test_scaling_factor_examples():
    assert scaling_factor("area", 130, 45).factor == pytest.approx(8.3, rel=5e-3)
    assert scaling_factor("power", 45, 32).factor == pytest.approx(1.238, rel=5e-3)
    assert scaling_factor("delay", 65, 65).factor == 1.0


def test_reverse_direction_is_reciprocal():
    forward = scaling_factor("area", 130, 45).factor
    assert scaling_factor("area", 45, 130).factor == pytest.approx(1 / forward, rel=1e-12)
    assert scaling_factor("area", 45, 130).factor == pytest.approx(1 / 8.3, rel=5e-3)


def test_scaling_factor_apply_matches_division():
    sf = scaling_factor("area", 130, 45)
    assert sf.apply(100.0) == pytest.approx(12.05, abs=0.01)
    assert float(sf) == sf.factor


@given(primaries, nodes)
def test_identity(m, n):
    assert scaling_factor(m, n, n).factor == 1.0


@given(primaries, nodes, nodes)
def test_inversion(m, a, b):
    assert scaling_factor(m, a, b).factor * scaling_factor(m, b, a).factor == pytest.approx(1.0, rel=1e-12)


@given(primaries, nodes, nodes, nodes)
def test_composition(m, a, b, c):
    lhs = scaling_factor(m, a, b).factor * scaling_factor(m, b, c).factor
    assert lhs == pytest.approx(scaling_factor(m, a, c).factor, rel=1e-12)


@given(primaries, nodes, nodes)
def test_shrinking_improves_every_primary_metric(m, a, b):
    if a.feature_nm > b.feature_nm:
        assert scaling_factor(m, a, b).factor > 1.0


def test_shipped_trends_basic_invariants():
    trends = shipped_trends()
    assert set(trends) == set(PRIMARY_METRICS)
    for t in trends.values():
        assert t.values[NODES[0]] == 1.0
        assert t.is_monotone_decreasing()
        assert all(v > 0 for v in t.values.values())
        assert set(t.provenance.values()) <= set(Provenance)


def test_table_csv_round_trip_is_byte_stable():
    text = shipped_table_text()
    assert format_table_csv(parse_table_csv(text)) == text


def test_relative_trend_rejects_nonpositive_values():
    with pytest.raises(DataError):
        RelativeTrend(Metric.AREA, {130: 1.0, 90: 0.0})
    with pytest.raises(UnsupportedMetricError):
        RelativeTrend(Metric.EDP, {130: 1.0})


def test_parse_table_requires_full_coverage():
    text = "metric,node_nm,relative_value,provenance\narea,130,1.0,anchor\n"
    with pytest.raises(DataError):
        parse_table_csv(text)


def test_trends_are_read_only():
    t = shipped_trends()[Metric.AREA]
    with pytest.raises(TypeError):
        t.values[NODES[0]] = 2.0
    assert math.isclose(t[45], relative_value("area", 45))
