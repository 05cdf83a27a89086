import pytest
from hypothesis import given, strategies as st

from nodescale.classical import classical_factor
from nodescale.errors import NonpositiveValueError, UnsupportedMetricError, UnsupportedNodeError
from nodescale.model import scaling_factor
from nodescale.nodes import DERIVED_METRICS, NODES, PRIMARY_METRICS, Metric
from nodescale.query import Measure, compose_derived, derived_factor, factor, percent_reduction, scale_value

nodes = st.sampled_from(NODES)


def test_worked_examples():
    assert scale_value(Measure(100, "um^2", "area", 130), 45).value == pytest.approx(12.05, abs=0.01)
    out = scale_value(Measure(100, "mW", "power", 45), 32)
    assert out.value == pytest.approx(80.775, abs=0.01)
    assert out.unit == "mW" and out.node.feature_nm == 32


@given(st.sampled_from(PRIMARY_METRICS + DERIVED_METRICS), nodes, st.floats(1e-3, 1e6))
def test_identity_node(m, n, v):
    assert scale_value(Measure(v, "u", m, n), n).value == v


@given(st.sampled_from(PRIMARY_METRICS + DERIVED_METRICS), nodes, nodes, st.floats(1e-3, 1e6))
def test_round_trip(m, a, b, v):
    back = scale_value(scale_value(Measure(v, "u", m, a), b), a)
    assert back.value == pytest.approx(v, rel=1e-12)


@given(nodes, nodes, st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_edp_measure_equals_energy_times_delay(a, b, e, d):
    edp = scale_value(Measure(e * d, "pJ*ns", "edp", a), b).value
    parts = scale_value(Measure(e, "pJ", "energy", a), b).value * scale_value(Measure(d, "ns", "delay", a), b).value
    assert edp == pytest.approx(parts, rel=1e-12)


def test_derived_examples():
    assert derived_factor("throughput", 65, 65) == 1.0
    expected = scaling_factor("power", 130, 45).factor / scaling_factor("area", 130, 45).factor
    assert derived_factor("power_density", 130, 45) == pytest.approx(expected, rel=1e-15)
    assert derived_factor("power_density", 130, 45) == pytest.approx(scaling_factor("power", 130, 45).factor / 8.3, rel=5e-3)


@given(nodes, nodes)
def test_derived_rules(a, b):
    f = {m: scaling_factor(m, a, b).factor for m in PRIMARY_METRICS}
    assert derived_factor("edp", a, b) == pytest.approx(f[Metric.ENERGY] * f[Metric.DELAY], rel=1e-12)
    assert derived_factor("throughput", a, b) == pytest.approx(1 / f[Metric.DELAY], rel=1e-12)
    assert derived_factor("throughput_per_area", a, b) == pytest.approx(
        derived_factor("throughput", a, b) / f[Metric.AREA], rel=1e-12
    )


def test_derived_rules_on_classical_factors_k2():
    def primary(m):
        return classical_factor(m, 90, 45)

    assert compose_derived("edp", primary) == 16.0
    assert compose_derived("throughput", primary) == 0.5
    assert compose_derived("power_density", primary) == 1.0
    for m in DERIVED_METRICS:
        assert compose_derived(m, primary) == pytest.approx(classical_factor(m, 90, 45), rel=1e-12)


def test_percent_reduction():
    assert percent_reduction(1.0) == 0.0
    assert percent_reduction(2.0) == 50.0
    assert percent_reduction(0.5) == -100.0
    assert percent_reduction(factor("area", 10, 7)) == pytest.approx(36.7, abs=0.5)
    assert percent_reduction(factor("power", 10, 7)) == pytest.approx(30.0, abs=0.5)
    with pytest.raises(NonpositiveValueError):
        percent_reduction(0.0)


@given(st.floats(1e-6, 1e6), st.floats(1e-6, 1e6))
def test_percent_reduction_monotone(x, y):
    if x < y:
        assert percent_reduction(x) < percent_reduction(y)
    r = percent_reduction(x)
    assert (r < 0) == (x < 1) and r < 100


def test_errors():
    with pytest.raises(UnsupportedMetricError):
        factor("doping", 130, 45)
    with pytest.raises(UnsupportedMetricError):
        compose_derived("area", lambda m: 1.0)
    with pytest.raises(UnsupportedNodeError):
        scale_value(Measure(1, "u", "area", 130), 5)
    with pytest.raises(NonpositiveValueError):
        Measure(0, "u", "area", 130)
