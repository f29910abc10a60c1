import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from linkstat import (
    ClosureError,
    default_parameters,
    joint_layout,
    surface_angle,
    validate_parameters,
)


def test_defaults_validate(defaults):
    report = validate_parameters(defaults)
    assert report.ok
    assert report.describe() == "parameters ok"


def test_default_values(defaults):
    assert defaults.l1 == 24.0
    assert defaults.l2 == 12.0
    # Slotted strut picks up the projection of the tilted tip pad.
    assert math.isclose(defaults.l4, 2.4148145657, rel_tol=1e-9)
    assert math.isclose(defaults.l3, 22.625, rel_tol=1e-12)
    assert math.isclose(math.degrees(defaults.theta4), 7.44, rel_tol=1e-12)


def test_zero_length_reported(defaults):
    report = validate_parameters(defaults.with_values(l2=0.0))
    assert not report.ok
    assert any(v.field == "l2" and "positive" in v.message for v in report.violations)


def test_degenerate_angle_pair_reported(defaults):
    bad = defaults.with_values(theta3=-defaults.theta2)
    report = validate_parameters(bad)
    assert not report.ok
    assert any("theta3" in v.message for v in report.violations)


def test_all_violations_reported_together(defaults):
    bad = defaults.with_values(l0=-1.0, l3=0.0, theta1=2.0, mu=-0.5)
    fields = {v.field for v in validate_parameters(bad).violations}
    assert {"l0", "l3", "theta1", "mu"} <= fields


def test_angle_range_is_open(defaults):
    at_edge = defaults.with_values(theta1=math.pi / 2)
    assert not validate_parameters(at_edge).ok


@given(
    st.sampled_from(["l0", "l1", "l2", "l3", "l4", "natural_length"]),
    st.floats(max_value=0.0, allow_nan=False, allow_infinity=False),
)
def test_any_nonpositive_length_is_named(name, value):
    bad = default_parameters().with_values(**{name: value})
    report = validate_parameters(bad)
    assert any(v.field == name for v in report.violations)


@given(st.floats(allow_nan=True, allow_infinity=True))
def test_validation_never_raises(value):
    p = default_parameters().with_values(l1=value, theta2=value, spring_k=value)
    validate_parameters(p)  # must not raise, whatever the input


def test_layout_reference_positions(defaults):
    layout = joint_layout(defaults)
    assert layout.o == (0.0, 0.0)
    assert math.isclose(layout.r[0], 24.0 * math.sin(math.radians(9.0)))
    assert math.isclose(layout.r[1], 24.0 * math.cos(math.radians(9.0)))
    assert layout.s[0] < 0.0 < layout.r[0]
    # Pin and coupler joint sit on the centre axis.
    assert layout.t[0] == 0.0
    assert layout.q[0] == 0.0
    assert layout.q[1] > layout.t[1]
    # The two slot-line intercepts straddle the pin by construction.
    assert math.isclose(layout.t[1], 12.099, rel_tol=1e-3)
    assert math.isclose(layout.closure_residual, 4.818, rel_tol=1e-3)


def test_layout_mirror_symmetry(defaults):
    mirrored = defaults.with_values(
        theta0=defaults.theta5,
        theta5=defaults.theta0,
        theta1=defaults.theta4,
        theta4=defaults.theta1,
        theta2=defaults.theta3,
        theta3=defaults.theta2,
    )
    a = joint_layout(defaults)
    b = joint_layout(mirrored)
    for left, right in ((a.r, b.s), (a.s, b.r), (a.anchor_u, b.anchor_v), (a.anchor_v, b.anchor_u)):
        assert math.isclose(left[0], -right[0], abs_tol=1e-9)
        assert math.isclose(left[1], right[1], abs_tol=1e-9)
    assert math.isclose(a.t[1], b.t[1], abs_tol=1e-9)
    assert math.isclose(a.closure_residual, b.closure_residual, abs_tol=1e-9)


def test_layout_rejects_invalid_parameters(defaults):
    with pytest.raises(ValueError, match="l1"):
        joint_layout(defaults.with_values(l1=-3.0))


def test_layout_parallel_slot_line(defaults):
    with pytest.raises(ClosureError):
        joint_layout(defaults.with_values(theta3=0.0))


def test_surface_angle_endpoints():
    assert surface_angle(0.0) == math.pi / 2
    assert math.isclose(surface_angle(1.0), math.pi / 6)
    assert math.isclose(surface_angle(0.5), math.pi / 3)


@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_surface_angle_monotone(a, b):
    if a < b:
        assert surface_angle(a) > surface_angle(b)


@pytest.mark.parametrize("fraction", [-0.001, 1.001, math.nan])
def test_surface_angle_domain(fraction):
    with pytest.raises(ValueError):
        surface_angle(fraction)
