import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from linkstat import (
    GraspMode,
    NotOpeningError,
    opening_interval,
    parallel_grip_budget,
    select_mode,
    sweep,
    sweep_points,
    switching_threshold,
)

# Envelope boundaries computed from the member balances ahead of this
# implementation: the opening band for the reference build runs from
# about -12.519 to about 19.639 degrees.
ENVELOPE_LO_DEG = -12.519246
ENVELOPE_HI_DEG = 19.639128


def rad(x: float) -> float:
    return math.radians(x)


def test_default_sweep_shape(defaults):
    curve = sweep(defaults)
    assert len(curve.samples) == 241
    assert curve.samples[0].zeta == rad(-30.0)
    assert math.isclose(curve.samples[-1].zeta, rad(90.0), rel_tol=1e-12)
    assert 0 < curve.opening_count < len(curve.samples)


def test_sweep_degenerate_range(defaults):
    single = sweep(defaults, rad(5.0), rad(5.0), rad(0.5))
    assert len(single.samples) == 1
    assert single.samples[0].zeta == rad(5.0)


def test_sweep_step_wider_than_range(defaults):
    two = sweep(defaults, rad(1.0), rad(2.0), rad(10.0))
    assert [s.zeta for s in two.samples] == [rad(1.0), rad(2.0)]


def test_sweep_rejects_bad_ranges(defaults):
    with pytest.raises(ValueError):
        sweep(defaults, rad(10.0), rad(-10.0))
    with pytest.raises(ValueError):
        sweep(defaults, rad(0.0), rad(1.0), 0.0)
    with pytest.raises(ValueError):
        sweep_points(defaults, [])


def test_envelope_is_single_band(defaults):
    intervals = opening_interval(sweep(defaults))
    assert len(intervals) == 1
    iv = intervals[0]
    assert iv.lo_refined and iv.hi_refined
    assert abs(math.degrees(iv.lo) - ENVELOPE_LO_DEG) < 0.011
    assert abs(math.degrees(iv.hi) - ENVELOPE_HI_DEG) < 0.011


def test_envelope_endpoints_carry_opening_verdicts(defaults):
    from linkstat import predict_opening

    iv = opening_interval(sweep(defaults))[0]
    assert predict_opening(defaults, iv.lo).opens
    assert predict_opening(defaults, iv.hi).opens


def test_envelope_refinement_tolerance(defaults):
    coarse = opening_interval(sweep(defaults), tolerance=rad(0.2))[0]
    fine = opening_interval(sweep(defaults), tolerance=rad(0.01))[0]
    # Tightening the tolerance can only move the reported edge toward
    # the true transition, never across it.
    assert fine.lo <= coarse.lo
    assert fine.hi >= coarse.hi
    assert coarse.lo - fine.lo <= rad(0.2)


def test_envelope_unrefined_at_range_boundary(defaults):
    curve = sweep(defaults, rad(0.0), rad(10.0), rad(0.5))
    iv = opening_interval(curve)[0]
    assert not iv.lo_refined and not iv.hi_refined
    assert iv.lo == rad(0.0)
    assert math.isclose(iv.hi, rad(10.0))


def test_intervals_ordered_widest_first(defaults):
    # A sweep clipped to catch only slivers of the band still orders by width.
    curve = sweep(defaults, rad(-13.0), rad(20.0), rad(0.25))
    intervals = opening_interval(curve)
    widths = [iv.width for iv in intervals]
    assert widths == sorted(widths, reverse=True)


def test_switching_threshold_inside_envelope(defaults):
    t = switching_threshold(defaults, 0.0)
    assert math.isclose(t, 5.171175, rel_tol=1e-6)


def test_switching_threshold_blocked_direction(defaults):
    with pytest.raises(NotOpeningError, match="contact_maintained"):
        switching_threshold(defaults, rad(-15.0))
    with pytest.raises(NotOpeningError, match="negative_xi"):
        switching_threshold(defaults, rad(60.0))


def test_mode_selection_boundary():
    assert select_mode(4.99, 5.0) is GraspMode.PARALLEL_GRIP
    assert select_mode(5.0, 5.0) is GraspMode.TURN_OVER
    assert select_mode(5.01, 5.0) is GraspMode.TURN_OVER


@given(
    st.floats(min_value=0.0, max_value=100.0),
    st.floats(min_value=0.0, max_value=100.0),
)
def test_mode_selection_total(applied, threshold):
    mode = select_mode(applied, threshold)
    assert mode is (
        GraspMode.TURN_OVER if applied >= threshold else GraspMode.PARALLEL_GRIP
    )


def test_mode_selection_rejects_bad_input():
    with pytest.raises(ValueError):
        select_mode(-1.0, 5.0)
    with pytest.raises(ValueError):
        select_mode(1.0, math.inf)


def test_grip_budget(defaults):
    t = switching_threshold(defaults, 0.0)
    budget = parallel_grip_budget(t)
    assert math.isclose(budget, 0.8 * t)
    assert select_mode(budget, t) is GraspMode.PARALLEL_GRIP
    with pytest.raises(ValueError):
        parallel_grip_budget(t, margin=0.0)
    with pytest.raises(ValueError):
        parallel_grip_budget(t, margin=1.2)


def test_worker_env_controls_sweep(defaults, monkeypatch):
    serial = sweep(defaults, rad(-5.0), rad(5.0), rad(0.5))
    monkeypatch.setenv("LINKSTAT_THREADS", "3")
    threaded = sweep(defaults, rad(-5.0), rad(5.0), rad(0.5))
    assert [s.zeta for s in serial.samples] == [s.zeta for s in threaded.samples]
    for a, b in zip(serial.samples, threaded.samples):
        assert a.decision.opens == b.decision.opens
        if a.decision.solution is not None:
            assert a.decision.solution.xi_b == b.decision.solution.xi_b


def test_worker_env_rejects_garbage(defaults, monkeypatch):
    monkeypatch.setenv("LINKSTAT_THREADS", "many")
    with pytest.raises(ValueError, match="LINKSTAT_THREADS"):
        sweep(defaults, rad(0.0), rad(1.0), rad(0.5))
    monkeypatch.setenv("LINKSTAT_THREADS", "0")
    with pytest.raises(ValueError, match="LINKSTAT_THREADS"):
        sweep(defaults, rad(0.0), rad(1.0), rad(0.5))


def test_explicit_workers_override(defaults, monkeypatch):
    monkeypatch.setenv("LINKSTAT_THREADS", "nonsense")
    curve = sweep(defaults, rad(0.0), rad(1.0), rad(0.5), workers=2)
    assert len(curve.samples) == 3
