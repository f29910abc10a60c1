"""Press-direction sweeps and the grip/turn-over switching decision.

A sweep walks the press direction across a range and records the opening
verdict at each sample.  Contiguous runs of opening samples form the
opening envelope; its boundaries are sharpened by bisection on the
underlying verdict function, not by interpolating the samples.  On top of
that sit the operational questions: how hard must the finger be pressed
to flip into turn-over mode, and how much grip force is safe to apply
without flipping accidentally.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .model import LinkageParameters
from .statics import OpeningDecision, predict_opening

__all__ = [
    "GraspMode",
    "NotOpeningError",
    "OpeningInterval",
    "SweepCurve",
    "SweepSample",
    "opening_interval",
    "parallel_grip_budget",
    "select_mode",
    "sweep",
    "sweep_points",
    "switching_threshold",
]

DEFAULT_SWEEP_LO = math.radians(-30.0)
DEFAULT_SWEEP_HI = math.radians(90.0)
DEFAULT_SWEEP_STEP = math.radians(0.5)
DEFAULT_REFINE_TOL = math.radians(0.01)

_THREADS_ENV = "LINKSTAT_THREADS"


class NotOpeningError(RuntimeError):
    """The requested press direction never swings the finger open."""


@dataclass(frozen=True, eq=False)
class SweepSample:
    zeta: float
    decision: OpeningDecision


@dataclass(frozen=True, eq=False)
class SweepCurve:
    """Ordered opening verdicts over a set of press directions."""

    params: LinkageParameters
    samples: tuple[SweepSample, ...]

    @property
    def zetas(self) -> tuple[float, ...]:
        return tuple(s.zeta for s in self.samples)

    @property
    def opening_count(self) -> int:
        return sum(1 for s in self.samples if s.decision.opens)


def _worker_count(explicit: int | None) -> int:
    if explicit is not None:
        if explicit < 1:
            raise ValueError(f"worker count must be >= 1, got {explicit}")
        return explicit
    raw = os.environ.get(_THREADS_ENV)
    if raw is None:
        return 1
    try:
        count = int(raw)
    except ValueError:
        raise ValueError(
            f"{_THREADS_ENV} must be an integer >= 1, got {raw!r}"
        ) from None
    if count < 1:
        raise ValueError(f"{_THREADS_ENV} must be an integer >= 1, got {raw!r}")
    return count


def sweep_points(
    p: LinkageParameters,
    zetas: Sequence[float],
    workers: int | None = None,
) -> SweepCurve:
    """Evaluate the opening verdict at explicitly given press directions.

    Sample order follows the input order.  ``workers`` caps concurrent
    evaluation; when None the LINKSTAT_THREADS environment variable is
    consulted and absence means serial evaluation.  The result does not
    depend on the worker count.
    """
    if not zetas:
        raise ValueError("at least one press direction is required")
    count = _worker_count(workers)
    if count == 1 or len(zetas) == 1:
        decisions = [predict_opening(p, z) for z in zetas]
    else:
        with ThreadPoolExecutor(max_workers=count) as pool:
            decisions = list(pool.map(lambda z: predict_opening(p, z), zetas))
    return SweepCurve(
        params=p,
        samples=tuple(
            SweepSample(zeta=z, decision=d) for z, d in zip(zetas, decisions)
        ),
    )


def _grid(lo: float, hi: float, step: float) -> list[float]:
    if hi < lo:
        raise ValueError(f"range is reversed: [{lo}, {hi}]")
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if hi == lo:
        return [lo]
    count = int(math.floor((hi - lo) / step + 1e-9))
    points = [lo + i * step for i in range(count + 1)]
    if hi - points[-1] > 1e-9 * step:
        points.append(hi)
    else:
        points[-1] = min(points[-1], hi)
    return points


def sweep(
    p: LinkageParameters,
    zeta_lo: float = DEFAULT_SWEEP_LO,
    zeta_hi: float = DEFAULT_SWEEP_HI,
    step: float = DEFAULT_SWEEP_STEP,
    workers: int | None = None,
) -> SweepCurve:
    """Sweep the press direction over a closed grid.

    Both endpoints are always sampled: a degenerate range yields a single
    sample and a step wider than the range yields just the two ends.
    """
    return sweep_points(p, _grid(zeta_lo, zeta_hi, step), workers=workers)


@dataclass(frozen=True)
class OpeningInterval:
    """One contiguous band of press directions that open the finger.

    Endpoints are refined transition angles except where the band runs
    into the swept range boundary, flagged by the ``*_refined`` fields.
    """

    lo: float
    hi: float
    lo_refined: bool
    hi_refined: bool

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _bisect_transition(
    p: LinkageParameters,
    closed_side: float,
    open_side: float,
    tolerance: float,
) -> float:
    """Shrink a bracket with one opening and one non-opening end.

    Returns the opening-side end of the final bracket, so reported
    interval endpoints always carry an opening verdict themselves.
    """
    while abs(open_side - closed_side) > tolerance:
        mid = 0.5 * (closed_side + open_side)
        if mid == closed_side or mid == open_side:
            break
        if predict_opening(p, mid).opens:
            open_side = mid
        else:
            closed_side = mid
    return open_side


def opening_interval(
    curve: SweepCurve, tolerance: float = DEFAULT_REFINE_TOL
) -> tuple[OpeningInterval, ...]:
    """Extract the opening envelope from a sweep, widest interval first.

    Ties on width break toward the lower interval.  Returns an empty
    tuple when no sample opens.
    """
    samples = curve.samples
    p = curve.params
    runs: list[tuple[int, int]] = []
    start: int | None = None
    for i, sample in enumerate(samples):
        if sample.decision.opens:
            if start is None:
                start = i
        elif start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(samples) - 1))

    intervals: list[OpeningInterval] = []
    for first, last in runs:
        if first == 0:
            lo, lo_refined = samples[0].zeta, False
        else:
            lo = _bisect_transition(
                p, samples[first - 1].zeta, samples[first].zeta, tolerance
            )
            lo_refined = True
        if last == len(samples) - 1:
            hi, hi_refined = samples[-1].zeta, False
        else:
            hi = _bisect_transition(
                p, samples[last + 1].zeta, samples[last].zeta, tolerance
            )
            hi_refined = True
        intervals.append(
            OpeningInterval(lo=lo, hi=hi, lo_refined=lo_refined, hi_refined=hi_refined)
        )

    intervals.sort(key=lambda iv: (-iv.width, iv.lo))
    return tuple(intervals)


def switching_threshold(p: LinkageParameters, press_angle: float) -> float:
    """Contact force in N that flips the finger into turn-over mode.

    Raises :class:`NotOpeningError` when pressing along ``press_angle``
    cannot open the finger at any force level.
    """
    decision = predict_opening(p, press_angle)
    if not decision.opens:
        reason = (
            decision.blocked_reason.value
            if decision.blocked_reason is not None
            else "unknown"
        )
        raise NotOpeningError(
            f"press direction {math.degrees(press_angle):.6g} deg does not "
            f"open the finger ({reason})"
        )
    assert decision.required_force is not None
    return decision.required_force


class GraspMode(Enum):
    PARALLEL_GRIP = "parallel_grip"
    TURN_OVER = "turn_over"


def select_mode(applied_force: float, threshold: float) -> GraspMode:
    """Which mode a given applied contact force lands in.

    The boundary belongs to turn-over: applying exactly the threshold
    force flips the finger.
    """
    if not math.isfinite(applied_force) or applied_force < 0.0:
        raise ValueError(f"applied force must be finite and >= 0, got {applied_force}")
    if not math.isfinite(threshold) or threshold < 0.0:
        raise ValueError(f"threshold must be finite and >= 0, got {threshold}")
    return GraspMode.TURN_OVER if applied_force >= threshold else GraspMode.PARALLEL_GRIP


def parallel_grip_budget(threshold: float, margin: float = 0.8) -> float:
    """Largest grip force to plan for while staying safely below flip.

    ``margin`` is the fraction of the threshold to allow; the default
    keeps a 20 percent guard band.
    """
    if not (0.0 < margin <= 1.0):
        raise ValueError(f"margin must lie in (0, 1], got {margin}")
    if not math.isfinite(threshold) or threshold < 0.0:
        raise ValueError(f"threshold must be finite and >= 0, got {threshold}")
    return margin * threshold
