"""Geometry and parameter handling for the parallel-link finger.

The finger is a planar six-bar linkage driven by a tension spring.  Two
equal-length side struts (O-R and O-S in the layout below) hang from a
common base pivot O, a coupler R-Q rides on the left strut, and a slotted
strut S-T slides over a fixed pin T.  The spring stretches between two
anchors U and V on the outer links and pulls the finger shut.

All angles held by :class:`LinkageParameters` are radians and all lengths
are millimetres.  Degree values appear only at file and CLI boundaries,
always with an explicit ``_deg`` suffix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

__all__ = [
    "ClosureError",
    "JointLayout",
    "LinkageParameters",
    "ParameterViolation",
    "ValidationReport",
    "default_parameters",
    "joint_layout",
    "surface_angle",
    "validate_parameters",
]

# Fields that measure a physical length and therefore must be positive.
_LENGTH_FIELDS = ("l0", "l1", "l2", "l3", "l4", "natural_length")

# Joint angle fields, each confined to the open interval (-pi/2, pi/2).
_ANGLE_FIELDS = ("theta0", "theta1", "theta2", "theta3", "theta4", "theta5")

_HALF_PI = math.pi / 2.0


class ClosureError(RuntimeError):
    """Raised when the linkage cannot be assembled into a closed chain."""


@dataclass(frozen=True)
class LinkageParameters:
    """One complete description of the finger linkage.

    Lengths in mm, angles in radians.  Construction is permissive; call
    :func:`validate_parameters` to get a full report of any violations.

    l0          spring-anchor offset along each outer link
    l1          length of both side struts
    l2          coupler length
    l3          slotted strut length from S to its far end
    l4          fingertip pad offset from the coupler line
    theta0      anchor offset angle on the left outer link
    theta1      left strut angle from the vertical
    theta2      slotted strut angle from the vertical
    theta3      coupler angle from the vertical
    theta4      right strut angle from the vertical
    theta5      anchor offset angle on the right outer link
    spring_k    spring rate in N/mm (zero means no spring)
    natural_length  unstretched spring length in mm
    mu          Coulomb friction coefficient at the slotted pin
    epsilon     probe force step in N used for perturbation studies
    """

    l0: float
    l1: float
    l2: float
    l3: float
    l4: float
    theta0: float
    theta1: float
    theta2: float
    theta3: float
    theta4: float
    theta5: float
    spring_k: float
    natural_length: float
    mu: float
    epsilon: float

    def with_values(self, **changes: float) -> "LinkageParameters":
        """Return a copy with the named fields replaced."""
        return replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class ParameterViolation:
    """A single broken parameter rule."""

    field: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[ParameterViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def describe(self) -> str:
        if self.ok:
            return "parameters ok"
        return "\n".join(f"{v.field}: {v.message}" for v in self.violations)


def validate_parameters(p: LinkageParameters) -> ValidationReport:
    """Check every parameter rule and report all violations at once.

    Never raises: a report is returned even for wildly broken input, so a
    caller can show the user the complete list in one pass.
    """
    found: list[ParameterViolation] = []

    for name in _LENGTH_FIELDS:
        value = getattr(p, name)
        if not math.isfinite(value):
            found.append(ParameterViolation(name, f"must be finite, got {value!r}"))
        elif value <= 0.0:
            found.append(ParameterViolation(name, f"must be positive, got {value}"))

    for name in _ANGLE_FIELDS:
        value = getattr(p, name)
        if not math.isfinite(value):
            found.append(ParameterViolation(name, f"must be finite, got {value!r}"))
        elif not (-_HALF_PI < value < _HALF_PI):
            found.append(
                ParameterViolation(
                    name,
                    f"must lie strictly inside (-pi/2, pi/2) rad, got {value}",
                )
            )

    for name, floor in (("spring_k", 0.0), ("mu", 0.0), ("epsilon", 0.0)):
        value = getattr(p, name)
        if not math.isfinite(value):
            found.append(ParameterViolation(name, f"must be finite, got {value!r}"))
        elif value < floor:
            found.append(ParameterViolation(name, f"must be >= {floor}, got {value}"))

    # theta2 = -theta3 collapses the coupler moment arm: the pair is
    # degenerate even though each angle passes its own range check.
    t2, t3 = p.theta2, p.theta3
    if math.isfinite(t2) and math.isfinite(t3) and math.sin(t2 + t3) == 0.0:
        found.append(
            ParameterViolation(
                "theta2",
                f"theta2 + theta3 = {t2 + t3} makes sin(theta2+theta3) vanish; "
                "the coupler transmits no moment (degenerate pair theta2, theta3)",
            )
        )

    return ValidationReport(tuple(found))


def default_parameters() -> LinkageParameters:
    """Factory defaults for the reference finger build.

    The slotted strut length and pad offset are tied together: the pad
    offset is a 2.5 mm tip pad inclined 15 degrees off the coupler line,
    and the strut gains the matching projection.
    """
    tip_pad = 2.5
    tip_tilt = math.radians(15.0)
    l4 = tip_pad * math.cos(tip_tilt)
    return LinkageParameters(
        l0=10.93,
        l1=24.0,
        l2=12.0,
        l3=22.0 + l4 * math.sin(tip_tilt),
        l4=l4,
        theta0=math.radians(30.0),
        theta1=math.radians(9.0),
        theta2=math.radians(18.5),
        theta3=math.radians(15.0),
        theta4=math.radians(7.44),
        theta5=math.radians(33.1),
        spring_k=0.862,
        natural_length=9.7,
        mu=0.6,
        epsilon=0.1,
    )


@dataclass(frozen=True)
class JointLayout:
    """Planar coordinates of the named joints, in mm.

    Origin is the base pivot O with y pointing up along the finger.  The
    slotted pin T and the coupler joint Q sit on the x = 0 axis by
    construction; ``closure_residual`` records how far the two slot-line
    intercepts disagreed before T was placed at their midpoint.
    """

    o: tuple[float, float]
    r: tuple[float, float]
    s: tuple[float, float]
    t: tuple[float, float]
    q: tuple[float, float]
    anchor_u: tuple[float, float]
    anchor_v: tuple[float, float]
    closure_residual: float


def joint_layout(p: LinkageParameters) -> JointLayout:
    """Place every joint of the closed chain in the O-centred frame.

    Raises ValueError when the parameters do not validate, and
    :class:`ClosureError` when a slot line runs parallel to the centre
    axis so the chain cannot close onto the fixed pin.
    """
    report = validate_parameters(p)
    if not report.ok:
        raise ValueError("invalid parameters:\n" + report.describe())

    s1, c1 = math.sin(p.theta1), math.cos(p.theta1)
    s4, c4 = math.sin(p.theta4), math.cos(p.theta4)

    r_joint = (p.l1 * s1, p.l1 * c1)
    s_joint = (-p.l1 * s4, p.l1 * c4)

    # Each slot line heads from its strut joint toward the centre axis.
    # A vanishing sin(theta) means the line never meets x = 0.
    if math.sin(p.theta3) == 0.0:
        raise ClosureError(
            "coupler-side slot line is parallel to the centre axis "
            f"(theta3 = {p.theta3}); the chain cannot reach the fixed pin"
        )
    if math.sin(p.theta2) == 0.0:
        raise ClosureError(
            "slotted strut runs parallel to the centre axis "
            f"(theta2 = {p.theta2}); the chain cannot reach the fixed pin"
        )

    reach_r = r_joint[0] / math.sin(p.theta3)
    axis_y_from_r = r_joint[1] - reach_r * math.cos(p.theta3)

    reach_s = -s_joint[0] / math.sin(p.theta2)
    axis_y_from_s = s_joint[1] - reach_s * math.cos(p.theta2)

    residual = abs(axis_y_from_r - axis_y_from_s)
    t_y = 0.5 * (axis_y_from_r + axis_y_from_s)
    t_joint = (0.0, t_y)
    q_joint = (0.0, t_y + p.l2 * math.sin(p.theta2 + p.theta3))

    anchor_u = (
        p.l1 * s1 + p.l0 * math.sin(p.theta0 + p.theta1),
        p.l1 * c1 - p.l0 * math.cos(p.theta0 + p.theta1),
    )
    anchor_v = (
        -p.l1 * s4 - p.l0 * math.sin(p.theta4 + p.theta5),
        p.l1 * c4 - p.l0 * math.cos(p.theta4 + p.theta5),
    )

    return JointLayout(
        o=(0.0, 0.0),
        r=r_joint,
        s=s_joint,
        t=t_joint,
        q=q_joint,
        anchor_u=anchor_u,
        anchor_v=anchor_v,
        closure_residual=residual,
    )


def surface_angle(opening_fraction: float) -> float:
    """Finger pad surface angle for a given opening fraction.

    Runs linearly from pi/2 (fully closed, pad vertical) down to pi/6
    (fully open).  ``opening_fraction`` must lie in [0, 1].
    """
    if not (0.0 <= opening_fraction <= 1.0):
        raise ValueError(
            f"opening fraction must lie in [0, 1], got {opening_fraction}"
        )
    closed = math.pi / 2.0
    opened = math.pi / 6.0
    return closed + (opened - closed) * opening_fraction
