"""Quasi-static force balance for the finger pressing on an object edge.

When the closed finger is pushed against a fixed edge, the contact force
on the tip pad works against the return spring through the linkage.  The
balance of that contest decides whether the finger stays clamped
(parallel grip) or swings open (turn-over).  Everything here is a rigid
linkage in a plane with Coulomb friction at the slotted pin, so the whole
problem reduces to small linear systems.

Two independent routes compute the same state:

* :func:`solve_balance` aggregates the member balances into a 2x2 system
  in the contact force and one internal strut force.
* :func:`full_equilibrium` writes out the raw per-member force and moment
  balances as a 9-unknown linear system and solves that directly.

The second route exists to cross-check the first and is deliberately not
implemented in terms of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import LinkageParameters

__all__ = [
    "BalanceSolution",
    "BalanceSystem",
    "BlockedReason",
    "EquilibriumState",
    "JointForcePair",
    "OpeningDecision",
    "OpeningStatus",
    "SingularSystemError",
    "assemble_system",
    "friction_coupling",
    "full_equilibrium",
    "perturbed_joint_forces",
    "predict_opening",
    "solve_balance",
    "solve_balance_with_sign",
    "spring_force",
    "tip_moment_ratio",
]

# A 2x2 determinant below this fraction of the squared row scale is
# treated as singular rather than solved into garbage.
_DET_RELATIVE_FLOOR = 1e-12


class SingularSystemError(RuntimeError):
    """The balance system has no usable solution at this press direction."""


def _sign_of(value: float) -> int:
    """Sign convention used throughout: zero counts as positive."""
    return 1 if value >= 0.0 else -1


def spring_force(p: LinkageParameters) -> float:
    """Tension in the return spring with the finger closed, in N.

    The stretched length is modelled as the lateral projection of the two
    anchor offsets, l0*(sin(theta0+theta1) + sin(theta4+theta5)); the
    spring rate times the stretch past natural length gives the force.
    """
    stretched = p.l0 * (
        math.sin(p.theta0 + p.theta1) + math.sin(p.theta4 + p.theta5)
    )
    return p.spring_k * (stretched - p.natural_length)


def tip_moment_ratio(p: LinkageParameters, zeta: float) -> float:
    """Ratio coupling the tip contact force into the coupler strut load.

    ``zeta`` is the press direction in radians, measured at the tip pad;
    zero presses straight along the pad normal.  The ratio changes sign
    where the contact force line crosses the slotted strut axis, which is
    what ultimately bounds the opening envelope from below.
    """
    return (p.l4 * math.cos(zeta) - p.l3 * math.sin(p.theta2 + zeta)) / (
        p.l2 * math.sin(p.theta2 + p.theta3)
    )


def friction_coupling(p: LinkageParameters, sign_beta3: int) -> float:
    """Transmission factor through the slotted pin for a friction branch.

    ``sign_beta3`` picks the assumed slip sense (+1 or -1).  With mu = 0
    both branches collapse to the same frictionless value.
    """
    s = float(sign_beta3)
    return (s * p.mu * math.sin(p.theta3) + math.cos(p.theta3)) / (
        -s * p.mu * math.sin(p.theta2) + math.cos(p.theta2)
    )


@dataclass(frozen=True, eq=False)
class BalanceSystem:
    """The aggregated 2x2 balance, kept for inspection and reuse.

    matrix * (xi_b, beta_3b) = rhs, with xi_b the contact force magnitude
    and beta_3b the coupler strut force, both in N.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    tip_ratio: float
    coupling: float
    sign_beta3: int
    spring_load: float

    @property
    def det(self) -> float:
        a = self.matrix
        return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])


def assemble_system(
    p: LinkageParameters, zeta: float, sign_beta3: int
) -> BalanceSystem:
    """Build the 2x2 balance for one press direction and friction branch."""
    gamma = tip_moment_ratio(p, zeta)
    lam = friction_coupling(p, sign_beta3)
    f_k = spring_force(p)

    matrix = np.array(
        [
            [
                gamma * math.sin(p.theta1 - p.theta3) + math.sin(p.theta1 - zeta),
                math.sin(p.theta1 - p.theta3),
            ],
            [
                gamma * math.sin(p.theta3 + p.theta4),
                lam * math.sin(p.theta4 - p.theta2),
            ],
        ],
        dtype=float,
    )
    lever = p.l0 / p.l1
    rhs = np.array(
        [
            lever * math.cos(p.theta0 + p.theta1) * f_k,
            -lever * math.cos(p.theta4 + p.theta5) * f_k,
        ],
        dtype=float,
    )
    return BalanceSystem(
        matrix=matrix,
        rhs=rhs,
        tip_ratio=gamma,
        coupling=lam,
        sign_beta3=sign_beta3,
        spring_load=f_k,
    )


@dataclass(frozen=True, eq=False)
class BalanceSolution:
    """Solved contact and strut forces for one press direction."""

    xi_b: float
    beta_3b: float
    sign_beta3: int
    sign_consistent: bool
    system: BalanceSystem


def _solve_2x2(system: BalanceSystem, zeta: float) -> tuple[float, float]:
    a = system.matrix
    det = system.det
    row_scale = max(
        math.hypot(float(a[0, 0]), float(a[0, 1])),
        math.hypot(float(a[1, 0]), float(a[1, 1])),
    )
    if det == 0.0 or abs(det) < _DET_RELATIVE_FLOOR * row_scale * row_scale:
        raise SingularSystemError(
            f"balance matrix is singular at press direction "
            f"{math.degrees(zeta):.6g} deg (det = {det:.3e})"
        )
    b = system.rhs
    xi = (float(b[0]) * float(a[1, 1]) - float(a[0, 1]) * float(b[1])) / det
    beta = (float(a[0, 0]) * float(b[1]) - float(a[1, 0]) * float(b[0])) / det
    return xi, beta


def solve_balance_with_sign(
    p: LinkageParameters, zeta: float, sign_beta3: int
) -> BalanceSolution:
    """Solve the balance with the friction branch pinned, no iteration."""
    system = assemble_system(p, zeta, sign_beta3)
    xi, beta = _solve_2x2(system, zeta)
    return BalanceSolution(
        xi_b=xi,
        beta_3b=beta,
        sign_beta3=sign_beta3,
        sign_consistent=_sign_of(beta) == sign_beta3,
        system=system,
    )


def solve_balance(p: LinkageParameters, zeta: float) -> BalanceSolution:
    """Solve the aggregated balance, iterating the friction branch once.

    The slip sense at the slotted pin is not known in advance.  Start on
    the +1 branch; if the solved strut force contradicts it, rebuild on
    the -1 branch and accept that answer.  A solution whose strut force
    still contradicts its branch after the rebuild is returned with
    ``sign_consistent`` False so callers can surface it.
    """
    first = solve_balance_with_sign(p, zeta, 1)
    if first.sign_consistent:
        return first
    return solve_balance_with_sign(p, zeta, -1)


@dataclass(frozen=True)
class JointForcePair:
    """Lateral driving forces on the two strut joints under a force probe.

    Obtained by nudging the contact force a small step ``epsilon`` past
    balance and reading how the joint reactions must respond.  Signs are
    what matters: they say which way each strut is being driven.
    """

    f_rx: float
    f_sx: float


def perturbed_joint_forces(
    p: LinkageParameters,
    zeta: float,
    solution: BalanceSolution | None = None,
) -> JointForcePair:
    """Joint driving forces for a probe step past the balance point.

    The full matrix route reduces exactly to a single matrix column
    scaled by the probe step, so that reduced form is computed here; the
    equivalence with the matrix route is part of the test suite.
    """
    if solution is None:
        solution = solve_balance(p, zeta)
    a = solution.system.matrix
    f_rx = -(p.epsilon * float(a[0, 0])) / math.cos(p.theta1)
    f_sx = -(p.epsilon * float(a[1, 0])) / math.cos(p.theta4)
    return JointForcePair(f_rx=f_rx, f_sx=f_sx)


class OpeningStatus(Enum):
    OPENS = "opens"
    BLOCKED = "blocked"
    SINGULAR = "singular"


class BlockedReason(Enum):
    """Why a press direction fails to open the finger."""

    NEGATIVE_XI = "negative_xi"
    CONTACT_MAINTAINED = "contact_maintained"
    SINGULAR = "singular"


@dataclass(frozen=True, eq=False)
class OpeningDecision:
    """Verdict for one press direction.

    ``required_force`` is the contact force in N needed to hold balance,
    set only when the finger actually opens.  The underlying solution and
    probe forces are kept for reporting; both are None when the balance
    matrix was singular.
    """

    status: OpeningStatus
    required_force: float | None
    blocked_reason: BlockedReason | None
    forces: JointForcePair | None
    solution: BalanceSolution | None

    @property
    def opens(self) -> bool:
        return self.status is OpeningStatus.OPENS

    @property
    def sign_beta3(self) -> int:
        return self.solution.sign_beta3 if self.solution is not None else 0

    @property
    def sign_consistent(self) -> bool:
        return self.solution.sign_consistent if self.solution is not None else False


def predict_opening(p: LinkageParameters, zeta: float) -> OpeningDecision:
    """Decide whether pressing along ``zeta`` swings the finger open.

    Opening requires a non-negative balance force together with probe
    forces that drive the left strut joint inward (f_rx <= 0) and the
    right strut joint outward (f_sx >= 0); that combination releases the
    clamp instead of tightening it.  A negative balance force means the
    press direction cannot reach balance at all and is reported as
    NEGATIVE_XI; the wrong probe-force pattern is CONTACT_MAINTAINED.
    """
    try:
        solution = solve_balance(p, zeta)
    except SingularSystemError:
        return OpeningDecision(
            status=OpeningStatus.SINGULAR,
            required_force=None,
            blocked_reason=BlockedReason.SINGULAR,
            forces=None,
            solution=None,
        )
    forces = perturbed_joint_forces(p, zeta, solution)

    if solution.xi_b < 0.0:
        return OpeningDecision(
            status=OpeningStatus.BLOCKED,
            required_force=None,
            blocked_reason=BlockedReason.NEGATIVE_XI,
            forces=forces,
            solution=solution,
        )
    if forces.f_rx <= 0.0 and forces.f_sx >= 0.0:
        return OpeningDecision(
            status=OpeningStatus.OPENS,
            required_force=solution.xi_b,
            blocked_reason=None,
            forces=forces,
            solution=solution,
        )
    return OpeningDecision(
        status=OpeningStatus.BLOCKED,
        required_force=None,
        blocked_reason=BlockedReason.CONTACT_MAINTAINED,
        forces=forces,
        solution=solution,
    )


@dataclass(frozen=True, eq=False)
class EquilibriumState:
    """Full member-by-member force state from the raw 9-unknown balance.

    Forces are (x, y) pairs in N on the joints named in the layout;
    ``beta_6`` is the slotted strut internal force that the aggregated
    route folds away.  ``residual`` is the worst scaled defect over all
    nine balance rows.
    """

    xi: float
    beta_3: float
    beta_6: float
    f_r1: tuple[float, float]
    f_s4: tuple[float, float]
    f_pin: tuple[float, float]
    friction_sign: int
    consistent: bool
    residual: float


def _equilibrium_rows(
    p: LinkageParameters, zeta: float, slip_sign: int
) -> tuple[np.ndarray, np.ndarray]:
    """Raw balance rows, one unknown vector:

    (xi, beta_3, beta_6, f_r1x, f_r1y, f_s4x, f_s4y, f_pinx, f_piny).

    Member balances are written directly from the free bodies of the two
    struts and the slotted pin; nothing is pre-aggregated, so this stays
    an independent check on :func:`solve_balance`.
    """
    s1, c1 = math.sin(p.theta1), math.cos(p.theta1)
    s2, c2 = math.sin(p.theta2), math.cos(p.theta2)
    s3, c3 = math.sin(p.theta3), math.cos(p.theta3)
    s4, c4 = math.sin(p.theta4), math.cos(p.theta4)
    gamma = tip_moment_ratio(p, zeta)
    f_k = spring_force(p)

    a = np.zeros((9, 9), dtype=float)
    b = np.zeros(9, dtype=float)

    # Left strut, force balance (x then y).
    a[0, 3] = 1.0
    a[0, 0] = gamma * s3 + math.sin(zeta)
    a[0, 1] = s3
    a[1, 4] = 1.0
    a[1, 0] = gamma * c3 + math.cos(zeta)
    a[1, 1] = c3
    # Left strut, moment about the base pivot.
    a[2, 4] = p.l1 * s1
    a[2, 3] = -p.l1 * c1
    b[2] = -p.l0 * math.cos(p.theta0 + p.theta1) * f_k
    # Right strut, force balance.
    a[3, 5] = 1.0
    a[3, 0] = -gamma * s3
    a[3, 2] = s2
    a[4, 6] = 1.0
    a[4, 0] = -gamma * c3
    a[4, 2] = -c2
    # Right strut, moment about the base pivot.
    a[5, 6] = -p.l1 * s4
    a[5, 5] = -p.l1 * c4
    b[5] = p.l0 * math.cos(p.theta4 + p.theta5) * f_k
    # Slotted pin, force balance.
    a[6, 7] = 1.0
    a[6, 1] = s3
    a[6, 2] = s2
    a[7, 8] = 1.0
    a[7, 1] = c3
    a[7, 2] = -c2
    # Coulomb condition at the pin for the assumed slip sense.
    a[8, 8] = 1.0
    a[8, 7] = -p.mu * float(slip_sign)
    return a, b


def _solve_equilibrium_branch(
    p: LinkageParameters, zeta: float, slip_sign: int
) -> tuple[np.ndarray, float]:
    a, b = _equilibrium_rows(p, zeta, slip_sign)
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"raw equilibrium is singular at press direction "
            f"{math.degrees(zeta):.6g} deg"
        ) from exc
    defect = a @ x - b
    scale = max(1.0, float(np.max(np.abs(b))), float(np.max(np.abs(x))))
    residual = float(np.max(np.abs(defect))) / scale
    return x, residual


def full_equilibrium(
    p: LinkageParameters, zeta: float, sign_beta3: int | None = None
) -> EquilibriumState:
    """Solve the raw member balances for one press direction.

    The Coulomb row needs an assumed slip sense at the pin, so both
    senses are solved and the self-consistent one kept.  When both are
    consistent (the friction force is essentially zero) the branch
    matching ``sign_beta3`` is preferred; an inconsistent pair is
    returned with ``consistent`` False rather than raised.
    """
    preferred = -sign_beta3 if sign_beta3 is not None else None
    branches: dict[int, tuple[np.ndarray, float]] = {}
    consistent_signs: list[int] = []
    for slip in (1, -1):
        x, residual = _solve_equilibrium_branch(p, zeta, slip)
        branches[slip] = (x, residual)
        pin_x = float(x[7])
        tol = 1e-9 * max(1.0, abs(pin_x))
        if slip * pin_x >= -tol:
            consistent_signs.append(slip)

    if not consistent_signs:
        # Neither slip sense agrees with its own solution; report the
        # branch implied by the strut-force sign convention.
        chosen = preferred if preferred in branches else 1
        consistent = False
    elif len(consistent_signs) == 1:
        chosen = consistent_signs[0]
        consistent = True
    else:
        if preferred in consistent_signs:
            chosen = preferred
        else:
            # Tie-break with the sense opposing the coupler strut force,
            # matching the convention of the aggregated route.
            chosen = next(
                (
                    s
                    for s in consistent_signs
                    if s == -_sign_of(float(branches[s][0][1]))
                ),
                consistent_signs[0],
            )
        consistent = True

    x, residual = branches[chosen]
    return EquilibriumState(
        xi=float(x[0]),
        beta_3=float(x[1]),
        beta_6=float(x[2]),
        f_r1=(float(x[3]), float(x[4])),
        f_s4=(float(x[5]), float(x[6])),
        f_pin=(float(x[7]), float(x[8])),
        friction_sign=chosen,
        consistent=consistent,
        residual=residual,
    )
