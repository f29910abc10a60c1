"""Cross-checks between the aggregated balance and the raw member balances.

The two solvers share no assembly code, so agreement pins down both: any
sign slip or dropped term in either route shows up as a mismatch here.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkstat import (
    SingularSystemError,
    default_parameters,
    friction_coupling,
    full_equilibrium,
    solve_balance,
)

PERTURBED_FIELDS = (
    "l0", "l1", "l2", "l3", "l4",
    "theta0", "theta1", "theta2", "theta3", "theta4", "theta5",
    "spring_k", "natural_length", "mu",
)


def rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def perturbed(rng: np.random.Generator):
    base = default_parameters()
    factors = rng.uniform(0.9, 1.1, size=len(PERTURBED_FIELDS))
    return base.with_values(
        **{name: getattr(base, name) * f for name, f in zip(PERTURBED_FIELDS, factors)}
    )


def both_routes(p, zeta):
    """Solve both ways; returns None when either route is ill-posed."""
    try:
        sol = solve_balance(p, zeta)
    except SingularSystemError:
        return None
    if not sol.sign_consistent:
        return None
    state = full_equilibrium(p, zeta, sol.sign_beta3)
    if not state.consistent:
        return None
    return sol, state


def test_routes_agree_at_reference_directions(defaults):
    for zeta_deg in (-25.0, -15.0, -5.0, 0.0, 5.0, 12.0, 19.0, 30.0, 55.0):
        pair = both_routes(defaults, math.radians(zeta_deg))
        assert pair is not None, f"ill-posed at {zeta_deg} deg"
        sol, state = pair
        assert rel(sol.xi_b, state.xi) < 1e-11, zeta_deg
        assert rel(sol.beta_3b, state.beta_3) < 1e-11, zeta_deg


def test_raw_route_recovers_the_coupling(defaults):
    # The slotted strut force must relate to the coupler force through
    # the same transmission factor the aggregated route uses.
    for zeta_deg in (-20.0, -8.0, 0.0, 8.0, 16.0):
        pair = both_routes(defaults, math.radians(zeta_deg))
        assert pair is not None
        sol, state = pair
        lam = friction_coupling(defaults, sol.sign_beta3)
        assert rel(state.beta_6, lam * state.beta_3) < 1e-10


def test_raw_residual_is_tiny(defaults):
    state = full_equilibrium(defaults, 0.0)
    assert state.residual < 1e-12
    assert state.consistent


def test_raw_friction_sign_opposes_strut_force(defaults):
    sol = solve_balance(defaults, 0.0)
    state = full_equilibrium(defaults, 0.0, sol.sign_beta3)
    assert state.friction_sign == -sol.sign_beta3


def test_raw_route_without_hint(defaults):
    hinted = full_equilibrium(defaults, 0.0, solve_balance(defaults, 0.0).sign_beta3)
    free = full_equilibrium(defaults, 0.0)
    assert rel(hinted.xi, free.xi) < 1e-12


@settings(max_examples=60)
@given(st.integers(min_value=0, max_value=10_000), st.floats(min_value=-0.55, max_value=1.6))
def test_routes_agree_on_perturbed_linkages(seed, zeta):
    p = perturbed(np.random.default_rng(seed))
    pair = both_routes(p, zeta)
    if pair is None:
        return
    sol, state = pair
    assert rel(sol.xi_b, state.xi) < 1e-9
    assert rel(sol.beta_3b, state.beta_3) < 1e-9


def test_joint_reactions_balance_the_tip_load(defaults):
    # Sanity on the raw state itself: summing the member balances must
    # reproduce the applied tip force components on the left strut.
    zeta = math.radians(5.0)
    state = full_equilibrium(defaults, zeta)
    p = defaults
    s3, c3 = math.sin(p.theta3), math.cos(p.theta3)
    gamma = (p.l4 * math.cos(zeta) - p.l3 * math.sin(p.theta2 + zeta)) / (
        p.l2 * math.sin(p.theta2 + p.theta3)
    )
    fx = state.f_r1[0] + state.xi * (gamma * s3 + math.sin(zeta)) + state.beta_3 * s3
    fy = state.f_r1[1] + state.xi * (gamma * c3 + math.cos(zeta)) + state.beta_3 * c3
    assert abs(fx) < 1e-9
    assert abs(fy) < 1e-9


def test_raw_route_singular_matrix(defaults):
    p = defaults.with_values(theta2=0.0, theta3=0.0, mu=0.0)
    # theta2 = -theta3 = 0 collapses the coupler geometry; the raw matrix
    # degenerates as well (division by sin(theta2+theta3) happens first).
    with pytest.raises((SingularSystemError, ZeroDivisionError)):
        full_equilibrium(p, 0.3)
