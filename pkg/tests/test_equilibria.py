"""Uninfected and infected equilibria: closed forms, roots, regimes."""

from dataclasses import replace

import numpy as np
import pytest

from conftest import bisect_root, draw_supercritical_params

from hcvdyn import (
    REGIME_NONE,
    REGIME_UNIQUE,
    SCENARIO_S1,
    SCENARIO_S2,
    DomainError,
    existence_regime,
    infected_equilibrium,
    infected_T_closed_form,
    residual_norm,
    uninfected_equilibrium,
)
from hcvdyn.equilibria import equilibrium_quadratic
from hcvdyn.model import derive_constants


def test_uninfected_reference_values():
    assert uninfected_equilibrium(SCENARIO_S1).state.T == pytest.approx(
        9800204.077382902, rel=1e-12
    )
    assert uninfected_equilibrium(SCENARIO_S2).state.T == pytest.approx(
        9950005.02512309, rel=1e-12
    )


def test_uninfected_matches_bisection_oracle():
    for params in (SCENARIO_S1, SCENARIO_S2):
        def f(T, params=params):
            return params.s + (params.r_T - params.d_T) * T - params.r_T / params.T_max * T * T

        root = bisect_root(f, 1.0, 10.0 * params.T_max)
        T0 = uninfected_equilibrium(params).state.T
        assert abs(T0 - root) <= 1e-10 * root


def test_uninfected_degenerate_branches():
    # Without proliferation the steady state is source over death.
    params = replace(SCENARIO_S1, r_T=0.0)
    assert uninfected_equilibrium(params).state.T == pytest.approx(
        params.s / params.d_T, rel=1e-15
    )
    # Without proliferation, death, or source there is nothing to balance.
    empty = replace(SCENARIO_S1, r_T=0.0, d_T=0.0, s=0.0)
    assert uninfected_equilibrium(empty).state.T == 0.0
    with pytest.raises(DomainError):
        uninfected_equilibrium(replace(SCENARIO_S1, r_T=0.0, d_T=0.0))


def test_uninfected_state_is_a_steady_state():
    point = uninfected_equilibrium(SCENARIO_S2)
    assert point.state.I == 0.0 and point.state.V == 0.0
    assert point.residual_norm <= 1e-9


def test_equilibrium_quadratic_reference_coefficients():
    a1, b1, d1 = equilibrium_quadratic(SCENARIO_S1, derive_constants(SCENARIO_S1))
    assert a1 == pytest.approx(-1.955356682232174e-07, rel=1e-12)
    assert b1 == pytest.approx(4.177570943392861, rel=1e-12)
    assert d1 == pytest.approx(-21785704.285714284, rel=1e-12)

    a2, b2, d2 = equilibrium_quadratic(SCENARIO_S2, derive_constants(SCENARIO_S2))
    assert a2 == pytest.approx(-6.9407545337000005e-06, rel=1e-12)
    assert b2 == pytest.approx(34.985757355000004, rel=1e-12)
    assert d2 == pytest.approx(-30714275.714285716, rel=1e-12)


def test_no_infected_equilibrium_below_threshold():
    report = infected_equilibrium(SCENARIO_S1)
    assert report.regime == REGIME_NONE
    assert report.candidates == ()


def test_unique_infected_equilibrium_reference_values():
    report = infected_equilibrium(SCENARIO_S2)
    assert report.regime == REGIME_UNIQUE
    (point,) = report.candidates
    assert point.state.T == pytest.approx(3908396.5694500306, rel=1e-10)
    assert point.state.I == pytest.approx(4441870.023766153, rel=1e-10)
    assert point.state.V == pytest.approx(8882851.673527552, rel=1e-10)
    assert point.residual_norm <= 1e-8
    # Production balance (1 - epsilon) p I* = c V* holds exactly.
    p_eff = (1.0 - SCENARIO_S2.epsilon) * SCENARIO_S2.p
    assert p_eff * point.state.I == pytest.approx(SCENARIO_S2.c * point.state.V, rel=1e-15)


def test_radical_closed_form_matches_root():
    report = infected_equilibrium(SCENARIO_S2)
    closed = infected_T_closed_form(SCENARIO_S2)
    assert closed == pytest.approx(report.candidates[0].state.T, rel=1e-9)
    assert report.closed_form_T == pytest.approx(closed, rel=1e-15)
    assert report.closed_form_rel_diff <= 1e-9


def test_random_supercritical_sets_have_verified_equilibria():
    rng = np.random.default_rng(20260814)
    for _ in range(30):
        params = draw_supercritical_params(rng)
        report = infected_equilibrium(params)
        assert report.regime == REGIME_UNIQUE
        (point,) = report.candidates
        assert point.state.strictly_positive
        assert point.residual_norm <= 1e-8
        # The T root satisfies the reduced quadratic to roundoff.
        a, b, d = equilibrium_quadratic(params, derive_constants(params))
        T = point.state.T
        scale = abs(a * T * T) + abs(b * T) + abs(d)
        assert abs(a * T * T + b * T + d) <= 1e-10 * scale


def test_existence_regime_reports_criteria_and_disagreements():
    report = existence_regime(SCENARIO_S2)
    assert report.regime == REGIME_UNIQUE
    assert report.r0 == pytest.approx(2.4877037105528053, rel=1e-12)
    assert report.criteria["r0_above_one"] is True
    # The constant-term criterion predicts no equilibrium here although a
    # verified one exists; the report flags that is a disagreement instead
    # of failing.
    assert report.criteria["constant_term_positive"] is False
    assert "constant_term_positive" in report.disagreements

    subcritical = existence_regime(SCENARIO_S1)
    assert subcritical.regime == REGIME_NONE
    assert subcritical.criteria["r0_above_one"] is False
    assert "r0_above_one" not in subcritical.disagreements


def test_rejected_roots_are_reported():
    report = infected_equilibrium(SCENARIO_S1)
    # The quadratic still has real roots; each fails range or positivity.
    assert report.rejected_T_roots
    constants = derive_constants(SCENARIO_S1)
    for T in report.rejected_T_roots:
        in_range = 0.0 < T <= SCENARIO_S1.T_max * (1.0 + 1e-12)
        I = (constants.A / SCENARIO_S1.r_I - 1.0) * T + SCENARIO_S1.T_max * (
            1.0 - constants.delta / SCENARIO_S1.r_I
        )
        assert not in_range or I <= 0.0


def test_closed_form_requires_nonzero_curvature():
    # A = r_I - r_T makes H vanish exactly and degenerates the radical.
    params = replace(
        SCENARIO_S1, r_T=0.1, r_I=0.6, beta=1e-7, p=1.0, c=2.0, eta=0.0, epsilon=0.0, T_max=1e7
    )
    constants = derive_constants(params)
    assert constants.A == 0.5
    assert constants.H == 0.0
    assert constants.F is None
    with pytest.raises(DomainError):
        infected_T_closed_form(params)


def test_states_rejected_outside_cell_cap():
    # A quadratic root above T_max is not a biologically admissible T*.
    rng = np.random.default_rng(5)
    for _ in range(10):
        params = draw_supercritical_params(rng)
        report = infected_equilibrium(params)
        for point in report.candidates:
            assert point.state.T <= params.T_max * (1.0 + 1e-12)
