import logging
import math

import numpy as np
import pytest

from core.dynamics import integrate_conventional, integrate_extended, monitor, order_check
from core.exceptions import IntegrationError
from core.functions import CoordinateFunction
from core.models import RK45_ADAPTIVE, StepperConfig
from core.noether import angular_momentum, runge_lenz
from core.phase_space import ConventionalState, ExtendedState, ParameterKind, lift, project
from core.systems import build_system


def test_circular_orbit_closes_after_one_period(kepler_system, circular_state, rk4):
    traj = integrate_conventional(kepler_system.hamiltonian, project(circular_state), 2.0 * math.pi, rk4)
    assert traj.parameter_kind == ParameterKind.TIME_T
    assert traj.params[-1] == 2.0 * math.pi
    assert np.allclose(traj.final.q, [1.0, 0.0], atol=1e-8)
    assert np.allclose(traj.final.p, [0.0, 1.0], atol=1e-8)
    # e ist der laufende Wert von H
    assert np.all(traj.residuals == 0.0)


def test_extended_run_stays_on_shell(kepler_system, eccentric_state, rk4):
    traj = integrate_extended(kepler_system.extended, eccentric_state, 2.0 * math.pi, rk4)
    assert traj.parameter_kind == ParameterKind.EVOLUTION_S
    assert np.max(np.abs(traj.residuals)) <= 1e-10


def test_gauge_equivalence_of_both_parametrizations(kepler_system, eccentric_state, rk4):
    extended = integrate_extended(kepler_system.extended, eccentric_state, 2.0 * math.pi, rk4)
    conventional = integrate_conventional(kepler_system.hamiltonian, project(eccentric_state), 2.0 * math.pi, rk4)
    assert np.array_equal(extended.params, conventional.params)
    assert np.max(np.abs(extended.q - conventional.q)) <= 1e-12
    assert np.max(np.abs(extended.p - conventional.p)) <= 1e-12
    assert np.max(np.abs(extended.t - extended.params)) <= 1e-10


def test_gauge_equivalence_time_dependent(timedep_system, rk4):
    x0 = lift(ConventionalState(q=[1.0, 0.0], p=[0.0, 1.2], t=0.0), timedep_system.hamiltonian)
    extended = integrate_extended(timedep_system.extended, x0, 2.0 * math.pi, rk4)
    conventional = integrate_conventional(timedep_system.hamiltonian, project(x0), 2.0 * math.pi, rk4)
    assert np.max(np.abs(extended.q - conventional.q)) <= 1e-9
    assert np.max(np.abs(extended.e - conventional.e)) <= 1e-9


def test_relativistic_time_runs_at_gamma(rk4):
    system = build_system("relativistic", {'n': 2})
    x0 = lift(ConventionalState(q=[0.0, 0.0], p=[0.6, 0.8], t=0.0), system.hamiltonian)
    traj = integrate_extended(system.extended, x0, 1.0, rk4)
    assert abs(traj.final.t - math.sqrt(2.0)) <= 1e-12
    assert np.allclose(traj.t, math.sqrt(2.0) * traj.params, atol=1e-12)


def test_off_shell_start_is_reported(kepler_system, circular_state, rk4, caplog):
    off_shell = circular_state.replace(e=0.0)
    with caplog.at_level(logging.WARNING, logger="core.dynamics"):
        traj = integrate_extended(kepler_system.extended, off_shell, 0.1, rk4)
    assert "Schale" in caplog.text
    # He bleibt beim Anfangswert
    assert np.allclose(traj.residuals, -0.5, atol=1e-10)


def test_runs_are_deterministic(kepler_system, eccentric_state, rk4):
    first = integrate_extended(kepler_system.extended, eccentric_state, 1.0, rk4)
    second = integrate_extended(kepler_system.extended, eccentric_state, 1.0, rk4)
    assert np.array_equal(first.states, second.states)


def test_invalid_span(kepler_system, eccentric_state, rk4):
    with pytest.raises(ValueError):
        integrate_extended(kepler_system.extended, eccentric_state, 0.0, rk4)


def test_max_steps_exceeded(kepler_system, eccentric_state):
    with pytest.raises(IntegrationError):
        integrate_extended(kepler_system.extended, eccentric_state, 1.0, StepperConfig(step=1e-3, max_steps=10))


def test_singularity_aborts_integration(kepler_system, rk4):
    with pytest.raises(IntegrationError):
        integrate_conventional(kepler_system.hamiltonian, ConventionalState(q=[0.0, 0.0], p=[1.0, 0.0]), 1.0, rk4)


def test_adaptive_stepper(kepler_system, circular_state):
    cfg = StepperConfig(method=RK45_ADAPTIVE, step=1e-2, abs_tol=1e-10, rel_tol=1e-10)
    traj = integrate_extended(kepler_system.extended, circular_state, 2.0 * math.pi, cfg)
    assert len(traj) > 2
    assert traj.params[-1] == pytest.approx(2.0 * math.pi)
    assert np.allclose(traj.final.q, [1.0, 0.0], atol=1e-6)


def test_monitor_reports_drift(kepler_system, eccentric_state, rk4):
    traj = integrate_extended(kepler_system.extended, eccentric_state, 2.0 * math.pi, rk4)
    L = monitor(traj, angular_momentum())
    assert L.quantity == "angular-momentum"
    assert L.initial == pytest.approx(-1.2)
    assert L.max_abs_deviation <= 1e-10
    A = monitor(traj, runge_lenz(1.0), "runge-lenz")
    assert A.initial == pytest.approx(-0.44, abs=1e-12)
    assert A.max_abs_deviation <= 1e-8
    # Anfangswert 0: relative Abweichung bezogen auf 1
    q2 = monitor(traj, CoordinateFunction('q', 1, 2))
    assert q2.initial == 0.0
    assert q2.max_rel_deviation == q2.max_abs_deviation > 1.0


def test_energy_not_conserved_with_time_dependent_coupling(timedep_system, rk4):
    x0 = lift(ConventionalState(q=[1.0, 0.0], p=[0.0, 1.2], t=0.0), timedep_system.hamiltonian)
    traj = integrate_extended(timedep_system.extended, x0, 2.0 * math.pi, rk4)
    assert monitor(traj, angular_momentum()).max_abs_deviation <= 1e-9
    assert monitor(traj, CoordinateFunction('e', n=2)).max_abs_deviation > 1e-3


def test_rk4_order(kepler_system, eccentric_state):
    result = order_check(kepler_system.extended, eccentric_state, 2.0 * math.pi, 1e-2)
    assert result.drift > result.drift_half > 0.0
    assert result.ratio >= 12.0


def test_extended_state_from_trajectory_sample(kepler_system, circular_state, rk4):
    traj = integrate_extended(kepler_system.extended, circular_state, 0.01, rk4)
    sample = traj[-1]
    assert isinstance(sample.state, ExtendedState)
    assert sample.param == pytest.approx(0.01)
