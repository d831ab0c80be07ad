import math

import numpy as np
import pytest

from core.brackets import gradient
from core.dynamics import extended_rhs, integrate_extended, monitor
from core.exceptions import ConfigError, DomainError, SymmetryError
from core.functions import CoordinateFunction
from core.models import ANALYTIC, GradientScheme, StepperConfig
from core.noether import (
    Invariant, PointTransformGenerator, admit_invariant, angular_momentum, available_invariants, build_invariant,
    canonicity_check, commutation_residuals, conventional_subgroup_transform, finite_transform,
    flow_commutation_check, gauge_generator, hamiltonian_invariant, identity_generator, infinitesimal_transform,
    register_invariant, rotation_generator, rotation_matrix, runge_lenz, runge_lenz_extended,
    scaled_rotation_decomposition
)
from core.phase_space import ExtendedState
from core.sampling import OnShellSampler
from core.systems import build_system

EXACT = GradientScheme(mode=ANALYTIC)


def test_runge_lenz_forms_agree_on_shell(eccentric_state):
    assert runge_lenz(1.0)(eccentric_state) == pytest.approx(-0.44, abs=1e-12)
    assert runge_lenz_extended()(eccentric_state) == pytest.approx(-0.44, abs=1e-12)


def test_runge_lenz_singularity():
    with pytest.raises(DomainError):
        runge_lenz(1.0)(ExtendedState(q=[0.0, 0.0], p=[1.0, 0.0]))


def test_runge_lenz_extended_infinitesimal_rules():
    x = ExtendedState(q=[1.0, 0.0], p=[0.0, 1.0], t=0.0, e=-0.5)
    moved, delta = infinitesimal_transform(runge_lenz_extended(), x, 0.01)
    assert np.allclose(delta.dq, [0.0, -0.01], atol=1e-15)
    assert np.allclose(delta.dp, [0.0, 0.0], atol=1e-15)
    assert delta.dt == pytest.approx(0.01, abs=1e-15)
    assert delta.de == 0.0
    assert moved.t == pytest.approx(0.01, abs=1e-15)


def test_hamiltonian_generator_is_one_euler_step(kepler_system, eccentric_state):
    He = kepler_system.extended
    ds = 1e-3
    shifted, _ = infinitesimal_transform(He, eccentric_state, ds)
    dq, dp, dt, de = extended_rhs(He, eccentric_state)
    x = eccentric_state
    euler = ExtendedState(q=x.q + ds * dq, p=x.p + ds * dp, t=x.t + ds * dt, e=x.e + ds * de)
    assert np.array_equal(shifted.as_vector(), euler.as_vector())


def test_finite_rotation_by_angular_momentum(circular_state):
    rotated = finite_transform(angular_momentum(), circular_state, math.pi / 2)
    assert np.allclose(rotated.q, [0.0, -1.0], atol=1e-9)
    assert np.allclose(rotated.p, [1.0, 0.0], atol=1e-9)
    assert rotated.t == circular_state.t
    assert rotated.e == circular_state.e


def test_finite_rotation_matches_closed_form(eccentric_state):
    angle = 0.8
    rotated = finite_transform(angular_momentum(), eccentric_state, angle)
    R = rotation_matrix(angle)
    assert np.allclose(rotated.q, R @ eccentric_state.q, atol=1e-9)
    assert np.allclose(rotated.p, R @ eccentric_state.p, atol=1e-9)


def test_finite_transform_identity_and_inverse(eccentric_state):
    L = angular_momentum()
    assert finite_transform(L, eccentric_state, 0.0) is eccentric_state
    there = finite_transform(runge_lenz_extended(), eccentric_state, 0.05)
    back = finite_transform(runge_lenz_extended(), there, -0.05)
    assert np.allclose(back.as_vector(), eccentric_state.as_vector(), atol=1e-10)


def test_hamiltonian_flow_equals_dynamics(kepler_system, eccentric_state, rk4):
    He = kepler_system.extended
    flowed = finite_transform(He, eccentric_state, 0.5, rk4)
    evolved = integrate_extended(He, eccentric_state, 0.5, rk4).final
    assert np.array_equal(flowed.as_vector(), evolved.as_vector())


def test_symmetry_keeps_states_on_shell(kepler_system, eccentric_state):
    moved = finite_transform(runge_lenz_extended(), eccentric_state, 0.05)
    assert abs(kepler_system.extended(moved)) <= 1e-12
    assert moved.t != eccentric_state.t


def test_finite_and_infinitesimal_agree_to_second_order(circular_state):
    invariant = runge_lenz_extended()
    ratios = []
    for eps in (1e-2, 1e-3, 1e-4):
        exact = finite_transform(invariant, circular_state, eps)
        first_order, _ = infinitesimal_transform(invariant, circular_state, eps)
        ratios.append(np.max(np.abs(exact.as_vector() - first_order.as_vector())) / eps ** 2)
    assert max(ratios) / min(ratios) <= 2.0
    assert ratios[-1] == pytest.approx(0.5, rel=0.05)


def test_scaled_rotation_decomposition(circular_state):
    deps = 1e-3
    rotation = scaled_rotation_decomposition(circular_state, deps)
    _, delta = infinitesimal_transform(runge_lenz_extended(), circular_state, deps)
    assert rotation.delta_t == deps
    assert rotation.delta_phi == 0.0
    assert rotation.delta_psi == deps
    assert np.allclose(rotation.matrix @ circular_state.q, circular_state.q + delta.dq, atol=1e-15)
    assert np.max(np.abs(rotation.exponential_matrix() - rotation.matrix)) <= deps ** 2


def test_scaled_rotation_requires_plane():
    with pytest.raises(ValueError):
        scaled_rotation_decomposition(ExtendedState(q=[1.0], p=[0.0]), 1e-3)


def test_canonicity_check(kepler_system):
    sampler = OnShellSampler(kepler_system.hamiltonian, seed=42)
    assert canonicity_check(angular_momentum(), kepler_system.extended, sampler, 32, 1e-10).passed
    report = canonicity_check(CoordinateFunction('q', 0, 2), kepler_system.extended, sampler, 32, 1e-5)
    assert not report.passed
    assert report.to_dict()['statistics']['count'] == 32


@pytest.mark.parametrize("invariant, eps", [(angular_momentum(), 0.3), (runge_lenz_extended(), 1e-2)])
def test_symmetries_map_solutions_to_solutions(kepler_system, eccentric_state, rk4, invariant, eps):
    assert flow_commutation_check(invariant, kepler_system.extended, eccentric_state, eps, 1.0, rk4) <= 1e-8


def test_weakly_commuting_generator_needs_alignment(kepler_system, eccentric_state, rk4):
    result = commutation_residuals(runge_lenz_extended(), kepler_system.extended, eccentric_state, 1e-2, 1.0, rk4)
    assert result.alignment_shift != 0.0
    assert result.aligned < result.raw


def test_control_does_not_commute(kepler_system, eccentric_state, rk4):
    control = CoordinateFunction('q', 0, 2)
    assert flow_commutation_check(control, kepler_system.extended, eccentric_state, 0.3, 1.0, rk4) >= 1e-3


def test_dynamics_commutes_with_itself(kepler_system, eccentric_state, rk4):
    He = kepler_system.extended
    assert flow_commutation_check(He, He, eccentric_state, 0.3, 1.0, rk4) <= 1e-9


def test_identity_point_transform(eccentric_state):
    new, T, shift = conventional_subgroup_transform(identity_generator(2), eccentric_state)
    assert np.array_equal(new.as_vector(), eccentric_state.as_vector())
    assert T == eccentric_state.t
    assert shift == 0.0


def test_rotation_point_transform(eccentric_state):
    angle = 0.4
    new, _, shift = conventional_subgroup_transform(rotation_generator(angle), eccentric_state)
    R = rotation_matrix(angle)
    assert np.allclose(new.q, R @ eccentric_state.q, atol=1e-14)
    assert np.allclose(new.p, R @ eccentric_state.p, atol=1e-14)
    assert shift == 0.0
    # Drehimpuls bleibt erhalten
    assert angular_momentum()(new) == pytest.approx(angular_momentum()(eccentric_state), abs=1e-14)


def test_gauge_point_transform_shifts_energy(eccentric_state):
    new, T, shift = conventional_subgroup_transform(gauge_generator(2, 0.5), eccentric_state)
    assert shift == 0.5
    assert new.e == pytest.approx(eccentric_state.e + 0.5)
    assert np.array_equal(new.q, eccentric_state.q)
    assert np.array_equal(new.p, eccentric_state.p)


def test_singular_point_transform(eccentric_state):
    collapse = PointTransformGenerator(g=lambda q, t: np.array([q[0] + q[1], q[0] + q[1]]),
                                       jacobian=lambda q, t: np.ones((2, 2)))
    with pytest.raises(DomainError):
        conventional_subgroup_transform(collapse, eccentric_state)


def test_invariant_registry(kepler_system, timedep_system):
    assert build_invariant("angular-momentum", kepler_system, gate=True).name == "angular-momentum"
    assert build_invariant("runge-lenz", kepler_system).function.mu == 1.0
    with pytest.raises(ConfigError):
        build_invariant("momentum-squared", kepler_system)
    with pytest.raises(ConfigError):
        build_invariant("angular-momentum", build_system("free", {'n': 1}))
    with pytest.raises(ConfigError):
        register_invariant("q1", lambda system: None)
    with pytest.raises(SymmetryError):
        build_invariant("runge-lenz", timedep_system, gate=True)


def test_gate_can_be_overridden(kepler_system):
    control = build_invariant("q1", kepler_system, gate=False)
    with pytest.raises(SymmetryError):
        admit_invariant(control, kepler_system)
    report = admit_invariant(control, kepler_system, enforce=False)
    assert not report.passed
    assert report.statistics.count == 32


def test_gate_is_on_by_default(kepler_system, timedep_system):
    invariant = build_invariant("runge-lenz", kepler_system)
    assert invariant.gate_report.passed
    assert invariant.gate_report.statistics.count == 32
    with pytest.raises(SymmetryError):
        build_invariant("q1", kepler_system)
    assert build_invariant("q1", kepler_system, gate=False).gate_report is None
    report = build_invariant("energy", timedep_system, enforce=False).gate_report
    assert not report.passed


@pytest.mark.parametrize("name", available_invariants())
def test_time_shift_flag_matches_energy_derivative(kepler_system, eccentric_state, name):
    invariant = build_invariant(name, kepler_system, gate=False)
    assert invariant.depends_on_e == (gradient(invariant, eccentric_state).de != 0.0)


def test_gate_rejects_wrong_time_shift_flag(kepler_system):
    mislabelled = Invariant(CoordinateFunction('e', n=2), name="energy", depends_on_e=False)
    with pytest.raises(ConfigError):
        admit_invariant(mislabelled, kepler_system)


@pytest.mark.parametrize("factory, eps", [
    (angular_momentum, 0.3),
    (angular_momentum, -1.0),
    (lambda: runge_lenz(1.0), 0.05),
    (runge_lenz_extended, 0.05),
    (runge_lenz_extended, -0.02),
])
def test_finite_transform_conserves_its_generator(eccentric_state, factory, eps):
    invariant = factory()
    moved = finite_transform(invariant, eccentric_state, eps, scheme=EXACT)
    assert invariant(moved) == pytest.approx(invariant(eccentric_state), abs=1e-10)


def test_hamiltonian_flow_conserves_hamiltonian(kepler_system, eccentric_state):
    invariant = hamiltonian_invariant(kepler_system.extended)
    moved = finite_transform(invariant, eccentric_state, 0.3, scheme=EXACT)
    assert abs(invariant(moved)) <= 1e-10
    assert moved.t == pytest.approx(eccentric_state.t + 0.3, abs=1e-12)


def test_runge_lenz_extended_drift_along_extended_orbit(kepler_system, eccentric_state, rk4):
    traj = integrate_extended(kepler_system.extended, eccentric_state, 2 * math.pi, rk4)
    drift = monitor(traj, runge_lenz_extended(), "runge-lenz-extended")
    assert drift.initial == pytest.approx(-0.44, abs=1e-12)
    assert drift.max_abs_deviation <= 1e-8


@pytest.mark.parametrize("angle", [0.0, math.pi / 3, math.pi, 1.5 * math.pi, 2 * math.pi])
def test_rotation_flow_over_full_turn(eccentric_state, angle):
    moved = finite_transform(angular_momentum(), eccentric_state, angle, scheme=EXACT)
    R = rotation_matrix(angle)
    assert np.allclose(moved.q, R @ eccentric_state.q, atol=1e-9)
    assert np.allclose(moved.p, R @ eccentric_state.p, atol=1e-9)
    assert moved.t == eccentric_state.t
    assert moved.e == eccentric_state.e


def test_gauge_term_requires_its_gradient():
    with pytest.raises(ConfigError):
        PointTransformGenerator(g=lambda q, t: np.array(q, dtype=float), jacobian=lambda q, t: np.eye(2),
                                h=lambda q, t: q[0] * t)


def test_flow_with_custom_stepper(eccentric_state):
    cfg = StepperConfig(step=1e-4)
    rotated = finite_transform(angular_momentum(), eccentric_state, 0.2, cfg)
    assert np.allclose(rotated.q, rotation_matrix(0.2) @ eccentric_state.q, atol=1e-12)
