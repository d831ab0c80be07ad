import dataclasses

import numpy as np
import pytest

from core.phase_space import (
    ConventionalState, ExtendedState, ParameterKind, Trajectory, TrajectoryBuilder,
    constraint_residual, lift, project
)
from core.systems import free_particle, standard_lift


def test_extended_state_layout():
    x = ExtendedState.from_vector([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    assert x.n == 2
    assert x.q.tolist() == [1.0, 2.0]
    assert x.p.tolist() == [3.0, 4.0]
    assert (x.t, x.e) == (5.0, 6.0)
    assert x.as_vector().tolist() == [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]


def test_extended_state_is_immutable():
    x = ExtendedState(q=[1.0, 0.0], p=[0.0, 1.0], t=0.0, e=-0.5)
    with pytest.raises(ValueError):
        x.q[0] = 2.0
    with pytest.raises(dataclasses.FrozenInstanceError):
        x.t = 1.0


@pytest.mark.parametrize("q, p", [([1.0, 0.0], [0.0]), ([], [])])
def test_state_dimensions_must_match(q, p):
    with pytest.raises(ValueError):
        ExtendedState(q=q, p=p)
    with pytest.raises(ValueError):
        ConventionalState(q=q, p=p)


def test_state_rejects_non_finite_values():
    with pytest.raises(ValueError):
        ExtendedState(q=[np.nan], p=[0.0])
    with pytest.raises(ValueError):
        ExtendedState(q=[0.0], p=[0.0], e=np.inf)


def test_replace_and_dict_round_trip():
    x = ExtendedState(q=[1.0, 0.0], p=[0.0, 1.2], t=0.5, e=-0.28)
    assert x.replace(e=1.0).e == 1.0
    assert np.array_equal(ExtendedState.from_dict(x.to_dict()).as_vector(), x.as_vector())
    state = ConventionalState(q=[1.0], p=[2.0], t=3.0)
    assert ConventionalState.from_dict(state.to_dict()).to_dict() == state.to_dict()


def test_lift_free_particle_lands_on_shell():
    H = free_particle(n=1, m=1.0)
    x = lift(ConventionalState(q=[0.0], p=[2.0], t=0.0), H)
    assert x.e == 2.0
    assert constraint_residual(x, standard_lift(H)) == 0.0


def test_lift_kepler_eccentric(eccentric_state):
    assert eccentric_state.e == pytest.approx(-0.28, abs=1e-15)


def test_project_drops_energy(eccentric_state):
    state = project(eccentric_state)
    assert isinstance(state, ConventionalState)
    assert state.q.tolist() == [1.0, 0.0]
    assert state.p.tolist() == [0.0, 1.2]
    assert state.t == 0.0


def _linear_trajectory(kind=ParameterKind.EVOLUTION_S):
    params = np.linspace(0.0, 1.0, 11)
    # q = s, p = 1, t = 2 s, e = 0
    states = np.column_stack((params, np.ones_like(params), 2.0 * params, np.zeros_like(params)))
    return Trajectory(kind, params, states)


def test_trajectory_columns():
    traj = _linear_trajectory()
    assert traj.n == 1
    assert len(traj) == 11
    assert traj.q[:, 0].tolist() == traj.params.tolist()
    assert np.all(traj.p == 1.0)
    assert traj.final.t == 2.0
    assert traj.initial.q.tolist() == [0.0]


def test_trajectory_requires_increasing_params():
    with pytest.raises(ValueError):
        Trajectory(ParameterKind.TIME_T, [0.0, 0.0], np.zeros((2, 4)))


def test_builder_rejects_out_of_order_samples():
    builder = TrajectoryBuilder(ParameterKind.TIME_T)
    builder.append(0.0, ExtendedState(q=[0.0], p=[0.0]))
    with pytest.raises(ValueError):
        builder.append(0.0, ExtendedState(q=[1.0], p=[0.0]))
    with pytest.raises(ValueError):
        builder.append(1.0, ExtendedState(q=[1.0, 2.0], p=[0.0, 0.0]))
    assert len(builder) == 1


def test_resample_reproduces_linear_data():
    traj = _linear_trajectory().resample([0.25, 0.5, 0.75])
    assert np.allclose(traj.q[:, 0], [0.25, 0.5, 0.75], atol=1e-12)
    assert np.allclose(traj.t, [0.5, 1.0, 1.5], atol=1e-12)
    assert traj.residuals is None


def test_resample_outside_range_fails():
    with pytest.raises(ValueError):
        _linear_trajectory().resample([1.5])


def test_resample_at_times_uses_time_column():
    traj = _linear_trajectory().resample_at_times([0.5, 1.0])
    assert traj.parameter_kind == ParameterKind.TIME_T
    assert np.allclose(traj.q[:, 0], [0.25, 0.5], atol=1e-12)
