import numpy as np
import pytest

from core.brackets import conservation_scan, extended_poisson, gradient, total_time_derivative
from core.exceptions import ConfigError
from core.functions import CallableFunction, CoordinateFunction
from core.models import ANALYTIC, CENTRAL_DIFFERENCE, GradientScheme, SamplerBounds
from core.noether import angular_momentum, runge_lenz, runge_lenz_extended
from core.phase_space import ExtendedState
from core.sampling import OnShellSampler

FD = GradientScheme(mode=CENTRAL_DIFFERENCE)
EXACT = GradientScheme(mode=ANALYTIC)

q1, q2 = CoordinateFunction('q', 0, 2), CoordinateFunction('q', 1, 2)
p1, p2 = CoordinateFunction('p', 0, 2), CoordinateFunction('p', 1, 2)
t, e = CoordinateFunction('t', n=2), CoordinateFunction('e', n=2)

X = ExtendedState(q=[0.3, -1.1], p=[0.7, 0.2], t=1.5, e=-0.4)


@pytest.mark.parametrize("f, g, expected", [
    (q1, p1, 1.0),
    (p1, q1, -1.0),
    (q1, p2, 0.0),
    (q2, p2, 1.0),
    (t, e, -1.0),
    (e, t, 1.0),
    (q1, t, 0.0),
])
def test_canonical_brackets(f, g, expected):
    assert extended_poisson(f, g, X) == expected


def _polynomial(name, func):
    return CallableFunction(func, name=name)


F = _polynomial("f", lambda q, p, t, e: q[0] ** 2 * p[1] + t * e + q[1] * p[0] * e)
G = _polynomial("g", lambda q, p, t, e: p[0] ** 3 - q[1] * t + e ** 2 * q[0])
H = _polynomial("h", lambda q, p, t, e: q[0] * q[1] + p[0] * p[1] * t)


def test_antisymmetry_and_bilinearity():
    fg = extended_poisson(F, G, X, FD)
    assert extended_poisson(G, F, X, FD) == pytest.approx(-fg, abs=1e-8)
    combined = extended_poisson(2.0 * F + 3.0 * G, H, X, FD)
    separate = 2.0 * extended_poisson(F, H, X, FD) + 3.0 * extended_poisson(G, H, X, FD)
    assert combined == pytest.approx(separate, abs=1e-7)
    assert extended_poisson(F, F, X, FD) == pytest.approx(0.0, abs=1e-8)


def test_fd_gradient_matches_analytic(eccentric_state):
    for invariant in (angular_momentum(), runge_lenz(1.0), runge_lenz_extended()):
        analytic = gradient(invariant, eccentric_state).as_vector()
        numeric = gradient(invariant, eccentric_state, FD).as_vector()
        assert np.allclose(analytic, numeric, rtol=1e-5, atol=1e-8)


def test_bracket_with_lift_is_minus_total_derivative(timedep_system):
    He, H_conv = timedep_system.extended, timedep_system.hamiltonian
    invariant = runge_lenz(1.0)
    for x in OnShellSampler(H_conv, seed=3).draw(20):
        bracket = extended_poisson(He, invariant, x)
        assert bracket == pytest.approx(-total_time_derivative(invariant, H_conv, x), abs=1e-9)


@pytest.mark.parametrize("invariant", [angular_momentum(), runge_lenz(1.0), runge_lenz_extended()])
def test_kepler_invariants_commute_with_He(kepler_system, invariant):
    sampler = OnShellSampler(kepler_system.hamiltonian, seed=42)
    assert conservation_scan(invariant, kepler_system.extended, sampler, 100, FD).max <= 1e-5
    exact = conservation_scan(invariant, kepler_system.extended, sampler, 100, EXACT)
    assert exact.max <= 1e-10
    assert exact.count == 100
    assert exact.failures == 0


def test_control_fails(kepler_system):
    sampler = OnShellSampler(kepler_system.hamiltonian, seed=42)
    assert conservation_scan(q1, kepler_system.extended, sampler, 100, FD).max >= 1e-1


def test_runge_lenz_fails_for_time_dependent_coupling(timedep_system):
    sampler = OnShellSampler(timedep_system.hamiltonian, seed=42)
    assert conservation_scan(runge_lenz(1.0), timedep_system.extended, sampler, 100).max > 1e-3


def test_scan_is_deterministic(kepler_system):
    He = kepler_system.extended
    first = conservation_scan(q1, He, OnShellSampler(kepler_system.hamiltonian, seed=5), 50)
    second = conservation_scan(q1, He, OnShellSampler(kepler_system.hamiltonian, seed=5), 50)
    assert first.to_dict() == second.to_dict()


class _FixedSampler:
    def __init__(self, states):
        self.states = states

    def draw(self, count):
        return self.states[:count]


def test_singular_points_are_counted_as_failures(kepler_system, eccentric_state):
    singular = ExtendedState(q=[0.0, 0.0], p=[1.0, 0.0], t=0.0, e=0.0)
    stats = conservation_scan(runge_lenz(1.0), kepler_system.extended, _FixedSampler([eccentric_state, singular]), 2)
    assert stats.count == 1
    assert stats.failures == 1


def test_sampler_respects_bounds(kepler_system):
    states = OnShellSampler(kepler_system.hamiltonian, seed=1).draw(50)
    assert len(states) == 50
    for x in states:
        assert np.linalg.norm(x.q) >= 0.1
        assert abs(kepler_system.extended(x)) <= 1e-12


def test_sampler_gives_up_on_box_inside_singularity(kepler_system):
    tiny = SamplerBounds(q_min=-0.05, q_max=0.05, r_min=0.1)
    with pytest.raises(ConfigError):
        OnShellSampler(kepler_system.hamiltonian, tiny, seed=1).draw(5)


def test_scan_without_evaluable_points(kepler_system):
    singular = ExtendedState(q=[0.0, 0.0], p=[1.0, 0.0], t=0.0, e=0.0)
    stats = conservation_scan(runge_lenz(1.0), kepler_system.extended, _FixedSampler([singular]), 1)
    assert stats.count == 0
    assert stats.failures == 1
    assert np.isnan(stats.max)
