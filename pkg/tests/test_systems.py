import math

import numpy as np
import pytest

from core.brackets import gradient
from core.dynamics import conventional_rhs, extended_rhs
from core.exceptions import ConfigError, DomainError
from core.models import CENTRAL_DIFFERENCE, GradientScheme
from core.phase_space import ConventionalState, ExtendedState
from core.systems import (
    SinusoidalCoupling, build_system, energy_branch, kepler, parse_coupling, parse_potential,
    register_system, relativistic_conventional, relativistic_extended
)

FD = GradientScheme(mode=CENTRAL_DIFFERENCE)

SHIPPED = [
    ("kepler", {}),
    ("kepler-timedep", {}),
    ("relativistic", {'potential': 'none'}),
    ("relativistic", {'potential': 'coulomb:0.5', 'm': 2.0, 'c': 1.5}),
    ("free", {'n': 2, 'm': 3.0}),
]


def _random_points(count, seed=7):
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < count:
        q = rng.uniform(-2.0, 2.0, 2)
        if np.linalg.norm(q) < 0.3:
            continue
        points.append(ExtendedState(q=q, p=rng.uniform(-2.0, 2.0, 2), t=rng.uniform(0.0, 2.0 * math.pi),
                                    e=rng.uniform(-2.0, 2.0)))
    return points


def test_kepler_energy_at_circular_state():
    H = kepler(1.0)
    assert H.eval(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 0.0) == -0.5


@pytest.mark.parametrize("name, params", SHIPPED)
def test_analytic_partials_match_central_differences(name, params):
    He = build_system(name, params).extended
    for x in _random_points(100):
        analytic = gradient(He, x).as_vector()
        numeric = gradient(He, x, FD).as_vector()
        assert np.all(np.abs(analytic - numeric) <= 1e-5 * np.maximum(1.0, np.abs(analytic))), (name, x)


def test_kepler_equations_of_motion():
    H = kepler(1.0)
    dq, dp, de = conventional_rhs(H, ConventionalState(q=[1.0, 0.0], p=[0.0, 1.0], t=0.0))
    assert dq.tolist() == [0.0, 1.0]
    assert dp.tolist() == [-1.0, 0.0]
    assert de == 0.0


def test_relativistic_energy_branch_and_gamma():
    He = relativistic_extended(m=1.0, c=1.0)
    q, p = np.zeros(2), np.array([0.6, 0.8])
    e = energy_branch(He, q, p, 0.0)
    assert e == pytest.approx(math.sqrt(2.0), abs=1e-15)
    assert abs(He.eval(q, p, 0.0, e)) <= 1e-15
    _, _, dt_ds, _ = extended_rhs(He, ExtendedState(q=q, p=p, t=0.0, e=e))
    assert abs(dt_ds - math.sqrt(2.0)) <= 1e-12


def test_energy_branch_matches_conventional_hamiltonian():
    V = parse_potential("coulomb:0.5")
    He = relativistic_extended(m=1.0, c=2.0, V=V)
    H = relativistic_conventional(m=1.0, c=2.0, V=V)
    for x in _random_points(100, seed=11):
        assert abs(energy_branch(He, x.q, x.p, x.t) - H.eval(x.q, x.p, x.t)) <= 1e-12


def test_sinusoidal_coupling():
    mu = parse_coupling("sin:0.1,1")
    assert isinstance(mu, SinusoidalCoupling)
    assert mu.value(math.pi / 2) == pytest.approx(1.1)
    assert mu.derivative(0.0) == pytest.approx(0.1)
    assert parse_coupling("const:2").value(5.0) == 2.0


@pytest.mark.parametrize("spec", ["foo", "const:x", "sin:1", "sin:a,b"])
def test_invalid_coupling(spec):
    with pytest.raises(ConfigError):
        parse_coupling(spec)


def test_invalid_potential():
    with pytest.raises(ConfigError):
        parse_potential("yukawa:1")


def test_kepler_singularity_raises_domain_error():
    H = kepler(1.0)
    with pytest.raises(DomainError):
        H.eval(np.zeros(2), np.array([1.0, 0.0]), 0.0)
    with pytest.raises(DomainError):
        H.dq(np.array([1e-9, 0.0]), np.zeros(2), 0.0)


def test_system_registry():
    with pytest.raises(ConfigError):
        build_system("pendulum")
    with pytest.raises(ConfigError):
        register_system("kepler", lambda: None)
    with pytest.raises(ConfigError):
        build_system("kepler", {'mass': 1.0})
    system = build_system("kepler", {'mu': 'const:2'})
    assert system.n == 2
    assert system.coupling.value(0.0) == 2.0
