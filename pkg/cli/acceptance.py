#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Abnahmekriterien als ausführbare Prüfungen.
Jede Prüfung trägt ihre Urteile in einen gemeinsamen CheckReport ein. Die langen
Kepler-Läufe werden nur einmal integriert und von mehreren Prüfungen verwendet.
"""

import logging
import math
import time
from functools import cached_property

import numpy as np

from core.brackets import conservation_scan
from core.dynamics import extended_rhs, integrate_conventional, integrate_extended, monitor, order_check
from core.functions import CoordinateFunction
from core.models import ANALYTIC, CENTRAL_DIFFERENCE, RK4_FIXED, CheckReport, GradientScheme, StepperConfig
from core.noether import (
    angular_momentum, commutation_residuals, finite_transform, infinitesimal_transform, rotation_matrix,
    runge_lenz, runge_lenz_extended, scaled_rotation_decomposition
)
from core.phase_space import ConventionalState, ExtendedState, lift, project
from core.sampling import OnShellSampler
from core.systems import build_system, energy_branch

logger = logging.getLogger(__name__)

ECCENTRIC = {'q': (1.0, 0.0), 'p': (0.0, 1.2)}
CIRCULAR = {'q': (1.0, 0.0), 'p': (0.0, 1.0)}
LONG_SPAN = 20.0 * math.pi
STEP = 1e-3
ORDER_STEP = 1e-2
SCAN_COUNT = 100


class _Runs:
    """Gemeinsam genutzte Systeme und Trajektorien"""

    def __init__(self, seed):
        self.seed = 42 if seed is None else seed
        self.cfg = StepperConfig(method=RK4_FIXED, step=STEP)
        self.kepler = build_system("kepler")
        self.eccentric = lift(ConventionalState(t=0.0, **ECCENTRIC), self.kepler.hamiltonian)
        self.circular = lift(ConventionalState(t=0.0, **CIRCULAR), self.kepler.hamiltonian)

    @cached_property
    def extended_kepler(self):
        return integrate_extended(self.kepler.extended, self.eccentric, LONG_SPAN, self.cfg)

    @cached_property
    def conventional_kepler(self):
        return integrate_conventional(self.kepler.hamiltonian, project(self.eccentric), LONG_SPAN, self.cfg)

    @cached_property
    def timedep_kepler(self):
        system = build_system("kepler-timedep")
        x0 = lift(ConventionalState(t=0.0, **ECCENTRIC), system.hamiltonian)
        return integrate_extended(system.extended, x0, LONG_SPAN, self.cfg)


def _max_abs(values) -> float:
    return float(np.max(np.abs(values)))


def check_constraint_conservation(report: CheckReport, runs: _Runs):
    run = runs.extended_kepler
    report.add_verdict("c1_constraint_max_abs_He", _max_abs(run.residuals), 1e-8)
    order = order_check(runs.kepler.extended, runs.eccentric, LONG_SPAN, ORDER_STEP)
    report.symmetry['order_check'] = order.to_dict()
    report.add_verdict("c1_order_ratio", order.ratio, 12.0, ">=")


def check_gauge_equivalence(report: CheckReport, runs: _Runs):
    extended, conventional = runs.extended_kepler, runs.conventional_kepler
    if not np.array_equal(extended.params, conventional.params):
        extended = extended.resample_at_times(conventional.params)
    width = 2 * extended.n + 1
    report.add_verdict("c2_gauge_max_abs_qpt",
                       _max_abs(extended.states[:, :width] - conventional.states[:, :width]), 1e-8)
    report.add_verdict("c2_max_abs_t_minus_s", _max_abs(runs.extended_kepler.t - runs.extended_kepler.params), 1e-8)


def check_angular_momentum(report: CheckReport, runs: _Runs):
    L = angular_momentum()
    autonomous = monitor(runs.extended_kepler, L, "angular-momentum:kepler")
    timedep = monitor(runs.timedep_kepler, L, "angular-momentum:kepler-timedep")
    energy = monitor(runs.timedep_kepler, CoordinateFunction('e', n=2), "energy:kepler-timedep")
    report.drifts.extend([autonomous, timedep, energy])
    report.add_verdict("c3_angular_momentum_drift_autonomous", autonomous.max_abs_deviation, 1e-8)
    report.add_verdict("c3_angular_momentum_drift_timedep", timedep.max_abs_deviation, 1e-8)
    report.add_verdict("c3_energy_drift_timedep", energy.max_abs_deviation, 1e-3, ">=")


def check_runge_lenz(report: CheckReport, runs: _Runs):
    conventional_form, extended_form = runge_lenz(1.0), runge_lenz_extended()
    report.add_verdict("c4_runge_lenz_value_error", abs(conventional_form(runs.eccentric) + 0.44), 1e-12)
    drift = monitor(runs.extended_kepler, conventional_form, "runge-lenz:kepler")
    report.drifts.append(drift)
    report.add_verdict("c4_runge_lenz_drift", drift.max_abs_deviation, 1e-7)
    # auf der konventionellen Bahn ist e = H exakt
    differences = [conventional_form(sample.state) - extended_form(sample.state)
                   for sample in runs.conventional_kepler]
    report.add_verdict("c4_runge_lenz_forms_max_diff", _max_abs(differences), 1e-12)


def check_noether_gate(report: CheckReport, runs: _Runs):
    He = runs.kepler.extended
    sampler = OnShellSampler(runs.kepler.hamiltonian, seed=runs.seed)
    candidates = (("angular-momentum", angular_momentum()),
                  ("runge-lenz", runge_lenz(1.0)),
                  ("runge-lenz-extended", runge_lenz_extended()))
    schemes = ((GradientScheme(mode=CENTRAL_DIFFERENCE), 1e-5), (GradientScheme(mode=ANALYTIC), 1e-10))
    for name, invariant in candidates:
        for scheme, tol in schemes:
            stats = conservation_scan(invariant, He, sampler, SCAN_COUNT, scheme)
            report.brackets[f"{name}/{scheme.mode}"] = stats
            report.add_verdict(f"c5_bracket_{name}_{scheme.mode}", stats.max, tol)
    control = conservation_scan(CoordinateFunction('q', 0, 2), He, sampler, SCAN_COUNT, schemes[0][0])
    report.brackets["q1/central_difference"] = control
    report.add_verdict("c5_bracket_q1_control", control.max, 1e-1, ">=")


def check_symmetry_rules(report: CheckReport, runs: _Runs):
    x = runs.circular
    invariant = runge_lenz_extended()
    deps = 1e-3
    _, delta = infinitesimal_transform(invariant, x, deps)
    rotation = scaled_rotation_decomposition(x, deps)
    report.symmetry['scaled_rotation'] = rotation.to_dict()
    report.add_verdict("c6_delta_t_equals_eps_q1", abs(delta.dt - deps * x.q[0]), 1e-15)
    report.add_verdict("c6_scaled_rotation_on_q", _max_abs(rotation.matrix @ x.q - (x.q + delta.dq)), 1e-15)
    report.add_verdict("c6_exponential_form", _max_abs(rotation.exponential_matrix() - rotation.matrix), deps ** 2)

    ratios = []
    for eps in (1e-2, 1e-3, 1e-4):
        exact = finite_transform(invariant, x, eps)
        first_order, _ = infinitesimal_transform(invariant, x, eps)
        ratios.append(_max_abs(exact.as_vector() - first_order.as_vector()) / eps ** 2)
    report.symmetry['second_order_ratios'] = ratios
    report.add_verdict("c6_second_order_ratio_spread", max(ratios) / min(ratios), 2.0)


def check_flow_commutation(report: CheckReport, runs: _Runs):
    He = runs.kepler.extended
    cases = (("angular-momentum", angular_momentum(), 0.3, 1e-8, "<="),
             ("runge-lenz-extended", runge_lenz_extended(), 1e-2, 1e-8, "<="),
             ("q1", CoordinateFunction('q', 0, 2), 0.3, 1e-3, ">="))
    results = {}
    for name, invariant, eps, tol, comparison in cases:
        result = commutation_residuals(invariant, He, runs.eccentric, eps, 1.0, runs.cfg)
        results[name] = result.to_dict()
        report.add_verdict(f"c7_commutation_{name}", result.aligned, tol, comparison)
    report.symmetry['commutation'] = results


def check_finite_rotation(report: CheckReport, runs: _Runs):
    x = runs.circular
    angle = math.pi / 2
    rotated = finite_transform(angular_momentum(), x, angle)
    R = rotation_matrix(angle)
    expected = ExtendedState(q=R @ x.q, p=R @ x.p, t=x.t, e=x.e)
    report.add_verdict("c8_finite_rotation", _max_abs(rotated.as_vector() - expected.as_vector()), 1e-9)


def check_relativistic(report: CheckReport, runs: _Runs):
    free = build_system("relativistic", {'m': 1.0, 'c': 1.0, 'potential': 'none', 'n': 2})
    x = lift(ConventionalState(q=(0.0, 0.0), p=(0.6, 0.8), t=0.0), free.hamiltonian)
    _, _, dt_ds, _ = extended_rhs(free.extended, x)
    report.add_verdict("c9_gamma", abs(dt_ds - math.sqrt(2.0)), 1e-12)

    rng = np.random.default_rng(runs.seed)
    worst = 0.0
    for _ in range(SCAN_COUNT):
        q, p, t = rng.uniform(-2.0, 2.0, 2), rng.uniform(-2.0, 2.0, 2), rng.uniform(0.0, 2.0 * math.pi)
        e = energy_branch(free.extended, q, p, t)
        closed_form = math.sqrt(float(np.dot(p, p)) + 1.0)
        worst = max(worst, abs(e - closed_form), abs(free.extended.eval(q, p, t, e)))
    report.add_verdict("c9_energy_branch", worst, 1e-12)

    # gebundene Bahn im Coulomb-Feld
    bound = build_system("relativistic", {'m': 1.0, 'c': 1.0, 'potential': 'coulomb:0.5', 'n': 2})
    x0 = lift(ConventionalState(q=(1.0, 0.0), p=(0.0, 0.6), t=0.0), bound.hamiltonian)
    extended = integrate_extended(bound.extended, x0, 5.0, runs.cfg)
    conventional = integrate_conventional(bound.hamiltonian, project(x0), float(extended.t[-1]), runs.cfg)
    times = np.linspace(0.0, min(extended.t[-1], conventional.params[-1]), 201)
    on_t = extended.resample_at_times(times)
    reference = conventional.resample(times)
    width = 2 * on_t.n
    report.add_verdict("c9_resampled_agreement", _max_abs(on_t.states[:, :width] - reference.states[:, :width]), 1e-6)


def check_s_shift(report: CheckReport, runs: _Runs):
    He = runs.kepler.extended
    x = runs.eccentric
    ds = 1e-3
    shifted, _ = infinitesimal_transform(He, x, ds)
    dq, dp, dt, de = extended_rhs(He, x)
    euler = ExtendedState(q=x.q + ds * dq, p=x.p + ds * dp, t=x.t + ds * dt, e=x.e + ds * de)
    report.add_verdict("c10_s_shift_bitwise", _max_abs(shifted.as_vector() - euler.as_vector()), 0.0)


CRITERIA = (
    check_constraint_conservation,
    check_gauge_equivalence,
    check_angular_momentum,
    check_runge_lenz,
    check_noether_gate,
    check_symmetry_rules,
    check_flow_commutation,
    check_finite_rotation,
    check_relativistic,
    check_s_shift
)


def run_acceptance(config=None) -> CheckReport:
    """
    Führt alle Abnahmekriterien aus

    Args:
        config (ScenarioConfig, optional): Liefert den Seed der Stichproben

    Returns:
        CheckReport: Ein Urteil pro gemessener Größe
    """
    runs = _Runs(getattr(config, 'seed', None))
    report = CheckReport()
    for criterion in CRITERIA:
        start = time.perf_counter()
        criterion(report, runs)
        logger.info("%s abgeschlossen (%.1f s)", criterion.__name__, time.perf_counter() - start)
    failed = [verdict.name for verdict in report.verdicts if not verdict.passed]
    if failed:
        logger.warning("Nicht bestanden: %s", ", ".join(failed))
    return report
