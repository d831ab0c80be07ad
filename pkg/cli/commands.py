#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Ausführung der Unterbefehle.
Jeder Befehl löst zuerst die Konfiguration auf (JSON-Datei, darüber die Flags),
führt die Rechnung aus, schreibt CSV und JSON in das Ausgabeverzeichnis und gibt
einen CheckReport zurück, aus dem sich der Exit-Code ergibt.
"""

import json
import logging
import os

import numpy as np

from cli.acceptance import run_acceptance
from core.brackets import conservation_scan
from core.dynamics import integrate_conventional, integrate_extended, monitor
from core.exceptions import ConfigError
from core.models import CheckReport, ScenarioConfig
from core.noether import (
    build_invariant, commutation_residuals, finite_transform, infinitesimal_transform,
    scaled_rotation_decomposition
)
from core.phase_space import ConventionalState, ExtendedState, constraint_residual, lift, project
from core.sampling import OnShellSampler
from core.systems import build_system
from utils.helpers import config_fingerprint, create_filename, ensure_directory, parse_float_list
from utils.import_export import export_to_csv, export_to_json

logger = logging.getLogger(__name__)

_DIRECT_FIELDS = {
    'name': 'name',
    'system': 'system',
    't0': 't0',
    'e': 'e',
    'param': 'parametrization',
    'span': 'span',
    'out_dir': 'output_dir',
    'seed': 'seed',
    'samples': 'samples',
    'scheme': 'scheme',
    'invariant': 'invariant',
    'eps': 'eps',
    'mode': 'mode',
    'delta_s': 'delta_s'
}
_STEPPER_FIELDS = ('method', 'step', 'abs_tol', 'rel_tol', 'max_steps')
_SYSTEM_FIELDS = {'mu': 'mu', 'mass': 'm', 'c': 'c', 'potential': 'potential'}
_SIZED_SYSTEMS = ('relativistic', 'free')


# -------------------------------------------------------------------------
# Konfiguration
# -------------------------------------------------------------------------

def load_config_file(path: str) -> dict:
    """
    Liest eine JSON-Szenariodatei

    Raises:
        ConfigError: Wenn die Datei fehlt oder kein JSON-Objekt enthält
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"Konfiguration '{path}' kann nicht gelesen werden: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Konfiguration '{path}' ist kein gültiges JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Konfiguration '{path}' muss ein JSON-Objekt sein")
    return data


def _coupling_spec(mu) -> str:
    """Reine Zahlen werden zu 'const:<v>'"""
    if isinstance(mu, (int, float)):
        return f"const:{float(mu)!r}"
    text = str(mu).strip()
    if ':' not in text:
        try:
            return f"const:{float(text)!r}"
        except ValueError as e:
            raise ConfigError(f"Ungültige Kopplung '{mu}'") from e
    return text


def resolve_config(ns) -> ScenarioConfig:
    """
    Kombiniert die optionale JSON-Datei mit den gesetzten Flags; Flags haben Vorrang

    Args:
        ns (argparse.Namespace): Geparste Argumente

    Returns:
        ScenarioConfig: Vollständig aufgelöste Konfiguration

    Raises:
        ConfigError: Bei ungültigen Werten
    """
    data = load_config_file(ns.config) if getattr(ns, 'config', None) else {}
    seed_given = getattr(ns, 'seed', None) is not None or data.get('seed') is not None

    for flag, key in _DIRECT_FIELDS.items():
        value = getattr(ns, flag, None)
        if value is not None:
            data[key] = value

    stepper = dict(data.get('stepper') or {})
    for key in _STEPPER_FIELDS:
        value = getattr(ns, key, None)
        if value is not None:
            stepper[key] = value
    if stepper:
        data['stepper'] = stepper

    params = dict(data.get('system_params') or {})
    for flag, key in _SYSTEM_FIELDS.items():
        value = getattr(ns, flag, None)
        if value is not None:
            params[key] = value
    if 'mu' in params:
        params['mu'] = _coupling_spec(params['mu'])
    data['system_params'] = params

    if getattr(ns, 'q', None):
        data['q'] = parse_float_list(ns.q)
    if getattr(ns, 'p', None):
        data['p'] = parse_float_list(ns.p)
    if getattr(ns, 'state', None):
        values = parse_float_list(ns.state)
        if len(values) < 4 or len(values) % 2 != 0:
            raise ConfigError("--state erwartet q1..qn,p1..pn,t,e mit n >= 1")
        n = (len(values) - 2) // 2
        data.update(q=values[:n], p=values[n:2 * n], t0=values[2 * n], e=values[2 * n + 1])
    if getattr(ns, 'invariants', None):
        data['invariants'] = [name.strip() for name in ns.invariants.split(',') if name.strip()]

    if getattr(ns, 'ci', False) and not seed_given:
        raise ConfigError("Im CI-Modus muss --seed angegeben werden")
    return ScenarioConfig.from_dict(data)


def build_scenario_system(config: ScenarioConfig):
    """Erzeugt das System; n folgt bei Bedarf aus der Länge von q"""
    params = dict(config.system_params)
    if config.system in _SIZED_SYSTEMS:
        params.setdefault('n', len(config.q))
    system = build_system(config.system, params)
    if system.n != len(config.q):
        raise ConfigError(f"System {config.system} hat n = {system.n}, der Anfangszustand aber {len(config.q)}")
    return system


def initial_state(config: ScenarioConfig, system) -> ExtendedState:
    """Anfangszustand auf der Schale, außer e ist ausdrücklich gesetzt"""
    state = ConventionalState(q=config.q, p=config.p, t=config.t0)
    if config.e is None:
        return lift(state, system.hamiltonian)
    xstate = ExtendedState(q=state.q, p=state.p, t=state.t, e=config.e)
    logger.info("Energiekoordinate vorgegeben: e = %r, He = %.3e", config.e, constraint_residual(xstate, system.extended))
    return xstate


def _new_report(command: str, config: ScenarioConfig) -> CheckReport:
    resolved = config.to_dict()
    return CheckReport(scenario={'command': command, 'config': resolved, 'fingerprint': config_fingerprint(resolved)})


def _output_path(config: ScenarioConfig, suffix: str, extension: str) -> str:
    directory = ensure_directory(config.output_dir)
    return os.path.join(directory, create_filename(f"{config.name}_{suffix}", extension))


# -------------------------------------------------------------------------
# Unterbefehle
# -------------------------------------------------------------------------

def run_simulate(config: ScenarioConfig) -> CheckReport:
    """
    Integriert das Szenario, überwacht die Invarianten und schreibt Trajektorie und Bericht

    Args:
        config (ScenarioConfig): Szenario

    Returns:
        CheckReport: Bericht mit Noether-Prüfung, Drift- und Nebenbedingungsurteilen
    """
    system = build_scenario_system(config)
    x0 = initial_state(config, system)
    if config.parametrization == 't':
        if config.e is not None:
            logger.warning("Bei t-Parametrisierung wird e aus H berechnet; --e wird ignoriert")
        trajectory = integrate_conventional(system.hamiltonian, project(x0), config.span, config.stepper)
    else:
        trajectory = integrate_extended(system.extended, x0, config.span, config.stepper)

    report = _new_report('simulate', config)
    residuals = trajectory.residuals
    report.add_verdict('constraint', float(np.max(np.abs(residuals - residuals[0]))), config.constraint_tolerance)
    gate_seed = config.seed if config.seed is not None else 42
    for name in config.invariants:
        invariant = build_invariant(name, system, seed=gate_seed, enforce=False)
        gate = invariant.gate_report
        report.brackets[f'gate:{name}'] = gate.statistics
        report.add_verdict(f'gate:{name}', gate.statistics.max, gate.tolerance)
        drift = monitor(trajectory, invariant, name)
        report.drifts.append(drift)
        report.add_verdict(f'drift:{name}', drift.max_abs_deviation, config.drift_tolerance)

    csv_path = export_to_csv(trajectory, _output_path(config, 'trajectory', 'csv'))
    json_path = _output_path(config, 'report', 'json')
    report.scenario['outputs'] = {'trajectory': csv_path, 'report': json_path,
                                  'parameter_kind': trajectory.parameter_kind.value}
    export_to_json(report, json_path)
    return report


def run_bracket(config: ScenarioConfig) -> CheckReport:
    """
    Wertet [He, I] an zufälligen Zuständen auf der Schale aus

    Args:
        config (ScenarioConfig): Szenario mit invariant, samples, seed und scheme

    Returns:
        CheckReport: Bericht mit der Klammerstatistik
    """
    system = build_scenario_system(config)
    invariant = build_invariant(config.invariant, system, gate=False)
    if config.seed is None:
        logger.warning("Kein Seed gesetzt; die Stichprobe ist nicht reproduzierbar")
    sampler = OnShellSampler(system.hamiltonian, config.sampler, seed=config.seed)
    stats = conservation_scan(invariant, system.extended, sampler, config.samples, config.gradient_scheme)

    report = _new_report('bracket', config)
    report.brackets[config.invariant] = stats
    report.add_verdict(f'bracket:{config.invariant}', stats.max, config.bracket_tolerance)
    export_to_json(report, _output_path(config, 'bracket', 'json'))
    return report


def run_symmetry(config: ScenarioConfig) -> CheckReport:
    """
    Wendet die Symmetrie einer Invarianten an und prüft, ob sie mit der Dynamik kommutiert

    Args:
        config (ScenarioConfig): Szenario mit invariant, eps, mode und delta_s

    Returns:
        CheckReport: Bericht mit transformiertem Zustand und Kommutator-Residuum
    """
    system = build_scenario_system(config)
    x0 = initial_state(config, system)
    invariant = build_invariant(config.invariant, system, gate=False)
    scheme = config.gradient_scheme

    symmetry = {'invariant': config.invariant, 'mode': config.mode, 'eps': config.eps, 'initial': x0.to_dict()}
    if config.mode == 'infinitesimal':
        transformed, delta = infinitesimal_transform(invariant, x0, config.eps, scheme)
        symmetry['delta'] = delta.to_dict()
    else:
        transformed = finite_transform(invariant, x0, config.eps, scheme=scheme)
    symmetry['transformed'] = transformed.to_dict()
    symmetry['shell_residual'] = constraint_residual(transformed, system.extended)
    if config.invariant == 'runge-lenz-extended' and x0.n == 2:
        symmetry['scaled_rotation'] = scaled_rotation_decomposition(x0, config.eps).to_dict()

    commutation = commutation_residuals(invariant, system.extended, x0, config.eps, config.delta_s,
                                        config.stepper, scheme=scheme)
    symmetry['commutation'] = commutation.to_dict()

    report = _new_report('symmetry', config)
    report.symmetry = symmetry
    report.add_verdict(f'commutation:{config.invariant}', commutation.aligned, config.commutation_tolerance)
    export_to_json(report, _output_path(config, 'symmetry', 'json'))
    return report


def run_check(config: ScenarioConfig) -> CheckReport:
    """Führt alle Abnahmekriterien aus und schreibt einen gemeinsamen Bericht"""
    report = run_acceptance(config)
    report.scenario.update(_new_report('check', config).scenario)
    export_to_json(report, _output_path(config, 'check', 'json'))
    return report


RUNNERS = {
    'simulate': run_simulate,
    'bracket': run_bracket,
    'symmetry': run_symmetry,
    'check': run_check
}


def print_summary(command: str, report: CheckReport):
    """Gibt das Ergebnis auf der Standardausgabe aus"""
    if command == 'bracket':
        for name, stats in report.brackets.items():
            print(json.dumps({name: stats.to_dict()}))
    elif command == 'symmetry':
        print(json.dumps(report.symmetry, indent=2))
    for verdict in report.verdicts:
        status = "OK    " if verdict.passed else "FEHLER"
        print(f"{status} {verdict.name}: {verdict.value:.3e} {verdict.comparison} {verdict.tolerance:.1e}")


def dispatch(ns) -> int:
    """
    Führt den gewählten Unterbefehl aus

    Args:
        ns (argparse.Namespace): Geparste Argumente

    Returns:
        int: 0, wenn alle Urteile bestanden sind, sonst 1
    """
    config = resolve_config(ns)
    logger.debug("Aufgelöste Konfiguration: %s", config.to_dict())
    report = RUNNERS[ns.command](config)
    print_summary(ns.command, report)
    return report.exit_code
