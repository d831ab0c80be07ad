#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Datenmodelle für das Toolkit.
Definiert die Konfigurationen (Integrator, Gradienten, Szenario) und die Berichte,
die von den Prüfungen erzeugt und als JSON gespeichert werden.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from core.exceptions import ConfigError


RK4_FIXED = "rk4_fixed"
RK45_ADAPTIVE = "rk45_adaptive"
STEPPER_METHODS = (RK4_FIXED, RK45_ADAPTIVE)

ANALYTIC = "analytic"
CENTRAL_DIFFERENCE = "central_difference"
GRADIENT_MODES = (ANALYTIC, CENTRAL_DIFFERENCE)


def _to_json_number(value):
    """Nicht-endliche Werte werden als null geschrieben"""
    return value if value is None or math.isfinite(value) else None


def _from_json_number(value):
    return math.nan if value is None else value


def _check_keys(cls_name, data, allowed):
    """
    Prüft, ob ein Dictionary nur bekannte Schlüssel enthält

    Args:
        cls_name (str): Name des Modells für die Fehlermeldung
        data (dict): Zu prüfende Daten
        allowed (Iterable[str]): Erlaubte Schlüssel

    Raises:
        ConfigError: Wenn unbekannte Schlüssel enthalten sind
    """
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"Unbekannte Felder für {cls_name}: {', '.join(unknown)}")


@dataclass
class StepperConfig:
    """Datenklasse für die Einstellungen des Integrators"""
    method: str = RK4_FIXED  # rk4_fixed oder rk45_adaptive
    step: float = 1e-3  # feste Schrittweite bzw. erster Schritt
    abs_tol: float = 1e-10  # nur adaptiv
    rel_tol: float = 1e-10  # nur adaptiv
    max_steps: int = 10_000_000

    def __post_init__(self):
        """Prüft die Werte direkt nach der Initialisierung"""
        if self.method not in STEPPER_METHODS:
            raise ConfigError(
                f"Unbekanntes Verfahren '{self.method}', erlaubt: {', '.join(STEPPER_METHODS)}"
            )
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ConfigError("Die Schrittweite muss positiv sein")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ConfigError("Die Toleranzen müssen positiv sein")
        if int(self.max_steps) <= 0:
            raise ConfigError("max_steps muss positiv sein")
        self.max_steps = int(self.max_steps)

    @classmethod
    def from_dict(cls, data):
        """
        Erstellt eine StepperConfig-Instanz aus einem Dictionary

        Args:
            data (dict): Dictionary mit den Einstellungen

        Returns:
            StepperConfig: Die erstellte Instanz
        """
        _check_keys(cls.__name__, data, cls.__dataclass_fields__)
        return cls(**data)

    def to_dict(self) -> dict:
        """
        Konvertiert die Einstellungen in ein Dictionary

        Returns:
            dict: Die Einstellungen als Dictionary
        """
        return {
            'method': self.method,
            'step': self.step,
            'abs_tol': self.abs_tol,
            'rel_tol': self.rel_tol,
            'max_steps': self.max_steps
        }


@dataclass
class GradientScheme:
    """Datenklasse für die Art der Gradientenberechnung"""
    mode: str = ANALYTIC  # analytic oder central_difference
    fd_step: float = 1e-6

    def __post_init__(self):
        if self.mode not in GRADIENT_MODES:
            raise ConfigError(f"Unbekannter Gradientenmodus '{self.mode}'")
        if not self.fd_step > 0:
            raise ConfigError("fd_step muss positiv sein")

    @classmethod
    def from_name(cls, name, fd_step=1e-6):
        """
        Erstellt ein Schema aus dem Kurznamen der Kommandozeile

        Args:
            name (str): 'analytic' oder 'fd'
            fd_step (float): Basisschrittweite der zentralen Differenzen

        Returns:
            GradientScheme: Das passende Schema
        """
        aliases = {'fd': CENTRAL_DIFFERENCE, 'analytic': ANALYTIC, CENTRAL_DIFFERENCE: CENTRAL_DIFFERENCE}
        if name not in aliases:
            raise ConfigError(f"Unbekanntes Gradientenschema '{name}' (erlaubt: analytic, fd)")
        return cls(mode=aliases[name], fd_step=fd_step)

    def to_dict(self) -> dict:
        return {'mode': self.mode, 'fd_step': self.fd_step}


@dataclass
class SamplerBounds:
    """Datenklasse für den Kasten, aus dem Zustände auf der Schale gezogen werden"""
    q_min: float = -2.0
    q_max: float = 2.0
    p_min: float = -2.0
    p_max: float = 2.0
    t_min: float = 0.0
    t_max: float = 2.0 * math.pi
    r_min: float = 0.1  # Zustände mit |q| < r_min werden verworfen

    def __post_init__(self):
        if not (self.q_min < self.q_max and self.p_min < self.p_max and self.t_min <= self.t_max):
            raise ConfigError("Ungültige Grenzen für die Stichprobe")
        if self.r_min < 0:
            raise ConfigError("r_min darf nicht negativ sein")

    @classmethod
    def from_dict(cls, data):
        _check_keys(cls.__name__, data, cls.__dataclass_fields__)
        return cls(**data)

    def to_dict(self) -> dict:
        return {
            'q_min': self.q_min,
            'q_max': self.q_max,
            'p_min': self.p_min,
            'p_max': self.p_max,
            't_min': self.t_min,
            't_max': self.t_max,
            'r_min': self.r_min
        }


@dataclass
class DriftReport:
    """Datenklasse für die Abweichung einer Größe entlang einer Trajektorie"""
    quantity: str
    initial: float
    max_abs_deviation: float
    max_rel_deviation: float
    location: float  # Parameterwert der größten Abweichung

    def __post_init__(self):
        if self.max_abs_deviation < 0 or self.max_rel_deviation < 0:
            raise ValueError("Abweichungen können nicht negativ sein")

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        for key in ('initial', 'max_abs_deviation', 'max_rel_deviation', 'location'):
            data[key] = _from_json_number(data.get(key))
        return cls(**data)

    def to_dict(self) -> dict:
        return {
            'quantity': self.quantity,
            'initial': _to_json_number(self.initial),
            'max_abs_deviation': _to_json_number(self.max_abs_deviation),
            'max_rel_deviation': _to_json_number(self.max_rel_deviation),
            'location': _to_json_number(self.location)
        }


@dataclass
class ScanStatistics:
    """Datenklasse für die Statistik einer Klammer-Stichprobe"""
    max: float  # nan, wenn kein Punkt auswertbar war
    mean: float
    count: int  # Anzahl ausgewerteter Punkte
    failures: int = 0  # Punkte außerhalb des Definitionsbereichs

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data['max'] = _from_json_number(data.get('max'))
        data['mean'] = _from_json_number(data.get('mean'))
        return cls(**data)

    def to_dict(self) -> dict:
        return {
            'max': _to_json_number(self.max),
            'mean': _to_json_number(self.mean),
            'count': self.count,
            'failures': self.failures
        }


@dataclass
class Verdict:
    """Datenklasse für ein Prüfergebnis gegen eine Toleranz"""
    name: str
    value: float
    tolerance: float
    comparison: str = "<="  # "<=" (Obergrenze) oder ">=" (Untergrenze)
    passed: bool = field(init=False)

    def __post_init__(self):
        """Das Urteil wird immer aus den enthaltenen Zahlen abgeleitet"""
        if self.comparison == "<=":
            self.passed = bool(self.value <= self.tolerance)
        elif self.comparison == ">=":
            self.passed = bool(self.value >= self.tolerance)
        else:
            raise ValueError(f"Unbekannter Vergleich '{self.comparison}'")

    @classmethod
    def from_dict(cls, data):
        data = {k: v for k, v in data.items() if k != 'passed'}
        data['value'] = _from_json_number(data.get('value'))
        return cls(**data)

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'value': _to_json_number(self.value),
            'tolerance': self.tolerance,
            'comparison': self.comparison,
            'passed': self.passed
        }


@dataclass
class CheckReport:
    """Datenklasse für den Bericht eines Szenarios"""
    scenario: Dict[str, Any] = None
    drifts: List[DriftReport] = None
    brackets: Dict[str, ScanStatistics] = None
    symmetry: Dict[str, Any] = None
    verdicts: List[Verdict] = None

    def __post_init__(self):
        """Setzt leere Standardwerte"""
        if self.scenario is None:
            self.scenario = {}
        if self.drifts is None:
            self.drifts = []
        if self.brackets is None:
            self.brackets = {}
        if self.symmetry is None:
            self.symmetry = {}
        if self.verdicts is None:
            self.verdicts = []

    @property
    def passed(self) -> bool:
        return all(verdict.passed for verdict in self.verdicts)

    @property
    def exit_code(self) -> int:
        """0, wenn alle Urteile bestanden sind, sonst 1"""
        return 0 if self.passed else 1

    def add_verdict(self, name, value, tolerance, comparison="<="):
        """
        Fügt ein Urteil hinzu

        Args:
            name (str): Bezeichnung der Prüfung
            value (float): Gemessener Wert
            tolerance (float): Schranke
            comparison (str): "<=" oder ">="

        Returns:
            Verdict: Das erzeugte Urteil
        """
        verdict = Verdict(name=name, value=float(value), tolerance=float(tolerance), comparison=comparison)
        self.verdicts.append(verdict)
        return verdict

    @classmethod
    def from_dict(cls, data):
        return cls(
            scenario=data.get('scenario', {}),
            drifts=[DriftReport.from_dict(d) for d in data.get('drifts', [])],
            brackets={k: ScanStatistics.from_dict(v) for k, v in data.get('brackets', {}).items()},
            symmetry=data.get('symmetry', {}),
            verdicts=[Verdict.from_dict(v) for v in data.get('verdicts', [])]
        )

    def to_dict(self) -> dict:
        return {
            'scenario': self.scenario,
            'drifts': [d.to_dict() for d in self.drifts],
            'brackets': {k: v.to_dict() for k, v in self.brackets.items()},
            'symmetry': self.symmetry,
            'verdicts': [v.to_dict() for v in self.verdicts],
            'passed': self.passed
        }


@dataclass
class ScenarioConfig:
    """Datenklasse für ein vollständig aufgelöstes Szenario"""
    name: str = "scenario"
    system: str = "kepler"  # kepler, kepler-timedep, relativistic, free
    system_params: Dict[str, Any] = None
    q: List[float] = None
    p: List[float] = None
    t0: float = 0.0
    e: Optional[float] = None  # None: Energie aus dem Lift
    parametrization: str = "t"  # t oder s
    span: float = 2.0 * math.pi
    stepper: StepperConfig = None
    invariants: List[str] = None
    drift_tolerance: float = 1e-8
    constraint_tolerance: float = 1e-8
    output_dir: str = "results"
    seed: Optional[int] = 42
    samples: int = 100
    scheme: str = "fd"  # analytic oder fd
    fd_step: float = 1e-6
    sampler: SamplerBounds = None
    invariant: str = "angular-momentum"
    bracket_tolerance: float = 1e-5
    eps: float = 1e-3
    mode: str = "infinitesimal"  # infinitesimal oder finite
    delta_s: float = 1.0
    commutation_tolerance: float = 1e-8

    def __post_init__(self):
        """Setzt Standardwerte und prüft die Konsistenz"""
        if self.system_params is None:
            self.system_params = {}
        if self.q is None:
            self.q = [1.0, 0.0]
        if self.p is None:
            self.p = [0.0, 1.0]
        if self.stepper is None:
            self.stepper = StepperConfig()
        elif isinstance(self.stepper, dict):
            self.stepper = StepperConfig.from_dict(self.stepper)
        if self.sampler is None:
            self.sampler = SamplerBounds()
        elif isinstance(self.sampler, dict):
            self.sampler = SamplerBounds.from_dict(self.sampler)
        if self.invariants is None:
            self.invariants = []

        self.q = [float(v) for v in self.q]
        self.p = [float(v) for v in self.p]
        if len(self.q) == 0 or len(self.q) != len(self.p):
            raise ConfigError("q und p müssen dieselbe Länge n >= 1 haben")
        if not all(math.isfinite(v) for v in self.q + self.p + [self.t0]):
            raise ConfigError("Der Anfangszustand enthält nicht-endliche Werte")
        if self.e is not None:
            self.e = float(self.e)
            if not math.isfinite(self.e):
                raise ConfigError("e muss endlich sein")
        if self.parametrization not in ("t", "s"):
            raise ConfigError("parametrization muss 't' oder 's' sein")
        if not (self.span > 0 and math.isfinite(self.span)):
            raise ConfigError("Die Spanne muss positiv und endlich sein")
        if self.mode not in ("infinitesimal", "finite"):
            raise ConfigError("mode muss 'infinitesimal' oder 'finite' sein")
        if self.scheme not in ("analytic", "fd"):
            raise ConfigError("scheme muss 'analytic' oder 'fd' sein")
        if int(self.samples) <= 0:
            raise ConfigError("samples muss positiv sein")
        self.samples = int(self.samples)

    @property
    def gradient_scheme(self) -> GradientScheme:
        return GradientScheme.from_name(self.scheme, self.fd_step)

    @classmethod
    def from_dict(cls, data):
        """
        Erstellt eine ScenarioConfig-Instanz aus einem Dictionary

        Args:
            data (dict): Dictionary mit den Daten des Szenarios

        Returns:
            ScenarioConfig: Die erstellte Instanz

        Raises:
            ConfigError: Bei unbekannten Feldern oder ungültigen Werten
        """
        data = dict(data)
        _check_keys(cls.__name__, data, cls.__dataclass_fields__)
        if isinstance(data.get('stepper'), dict):
            data['stepper'] = StepperConfig.from_dict(data['stepper'])
        if isinstance(data.get('sampler'), dict):
            data['sampler'] = SamplerBounds.from_dict(data['sampler'])
        try:
            return cls(**data)
        except TypeError as e:
            raise ConfigError(f"Ungültige Szenario-Konfiguration: {e}") from e

    def to_dict(self) -> dict:
        """
        Konvertiert das Szenario inklusive aller Standardwerte in ein Dictionary

        Returns:
            dict: Das Szenario als Dictionary
        """
        return {
            'name': self.name,
            'system': self.system,
            'system_params': dict(self.system_params),
            'q': list(self.q),
            'p': list(self.p),
            't0': self.t0,
            'e': self.e,
            'parametrization': self.parametrization,
            'span': self.span,
            'stepper': self.stepper.to_dict(),
            'invariants': list(self.invariants),
            'drift_tolerance': self.drift_tolerance,
            'constraint_tolerance': self.constraint_tolerance,
            'output_dir': self.output_dir,
            'seed': self.seed,
            'samples': self.samples,
            'scheme': self.scheme,
            'fd_step': self.fd_step,
            'sampler': self.sampler.to_dict(),
            'invariant': self.invariant,
            'bracket_tolerance': self.bracket_tolerance,
            'eps': self.eps,
            'mode': self.mode,
            'delta_s': self.delta_s,
            'commutation_tolerance': self.commutation_tolerance
        }
