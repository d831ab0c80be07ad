#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Verallgemeinertes Noether-Theorem im erweiterten Phasenraum.
Aus einer Invarianten I werden die infinitesimalen Symmetrieregeln
    dp = -de * dI/dq,  dq = de * dI/dp,  de = de * dI/dt,  dt = -de * dI/de
gebildet, ihr endlicher Fluss integriert und geprüft, ob die Transformation
Lösungen auf Lösungen abbildet. Dazu kommen die Invarianten des Kepler-Systems
(Drehimpuls, Runge-Lenz in beiden Formen) und die Punkttransformationen der
konventionellen Untergruppe.

Für die erweiterte Runge-Lenz-Form folgt aus dp = -de dI/dq das Vorzeichen
dp2 = -de p1 p2.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from core.brackets import conservation_scan, gradient, gradient_function
from core.dynamics import generator_field, integrate_extended, integrate_field
from core.exceptions import ConfigError, DomainError, SymmetryError
from core.functions import CoordinateFunction, ExtendedFunction, Gradient
from core.models import CENTRAL_DIFFERENCE, GradientScheme, ScanStatistics, StepperConfig
from core.phase_space import ExtendedState
from core.sampling import OnShellSampler
from core.systems import SINGULARITY_RADIUS

logger = logging.getLogger(__name__)

FLOW_SUBSTEPS = 1000
GATE_SAMPLES = 32
GATE_TOLERANCE = 1e-5


# -------------------------------------------------------------------------
# Invarianten
# -------------------------------------------------------------------------

class Invariant(ExtendedFunction):
    """Charakteristische Funktion I(q, p, t, e) eines Symmetriegenerators"""

    def __init__(self, function: ExtendedFunction, name: str = None, depends_on_e: bool = False):
        """
        Args:
            function (ExtendedFunction): Wert und Ableitungen
            name (str, optional): Anzeigename
            depends_on_e (bool): True, wenn dI/de nicht verschwindet (Symmetrie verschiebt die Zeit)
        """
        self.function = function
        self.name = name or function.name
        self.depends_on_e = depends_on_e
        self.gate_report = None  # gesetzt von build_invariant

    def eval(self, q, p, t, e):
        return self.function.eval(q, p, t, e)

    def partials(self, q, p, t, e):
        return self.function.partials(q, p, t, e)

    @property
    def has_partials(self) -> bool:
        return self.function.has_partials


class _AngularMomentum(ExtendedFunction):
    name = "angular-momentum"

    def eval(self, q, p, t, e):
        return float(p[0] * q[1] - p[1] * q[0])

    def partials(self, q, p, t, e):
        return Gradient(np.array([-p[1], p[0]], dtype=float), np.array([q[1], -q[0]], dtype=float), 0.0, 0.0)


class _RungeLenz(ExtendedFunction):
    """-q1 p2^2 + q2 p1 p2 + mu q1 / r"""

    name = "runge-lenz"

    def __init__(self, mu: float):
        self.mu = float(mu)

    def _radius(self, q):
        r = math.hypot(q[0], q[1])
        if r < SINGULARITY_RADIUS:
            raise DomainError(f"Runge-Lenz-Vektor bei r = {r:.3e} nicht definiert")
        return r

    def eval(self, q, p, t, e):
        r = self._radius(q)
        return float(-q[0] * p[1] ** 2 + q[1] * p[0] * p[1] + self.mu * q[0] / r)

    def partials(self, q, p, t, e):
        r3 = self._radius(q) ** 3
        dq = np.array([-p[1] ** 2 + self.mu * q[1] ** 2 / r3,
                       p[0] * p[1] - self.mu * q[0] * q[1] / r3], dtype=float)
        dp = np.array([q[1] * p[1], q[1] * p[0] - 2.0 * q[0] * p[1]], dtype=float)
        return Gradient(dq, dp, 0.0, 0.0)


class _RungeLenzExtended(ExtendedFunction):
    """q1 p1^2 / 2 + q2 p1 p2 - q1 p2^2 / 2 - q1 e (mu steckt in e)"""

    name = "runge-lenz-extended"

    def eval(self, q, p, t, e):
        return float(0.5 * q[0] * p[0] ** 2 + q[1] * p[0] * p[1] - 0.5 * q[0] * p[1] ** 2 - q[0] * e)

    def partials(self, q, p, t, e):
        dq = np.array([0.5 * p[0] ** 2 - 0.5 * p[1] ** 2 - e, p[0] * p[1]], dtype=float)
        dp = np.array([q[0] * p[0] + q[1] * p[1], q[1] * p[0] - q[0] * p[1]], dtype=float)
        return Gradient(dq, dp, 0.0, float(-q[0]))


def angular_momentum() -> Invariant:
    """Drehimpuls I = p1 q2 - p2 q1 (n = 2)"""
    return Invariant(_AngularMomentum(), depends_on_e=False)


def runge_lenz(mu: float = 1.0) -> Invariant:
    """Eine Komponente des Runge-Lenz-Vektors für konstantes mu; ohne Zeitverschiebung"""
    return Invariant(_RungeLenz(mu), depends_on_e=False)


def runge_lenz_extended() -> Invariant:
    """Dieselbe Komponente in erweiterten Variablen; hängt von e ab, daher dt = de * q1"""
    return Invariant(_RungeLenzExtended(), depends_on_e=True)


def hamiltonian_invariant(He: ExtendedFunction) -> Invariant:
    """He selbst als Generator: der Fluss ist die Dynamik in s"""
    return Invariant(He, name="hamiltonian", depends_on_e=True)


# -------------------------------------------------------------------------
# Infinitesimale und endliche Transformationen
# -------------------------------------------------------------------------

@dataclass
class SymmetryDelta:
    """Verschiebung (dq, dp, dt, de) für einen Parameter de (linear in de)"""
    dq: np.ndarray
    dp: np.ndarray
    dt: float
    de: float
    eps: float

    def apply(self, xstate: ExtendedState) -> ExtendedState:
        return ExtendedState(q=xstate.q + self.dq, p=xstate.p + self.dp, t=xstate.t + self.dt, e=xstate.e + self.de)

    def to_dict(self) -> dict:
        return {'dq': self.dq.tolist(), 'dp': self.dp.tolist(), 'dt': self.dt, 'de': self.de, 'eps': self.eps}


def infinitesimal_transform(I: ExtendedFunction, xstate: ExtendedState, deps: float,
                            scheme: GradientScheme = None) -> Tuple[ExtendedState, SymmetryDelta]:
    """
    Wendet die infinitesimalen Symmetrieregeln der Invarianten I an

    Args:
        I (ExtendedFunction): Charakteristische Funktion
        xstate (ExtendedState): Zustand
        deps (float): Kleiner Parameter
        scheme (GradientScheme, optional): Gradientenschema

    Returns:
        Tuple[ExtendedState, SymmetryDelta]: Verschobener Zustand und Verschiebung
    """
    g = gradient(I, xstate, scheme)
    # gleiche Ausdrücke wie ein Euler-Schritt der erweiterten Gleichungen
    delta = SymmetryDelta(dq=deps * g.dp, dp=deps * -g.dq, dt=deps * -g.de, de=deps * g.dt, eps=deps)
    return delta.apply(xstate), delta


def _flow_config(eps: float) -> StepperConfig:
    return StepperConfig(step=abs(eps) / FLOW_SUBSTEPS)


def finite_transform(I: ExtendedFunction, xstate: ExtendedState, eps: float,
                     flow_cfg: StepperConfig = None, scheme: GradientScheme = None) -> ExtendedState:
    """
    Endliche Transformation als exakter Fluss des Generators über [0, eps]

    Args:
        I (ExtendedFunction): Generator
        xstate (ExtendedState): Startzustand
        eps (float): Gruppenparameter (auch negativ)
        flow_cfg (StepperConfig, optional): Integrator; Standard RK4 mit Schritt |eps|/1000
        scheme (GradientScheme, optional): Gradientenschema

    Returns:
        ExtendedState: Bild des Zustands
    """
    if eps == 0.0:
        return xstate
    n = xstate.n
    forward = generator_field(gradient_function(I, scheme), n)
    vector_field = forward if eps > 0 else (lambda s, y: -forward(s, y))
    _, states = integrate_field(vector_field, 0.0, xstate.as_vector(), abs(eps), flow_cfg or _flow_config(eps))
    return ExtendedState.from_vector(states[-1], n)


def _advance(He, xstate: ExtendedState, delta_s: float, cfg: StepperConfig) -> ExtendedState:
    """Bewegt einen Zustand um delta_s entlang der Dynamik (auch rückwärts)"""
    if delta_s == 0.0:
        return xstate
    if delta_s > 0:
        return integrate_extended(He, xstate, delta_s, cfg).final
    return finite_transform(He, xstate, delta_s, cfg)


# -------------------------------------------------------------------------
# Noether-Prüfungen
# -------------------------------------------------------------------------

@dataclass
class CanonicityReport:
    """Ergebnis der Noether-Prüfung max |[He, I]| <= tol"""
    invariant: str
    passed: bool
    tolerance: float
    statistics: ScanStatistics

    def to_dict(self) -> dict:
        return {
            'invariant': self.invariant,
            'passed': self.passed,
            'tolerance': self.tolerance,
            'statistics': self.statistics.to_dict()
        }


def canonicity_check(I: ExtendedFunction, He: ExtendedFunction, sampler, count: int, tol: float,
                     scheme: GradientScheme = None) -> CanonicityReport:
    """
    Prüft, ob I mit He auf der Schale kommutiert und damit eine Symmetrie erzeugt

    Args:
        I (ExtendedFunction): Kandidat
        He (ExtendedFunction): Erweiterte Hamiltonfunktion
        sampler (OnShellSampler): Zustände auf der Schale
        count (int): Anzahl der Zustände
        tol (float): Schranke für max |[He, I]|
        scheme (GradientScheme, optional): Gradientenschema

    Returns:
        CanonicityReport: Bestanden oder nicht, mit Statistik
    """
    stats = conservation_scan(I, He, sampler, count, scheme)
    passed = stats.count > 0 and stats.max <= tol
    logger.info("Noether-Prüfung %s: %s (max %.3e, tol %.1e)",
                getattr(I, 'name', 'I'), "bestanden" if passed else "NICHT bestanden", stats.max, tol)
    return CanonicityReport(getattr(I, 'name', 'I'), passed, tol, stats)


@dataclass
class CommutationResult:
    """Abstand der beiden Wege Symmetrie∘Dynamik und Dynamik∘Symmetrie"""
    raw: float
    aligned: float
    alignment_shift: float

    def to_dict(self) -> dict:
        return {'raw': self.raw, 'aligned': self.aligned, 'alignment_shift': self.alignment_shift}


def commutation_residuals(I: ExtendedFunction, He, x0: ExtendedState, eps: float, delta_s: float,
                          cfg: StepperConfig, flow_cfg: StepperConfig = None,
                          scheme: GradientScheme = None) -> CommutationResult:
    """
    Vergleicht finite_transform(I, Dynamik(x0)) mit Dynamik(finite_transform(I, x0)).

    Generatoren, die nur schwach mit He kommutieren, bilden eine Bahn auf dieselbe Bahn ab,
    verschieben aber ihren Parameter s. Der ausgerichtete Abstand verschiebt deshalb den
    zweiten Endpunkt entlang seiner Bahn, bis die Zeitkoordinaten übereinstimmen.

    Returns:
        CommutationResult: Roher und ausgerichteter Maximalabstand über (q, p, t, e)
    """
    evolved = integrate_extended(He, x0, delta_s, cfg).final
    a = finite_transform(I, evolved, eps, flow_cfg, scheme)
    b = integrate_extended(He, finite_transform(I, x0, eps, flow_cfg, scheme), delta_s, cfg).final
    va = a.as_vector()
    raw = float(np.max(np.abs(va - b.as_vector())))

    shift = 0.0
    c = b
    for _ in range(4):
        dt_ds = -He.de(c.q, c.p, c.t, c.e)
        if dt_ds == 0.0:
            break
        correction = (a.t - c.t) / dt_ds
        if abs(correction) <= 1e-15 * max(1.0, abs(shift)):
            break
        shift += correction
        c = _advance(He, b, shift, cfg)
    aligned = float(np.max(np.abs(va - c.as_vector())))
    logger.debug("Kommutator von %s: roh %.3e, ausgerichtet %.3e (Verschiebung %.3e)",
                 getattr(I, 'name', 'I'), raw, aligned, shift)
    return CommutationResult(raw, aligned, shift)


def flow_commutation_check(I: ExtendedFunction, He, x0: ExtendedState, eps: float, delta_s: float,
                           cfg: StepperConfig, flow_cfg: StepperConfig = None,
                           scheme: GradientScheme = None) -> float:
    """
    Residuum der Aussage "die Symmetrie bildet Lösungen auf Lösungen ab"

    Args:
        I (ExtendedFunction): Generator
        He (ExtendedHamiltonian): Erweiterte Hamiltonfunktion
        x0 (ExtendedState): Zustand auf der Schale
        eps (float): Gruppenparameter
        delta_s (float): Spanne der Dynamik
        cfg (StepperConfig): Integrator der Dynamik
        flow_cfg (StepperConfig, optional): Integrator des Symmetrieflusses

    Returns:
        float: Ausgerichteter Maximalabstand; klein für echte Invarianten
    """
    return commutation_residuals(I, He, x0, eps, delta_s, cfg, flow_cfg, scheme).aligned


# -------------------------------------------------------------------------
# Lokale skalierte Drehung
# -------------------------------------------------------------------------

@dataclass
class ScaledRotation:
    """Zerlegung der Runge-Lenz-Symmetrie in Zeitverschiebung, Streckung und Drehung"""
    delta_t: float
    delta_phi: float
    delta_psi: float
    matrix: np.ndarray  # 1 + A

    def exponential_matrix(self) -> np.ndarray:
        """exp(dphi) * Drehmatrix(dpsi); stimmt mit 1 + A bis O(de^2) überein"""
        c, s = math.cos(self.delta_psi), math.sin(self.delta_psi)
        return math.exp(self.delta_phi) * np.array([[c, s], [-s, c]])

    def to_dict(self) -> dict:
        return {
            'delta_t': self.delta_t,
            'delta_phi': self.delta_phi,
            'delta_psi': self.delta_psi,
            'matrix': self.matrix.tolist()
        }


def scaled_rotation_decomposition(xstate: ExtendedState, deps: float) -> ScaledRotation:
    """
    A = de [[p1, p2], [-p2, p1]], dt = q1 de, dphi = p1 de, dpsi = p2 de

    Args:
        xstate (ExtendedState): Zustand mit n = 2
        deps (float): Kleiner Parameter

    Returns:
        ScaledRotation: Die Zerlegung
    """
    if xstate.n != 2:
        raise ValueError("Die skalierte Drehung ist nur für n = 2 definiert")
    p1, p2 = xstate.p
    a = deps * np.array([[p1, p2], [-p2, p1]])
    return ScaledRotation(delta_t=xstate.q[0] * deps, delta_phi=p1 * deps, delta_psi=p2 * deps, matrix=np.eye(2) + a)


# -------------------------------------------------------------------------
# Konventionelle Untergruppe: f2 = sum_i g_i(q, t) P_i + h(q, t)
# -------------------------------------------------------------------------

class PointTransformGenerator:
    """Erzeugende Funktion einer Punkttransformation mit Eichterm"""

    def __init__(self, g: Callable, jacobian: Callable, h: Optional[Callable] = None,
                 grad_h: Optional[Callable] = None, dg_dt: Optional[Callable] = None,
                 dh_dt: Optional[Callable] = None, name: str = "f2"):
        """
        Args:
            g (Callable): (q, t) -> Q
            jacobian (Callable): (q, t) -> Matrix J[j, i] = dg_j/dq_i
            h (Callable, optional): (q, t) -> Eichterm
            grad_h (Callable, optional): (q, t) -> dh/dq
            dg_dt (Callable, optional): (q, t) -> dg/dt
            dh_dt (Callable, optional): (q, t) -> dh/dt
            name (str): Anzeigename

        Raises:
            ConfigError: Wenn h ohne grad_h angegeben wird
        """
        if h is not None and grad_h is None:
            raise ConfigError(f"{name}: zum Eichterm h fehlt grad_h")
        self.g = g
        self.jacobian = jacobian
        self.h = h
        self.grad_h = grad_h
        self.dg_dt = dg_dt
        self.dh_dt = dh_dt
        self.name = name

    def evaluate(self, q, P, t) -> float:
        value = float(np.dot(self.g(q, t), P))
        return value + (float(self.h(q, t)) if self.h is not None else 0.0)

    def time_derivative(self, q, P, t) -> float:
        """df2/dt bei festen (q, P)"""
        value = float(np.dot(self.dg_dt(q, t), P)) if self.dg_dt is not None else 0.0
        return value + (float(self.dh_dt(q, t)) if self.dh_dt is not None else 0.0)


def identity_generator(n: int = 2) -> PointTransformGenerator:
    return PointTransformGenerator(g=lambda q, t: np.array(q, dtype=float),
                                   jacobian=lambda q, t: np.eye(n), name="identity")


def rotation_matrix(angle: float) -> np.ndarray:
    """Drehung der Bahnebene: [[cos, sin], [-sin, cos]]"""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s], [-s, c]])


def rotation_generator(angle: float) -> PointTransformGenerator:
    R = rotation_matrix(angle)
    return PointTransformGenerator(g=lambda q, t: R @ np.asarray(q, dtype=float),
                                   jacobian=lambda q, t: R, name=f"rotation({angle:g})")


def gauge_generator(n: int, a: float) -> PointTransformGenerator:
    """f2 = sum q_i P_i + a t: reine Energieverschiebung H' = H + a"""
    return PointTransformGenerator(g=lambda q, t: np.array(q, dtype=float), jacobian=lambda q, t: np.eye(n),
                                   h=lambda q, t: a * t, grad_h=lambda q, t: np.zeros(n),
                                   dh_dt=lambda q, t: a, name=f"gauge({a:g})")


def conventional_subgroup_transform(f2: PointTransformGenerator,
                                    state: ExtendedState) -> Tuple[ExtendedState, float, float]:
    """
    Wendet p = df2/dq, Q = df2/dP, e = -df2/dt + E, T = t an

    Args:
        f2 (PointTransformGenerator): Generator der konventionellen Untergruppe
        state (ExtendedState): Alter Zustand (q, p, t, e)

    Returns:
        Tuple[ExtendedState, float, float]: Neuer Zustand (Q, P, T, E), T und die Verschiebung df2/dt (H' = H + df2/dt)

    Raises:
        DomainError: Wenn die Jacobi-Matrix dg/dq nicht invertierbar ist
    """
    q, t = state.q, state.t
    J = np.asarray(f2.jacobian(q, t), dtype=float)
    if not np.all(np.isfinite(J)) or not np.linalg.cond(J) <= 1e12:
        raise DomainError(f"Jacobi-Matrix von {f2.name} ist nicht invertierbar")
    rhs = state.p - (np.asarray(f2.grad_h(q, t), dtype=float) if f2.h is not None else 0.0)
    P = np.linalg.solve(J.T, rhs)
    Q = np.asarray(f2.g(q, t), dtype=float)
    shift = f2.time_derivative(q, P, t)
    return ExtendedState(q=Q, p=P, t=t, e=state.e + shift), t, shift


# -------------------------------------------------------------------------
# Registratur der Invarianten
# -------------------------------------------------------------------------

InvariantFactory = Callable[[Any], Invariant]
_INVARIANTS: Dict[str, InvariantFactory] = {}


def register_invariant(name: str, factory: InvariantFactory, replace: bool = False):
    """
    Registriert eine Invariante; die Fabrik erhält das System

    Args:
        name (str): Name für die Konfiguration
        factory (Callable): system -> Invariant
        replace (bool): Vorhandene Einträge überschreiben
    """
    if name in _INVARIANTS and not replace:
        raise ConfigError(f"Invariante '{name}' ist bereits registriert")
    _INVARIANTS[name] = factory


def available_invariants():
    return sorted(_INVARIANTS)


def check_time_shift_flag(I: Invariant, states, scheme: GradientScheme = None):
    """
    Vergleicht depends_on_e mit dI/de an den gegebenen Zuständen

    Raises:
        ConfigError: Wenn das Flag nicht zur Ableitung passt
    """
    grad = gradient_function(I, scheme)
    shifts_time = False
    for x in states:
        try:
            shifts_time = shifts_time or bool(grad(x.q, x.p, x.t, x.e).de != 0.0)
        except DomainError:
            continue
    if shifts_time != I.depends_on_e:
        raise ConfigError(f"depends_on_e = {I.depends_on_e} passt nicht zu dI/de von '{I.name}'")


def admit_invariant(I: Invariant, system, samples: int = GATE_SAMPLES, tol: float = GATE_TOLERANCE,
                    seed: int = 42, enforce: bool = True, scheme: GradientScheme = None) -> CanonicityReport:
    """
    Noether-Tor: I wird nur als Generator zugelassen, wenn es mit He kommutiert

    Args:
        I (Invariant): Kandidat
        system (System): System mit konventioneller und erweiterter Hamiltonfunktion
        samples (int): Anzahl der Zustände
        tol (float): Schranke
        seed (int): Seed der Stichprobe
        enforce (bool): Bei False wird ein Fehlschlag nur protokolliert
        scheme (GradientScheme, optional): Standard: zentrale Differenzen

    Returns:
        CanonicityReport: Ergebnis der Prüfung

    Raises:
        SymmetryError: Wenn enforce gesetzt ist und die Prüfung fehlschlägt
        ConfigError: Wenn depends_on_e nicht zu dI/de passt
    """
    scheme = scheme or GradientScheme(mode=CENTRAL_DIFFERENCE)
    sampler = OnShellSampler(system.hamiltonian, seed=seed)
    check_time_shift_flag(I, sampler.draw(samples), scheme)
    report = canonicity_check(I, system.extended, sampler, samples, tol, scheme)
    if not report.passed:
        if enforce:
            raise SymmetryError(
                f"'{I.name}' ist keine Erhaltungsgröße von {system.name}: max |[He, I]| = {report.statistics.max:.3e}"
            )
        logger.warning("'%s' wird trotz nicht bestandener Noether-Prüfung verwendet", I.name)
    return report


def build_invariant(name: str, system, gate: bool = True, **gate_options) -> Invariant:
    """
    Erzeugt eine registrierte Invariante für ein System

    Args:
        name (str): Name der Invariante
        system (System): Zugehöriges System
        gate (bool): Noether-Prüfung ausführen; der Bericht landet in invariant.gate_report
        **gate_options: Optionen für admit_invariant, z. B. enforce=False

    Returns:
        Invariant: Die Invariante

    Raises:
        ConfigError: Bei unbekanntem Namen
        SymmetryError: Wenn die Prüfung erzwungen wird und fehlschlägt
    """
    if name not in _INVARIANTS:
        raise ConfigError(f"Unbekannte Invariante '{name}', verfügbar: {', '.join(available_invariants())}")
    invariant = _INVARIANTS[name](system)
    if gate:
        invariant.gate_report = admit_invariant(invariant, system, **gate_options)
    return invariant


def _require_plane(system, name):
    if system.n != 2:
        raise ConfigError(f"'{name}' ist nur für ebene Systeme (n = 2) definiert")


def _angular_momentum_factory(system):
    _require_plane(system, "angular-momentum")
    return angular_momentum()


def _runge_lenz_factory(system):
    _require_plane(system, "runge-lenz")
    coupling = system.coupling
    if coupling is None:
        raise ConfigError(f"'runge-lenz' benötigt ein Kepler-System, nicht {system.name}")
    if not coupling.is_constant:
        logger.warning("mu ist in %s nicht konstant; Runge-Lenz verwendet mu(0) = %g", system.name, coupling.value(0.0))
    return runge_lenz(coupling.value(0.0))


def _runge_lenz_extended_factory(system):
    _require_plane(system, "runge-lenz-extended")
    return runge_lenz_extended()


register_invariant("angular-momentum", _angular_momentum_factory)
register_invariant("runge-lenz", _runge_lenz_factory)
register_invariant("runge-lenz-extended", _runge_lenz_extended_factory)
register_invariant("hamiltonian", lambda system: hamiltonian_invariant(system.extended))
register_invariant("energy",
                   lambda system: Invariant(CoordinateFunction('e', n=system.n), name="energy", depends_on_e=True))
register_invariant("q1", lambda system: Invariant(CoordinateFunction('q', 0, system.n), name="q1"))
register_invariant("p1", lambda system: Invariant(CoordinateFunction('p', 0, system.n), name="p1"))
