#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Konkrete Hamiltonsysteme und der Standard-Lift in den erweiterten Phasenraum.
Enthält das (möglicherweise zeitabhängige) Kepler-System, das freie Teilchen und
das relativistische Punktteilchen in einem äußeren Potential, jeweils mit
analytischen partiellen Ableitungen, sowie die Registratur der Systeme für die
Kommandozeile.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional

import numpy as np

from core.exceptions import ConfigError, DomainError
from core.functions import ExtendedFunction, Gradient

logger = logging.getLogger(__name__)

# unterhalb dieses Abstands ist die 1/r^3-Kraft numerisch bedeutungslos
SINGULARITY_RADIUS = 1e-8
COUPLING_FD_STEP = 1e-6


# -------------------------------------------------------------------------
# Kopplungsstärken mu(t)
# -------------------------------------------------------------------------

class Coupling:
    """Kopplungsstärke mu(t) mit Ableitung mu'(t)"""

    is_constant = False

    def value(self, t) -> float:
        raise NotImplementedError

    def derivative(self, t) -> float:
        raise NotImplementedError

    def spec(self) -> str:
        return repr(self)


class ConstantCoupling(Coupling):
    is_constant = True

    def __init__(self, value: float = 1.0):
        self.mu = float(value)

    def value(self, t):
        return self.mu

    def derivative(self, t):
        return 0.0

    def spec(self):
        return f"const:{self.mu!r}"


class SinusoidalCoupling(Coupling):
    """mu(t) = 1 + a * sin(omega * t)"""

    def __init__(self, amplitude: float = 0.1, omega: float = 1.0):
        self.amplitude = float(amplitude)
        self.omega = float(omega)

    def value(self, t):
        return 1.0 + self.amplitude * math.sin(self.omega * t)

    def derivative(self, t):
        return self.amplitude * self.omega * math.cos(self.omega * t)

    def spec(self):
        return f"sin:{self.amplitude!r},{self.omega!r}"


class CallableCoupling(Coupling):
    """Beliebige Funktion mu(t); ohne Ableitung wird mu' über zentrale Differenzen bestimmt"""

    def __init__(self, func: Callable[[float], float], derivative: Optional[Callable[[float], float]] = None,
                 fd_step: float = COUPLING_FD_STEP):
        self._func = func
        self._derivative = derivative
        self.fd_step = fd_step

    def value(self, t):
        return float(self._func(t))

    def derivative(self, t):
        if self._derivative is not None:
            return float(self._derivative(t))
        h = self.fd_step
        return (self.value(t + h) - self.value(t - h)) / (2.0 * h)

    def spec(self):
        return "callable"


def as_coupling(mu) -> Coupling:
    """
    Wandelt eine Zahl, einen Text wie 'const:1' / 'sin:0.1,1' oder eine Funktion in eine Kopplung um

    Args:
        mu (float, str, Callable or Coupling): Beschreibung der Kopplung

    Returns:
        Coupling: Die Kopplung
    """
    if isinstance(mu, Coupling):
        return mu
    if isinstance(mu, str):
        return parse_coupling(mu)
    if callable(mu):
        return CallableCoupling(mu)
    return ConstantCoupling(float(mu))


def parse_coupling(spec: str) -> Coupling:
    """
    Liest 'const:<v>' (mu = v) oder 'sin:<a>,<omega>' (mu = 1 + a sin(omega t))

    Args:
        spec (str): Kopplungsbeschreibung

    Returns:
        Coupling: Die Kopplung

    Raises:
        ConfigError: Bei unbekanntem Format
    """
    kind, _, args = spec.partition(':')
    try:
        if kind == 'const':
            return ConstantCoupling(float(args))
        if kind == 'sin':
            amplitude, omega = (float(v) for v in args.split(','))
            return SinusoidalCoupling(amplitude, omega)
    except ValueError as e:
        raise ConfigError(f"Ungültige Kopplung '{spec}': {e}") from e
    raise ConfigError(f"Ungültige Kopplung '{spec}' (erwartet const:<v> oder sin:<a>,<omega>)")


# -------------------------------------------------------------------------
# Potentiale V(q, t)
# -------------------------------------------------------------------------

class Potential:
    """Potential V(q, t) mit partiellen Ableitungen"""

    name = "V"

    def eval(self, q, t) -> float:
        raise NotImplementedError

    def dq(self, q, t) -> np.ndarray:
        raise NotImplementedError

    def dt(self, q, t) -> float:
        raise NotImplementedError


class ZeroPotential(Potential):
    name = "none"

    def eval(self, q, t):
        return 0.0

    def dq(self, q, t):
        return np.zeros(len(q))

    def dt(self, q, t):
        return 0.0


class CentralPotential(Potential):
    """V = -mu(t) / r mit r = |q|"""

    def __init__(self, coupling=1.0):
        self.coupling = as_coupling(coupling)
        self.name = f"central({self.coupling.spec()})"

    def _radius(self, q):
        r = math.sqrt(float(np.dot(q, q)))
        if r < SINGULARITY_RADIUS:
            raise DomainError(f"Singularität des Potentials: r = {r:.3e} < {SINGULARITY_RADIUS:g}")
        return r

    def _mu(self, t):
        mu = self.coupling.value(t)
        if mu <= 0:
            raise DomainError(f"Die Kopplung muss positiv sein, mu({t}) = {mu}")
        return mu

    def eval(self, q, t):
        return -self._mu(t) / self._radius(q)

    def dq(self, q, t):
        r = self._radius(q)
        return self._mu(t) * np.asarray(q, dtype=float) / r ** 3

    def dt(self, q, t):
        return -self.coupling.derivative(t) / self._radius(q)


def parse_potential(spec: str) -> Potential:
    """
    Liest 'none' oder 'coulomb:<k>' (V = -k / r)

    Args:
        spec (str): Potentialbeschreibung

    Returns:
        Potential: Das Potential
    """
    if spec in (None, '', 'none', 'zero'):
        return ZeroPotential()
    kind, _, args = spec.partition(':')
    if kind == 'coulomb':
        return CentralPotential(parse_coupling(args) if ':' in args else float(args or 1.0))
    raise ConfigError(f"Unbekanntes Potential '{spec}' (erwartet none oder coulomb:<k>)")


# -------------------------------------------------------------------------
# Konventionelle Hamiltonfunktionen H(q, p, t)
# -------------------------------------------------------------------------

class ConventionalHamiltonian:
    """Hamiltonfunktion H(q, p, t) mit partiellen Ableitungen"""

    name = "H"
    n = 1
    energy_scale = 1.0

    def eval(self, q, p, t) -> float:
        raise NotImplementedError

    def dq(self, q, p, t) -> np.ndarray:
        raise NotImplementedError

    def dp(self, q, p, t) -> np.ndarray:
        raise NotImplementedError

    def dt(self, q, p, t) -> float:
        raise NotImplementedError

    def energy_function(self) -> ExtendedFunction:
        """Der Wert H(q, p, t) als Funktion auf dem erweiterten Phasenraum (ignoriert e)"""
        return _ConventionalEnergy(self)

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class _ConventionalEnergy(ExtendedFunction):
    def __init__(self, H):
        self.H = H
        self.name = f"H[{H.name}]"

    def eval(self, q, p, t, e):
        return self.H.eval(q, p, t)

    def partials(self, q, p, t, e):
        return Gradient(self.H.dq(q, p, t), self.H.dp(q, p, t), self.H.dt(q, p, t), 0.0)


class MechanicalHamiltonian(ConventionalHamiltonian):
    """H = p^2 / (2m) + V(q, t)"""

    def __init__(self, potential: Potential, n: int, m: float = 1.0, name: str = "mechanical"):
        if m <= 0:
            raise ConfigError("Die Masse muss positiv sein")
        self.potential = potential
        self.n = int(n)
        self.m = float(m)
        self.name = name

    def eval(self, q, p, t):
        return 0.5 * float(np.dot(p, p)) / self.m + self.potential.eval(q, t)

    def dq(self, q, p, t):
        return self.potential.dq(q, t)

    def dp(self, q, p, t):
        return np.asarray(p, dtype=float) / self.m

    def dt(self, q, p, t):
        return self.potential.dt(q, t)


def kepler(mu=1.0) -> MechanicalHamiltonian:
    """
    Kepler-System H = p^2/2 - mu(t)/r in der Bahnebene (n = 2)

    Args:
        mu (float, str, Callable or Coupling): Konstante oder zeitabhängige Kopplung

    Returns:
        MechanicalHamiltonian: Die Hamiltonfunktion
    """
    coupling = as_coupling(mu)
    return MechanicalHamiltonian(CentralPotential(coupling), n=2, name=f"kepler[{coupling.spec()}]")


def free_particle(n: int = 1, m: float = 1.0) -> MechanicalHamiltonian:
    return MechanicalHamiltonian(ZeroPotential(), n=n, m=m, name="free")


def _rest_and_kinetic_energy(p, m, c):
    """sqrt(p^2 c^2 + m^2 c^4)"""
    return math.sqrt(float(np.dot(p, p)) * c * c + m * m * c ** 4)


class RelativisticHamiltonian(ConventionalHamiltonian):
    """H = sqrt(p^2 c^2 + m^2 c^4) + V(q, t)"""

    def __init__(self, m: float, c: float, potential: Potential, n: int = 2):
        if m <= 0 or c <= 0:
            raise ConfigError("m und c müssen positiv sein")
        self.m = float(m)
        self.c = float(c)
        self.potential = potential
        self.n = int(n)
        self.energy_scale = self.m * self.c ** 2
        self.name = f"relativistic[m={self.m:g},c={self.c:g},V={potential.name}]"

    def eval(self, q, p, t):
        return _rest_and_kinetic_energy(p, self.m, self.c) + self.potential.eval(q, t)

    def dq(self, q, p, t):
        return self.potential.dq(q, t)

    def dp(self, q, p, t):
        return np.asarray(p, dtype=float) * self.c ** 2 / _rest_and_kinetic_energy(p, self.m, self.c)

    def dt(self, q, p, t):
        return self.potential.dt(q, t)


def relativistic_conventional(m=1.0, c=1.0, V: Optional[Potential] = None, n: int = 2) -> RelativisticHamiltonian:
    return RelativisticHamiltonian(m, c, V if V is not None else ZeroPotential(), n=n)


# -------------------------------------------------------------------------
# Erweiterte Hamiltonfunktionen He(q, p, t, e)
# -------------------------------------------------------------------------

class ExtendedHamiltonian(ExtendedFunction):
    """Erweiterte Hamiltonfunktion; auf physikalischen Zuständen schwach null"""

    name = "He"
    n = 1
    energy_scale = 1.0

    def dq(self, q, p, t, e) -> np.ndarray:
        raise NotImplementedError

    def dp(self, q, p, t, e) -> np.ndarray:
        raise NotImplementedError

    def dt(self, q, p, t, e) -> float:
        raise NotImplementedError

    def de(self, q, p, t, e) -> float:
        raise NotImplementedError

    def partials(self, q, p, t, e):
        return Gradient(self.dq(q, p, t, e), self.dp(q, p, t, e), self.dt(q, p, t, e), self.de(q, p, t, e))

    @property
    def has_partials(self) -> bool:
        return True


class StandardLift(ExtendedHamiltonian):
    """He = H(q, p, t) - e (Eichung dt/ds = 1)"""

    def __init__(self, H: ConventionalHamiltonian):
        self.conventional = H
        self.n = H.n
        self.energy_scale = H.energy_scale
        self.name = f"lift[{H.name}]"

    def eval(self, q, p, t, e):
        return self.conventional.eval(q, p, t) - e

    def dq(self, q, p, t, e):
        return self.conventional.dq(q, p, t)

    def dp(self, q, p, t, e):
        return self.conventional.dp(q, p, t)

    def dt(self, q, p, t, e):
        return self.conventional.dt(q, p, t)

    def de(self, q, p, t, e):
        return -1.0


def standard_lift(H: ConventionalHamiltonian) -> StandardLift:
    return StandardLift(H)


class RelativisticExtendedHamiltonian(ExtendedHamiltonian):
    """
    He = [p^2 - ((e - V)/c)^2] / (2m) + m c^2 / 2

    Der Bahnparameter s ist die Eigenzeit des Teilchens: dt/ds = (e - V)/(m c^2) = gamma.
    """

    def __init__(self, m: float, c: float, potential: Potential, n: int = 2):
        if m <= 0 or c <= 0:
            raise ConfigError("m und c müssen positiv sein")
        self.m = float(m)
        self.c = float(c)
        self.potential = potential
        self.n = int(n)
        self.energy_scale = self.m * self.c ** 2
        self.name = f"relativistic-ext[m={self.m:g},c={self.c:g},V={potential.name}]"

    def _w(self, q, t, e):
        return e - self.potential.eval(q, t)

    def eval(self, q, p, t, e):
        w = self._w(q, t, e)
        return (float(np.dot(p, p)) - (w / self.c) ** 2) / (2.0 * self.m) + 0.5 * self.m * self.c ** 2

    def dq(self, q, p, t, e):
        return self._w(q, t, e) / self.energy_scale * self.potential.dq(q, t)

    def dp(self, q, p, t, e):
        return np.asarray(p, dtype=float) / self.m

    def dt(self, q, p, t, e):
        return self._w(q, t, e) / self.energy_scale * self.potential.dt(q, t)

    def de(self, q, p, t, e):
        return -self._w(q, t, e) / self.energy_scale


def relativistic_extended(m=1.0, c=1.0, V: Optional[Potential] = None, n: int = 2) -> RelativisticExtendedHamiltonian:
    return RelativisticExtendedHamiltonian(m, c, V if V is not None else ZeroPotential(), n=n)


def energy_branch(He: RelativisticExtendedHamiltonian, q, p, t) -> float:
    """
    Löst He = 0 nach e auf (positiver Zweig e - V > 0)

    Args:
        He (RelativisticExtendedHamiltonian): Erweiterte Hamiltonfunktion des Teilchens
        q, p (Sequence[float]): Koordinaten und Impulse
        t (float): Zeit

    Returns:
        float: e = V + sqrt(p^2 c^2 + m^2 c^4)
    """
    return _rest_and_kinetic_energy(p, He.m, He.c) + He.potential.eval(q, t)


# -------------------------------------------------------------------------
# Registratur
# -------------------------------------------------------------------------

@dataclass
class System:
    """Zusammengehörige konventionelle und erweiterte Hamiltonfunktion"""
    name: str
    hamiltonian: ConventionalHamiltonian
    extended: ExtendedHamiltonian
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.hamiltonian.n

    @property
    def coupling(self) -> Optional[Coupling]:
        potential = getattr(self.hamiltonian, 'potential', None)
        return getattr(potential, 'coupling', None)


SystemFactory = Callable[..., System]
_SYSTEMS: Dict[str, SystemFactory] = {}


def register_system(name: str, factory: SystemFactory, replace: bool = False):
    """
    Registriert ein System unter einem Namen

    Args:
        name (str): Name für die Konfiguration
        factory (Callable): Erzeugt aus Schlüsselwortparametern ein System
        replace (bool): Vorhandene Einträge überschreiben

    Raises:
        ConfigError: Wenn der Name schon vergeben ist
    """
    if name in _SYSTEMS and not replace:
        raise ConfigError(f"System '{name}' ist bereits registriert")
    _SYSTEMS[name] = factory
    logger.debug("System '%s' registriert", name)


def available_systems():
    return sorted(_SYSTEMS)


def build_system(name: str, params: Optional[Dict[str, Any]] = None) -> System:
    """
    Erzeugt ein registriertes System

    Args:
        name (str): Name des Systems
        params (dict, optional): Parameter wie mu, m, c, potential, n

    Returns:
        System: Das System

    Raises:
        ConfigError: Bei unbekanntem Namen oder ungültigen Parametern
    """
    if name not in _SYSTEMS:
        raise ConfigError(f"Unbekanntes System '{name}', verfügbar: {', '.join(available_systems())}")
    try:
        return _SYSTEMS[name](**(params or {}))
    except TypeError as e:
        raise ConfigError(f"Ungültige Parameter für System '{name}': {e}") from e


def _kepler_system(mu="const:1"):
    H = kepler(mu)
    return System("kepler", H, standard_lift(H), {'mu': H.potential.coupling.spec()})


def _kepler_timedep_system(mu="sin:0.1,1"):
    H = kepler(mu)
    return System("kepler-timedep", H, standard_lift(H), {'mu': H.potential.coupling.spec()})


def _relativistic_system(m=1.0, c=1.0, potential="none", n=2):
    V = parse_potential(potential)
    return System(
        "relativistic",
        relativistic_conventional(m, c, V, n=n),
        relativistic_extended(m, c, V, n=n),
        {'m': float(m), 'c': float(c), 'potential': potential, 'n': int(n)}
    )


def _free_system(n=1, m=1.0):
    H = free_particle(n, m)
    return System("free", H, standard_lift(H), {'n': int(n), 'm': float(m)})


register_system("kepler", _kepler_system)
register_system("kepler-timedep", _kepler_timedep_system)
register_system("relativistic", _relativistic_system)
register_system("free", _free_system)
