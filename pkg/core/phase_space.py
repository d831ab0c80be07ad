#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Zustände und Trajektorien im konventionellen und im erweiterten Phasenraum.
Zeit t und Energie e werden als zusätzliches kanonisches Paar gespeichert
(natürliche Einheiten, c = 1; das Paar wird als (t, e) und nicht als (ct, -e/c) geführt).
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional

import numpy as np
from scipy.interpolate import CubicSpline


def _frozen_vector(values, name):
    """
    Wandelt Werte in einen schreibgeschützten float-Vektor um

    Args:
        values (Sequence[float]): Komponenten
        name (str): Name für Fehlermeldungen

    Returns:
        np.ndarray: Eindimensionaler, unveränderlicher Vektor
    """
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} enthält nicht-endliche Werte: {arr}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ConventionalState:
    """Punkt (q, p, t) des konventionellen Phasenraums"""
    q: np.ndarray
    p: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        q = _frozen_vector(self.q, "q")
        p = _frozen_vector(self.p, "p")
        if q.size == 0 or q.size != p.size:
            raise ValueError(f"q und p müssen dieselbe Dimension n >= 1 haben (q: {q.size}, p: {p.size})")
        if not math.isfinite(float(self.t)):
            raise ValueError("t muss endlich sein")
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'p', p)
        object.__setattr__(self, 't', float(self.t))

    @property
    def n(self) -> int:
        return self.q.size

    @classmethod
    def from_dict(cls, data):
        return cls(q=data['q'], p=data['p'], t=data.get('t', 0.0))

    def to_dict(self) -> dict:
        return {'q': self.q.tolist(), 'p': self.p.tolist(), 't': self.t}


@dataclass(frozen=True)
class ExtendedState:
    """Punkt (q, p, t, e) des (2n+2)-dimensionalen erweiterten Phasenraums"""
    q: np.ndarray
    p: np.ndarray
    t: float = 0.0
    e: float = 0.0

    def __post_init__(self):
        q = _frozen_vector(self.q, "q")
        p = _frozen_vector(self.p, "p")
        if q.size == 0 or q.size != p.size:
            raise ValueError(f"q und p müssen dieselbe Dimension n >= 1 haben (q: {q.size}, p: {p.size})")
        if not (math.isfinite(float(self.t)) and math.isfinite(float(self.e))):
            raise ValueError("t und e müssen endlich sein")
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'p', p)
        object.__setattr__(self, 't', float(self.t))
        object.__setattr__(self, 'e', float(self.e))

    @property
    def n(self) -> int:
        return self.q.size

    def as_vector(self) -> np.ndarray:
        """
        Packt den Zustand in einen Vektor [q, p, t, e] der Länge 2n+2

        Returns:
            np.ndarray: Neuer (beschreibbarer) Vektor
        """
        return np.concatenate((self.q, self.p, (self.t, self.e)))

    @classmethod
    def from_vector(cls, y, n=None):
        """
        Erstellt einen Zustand aus einem Vektor [q, p, t, e]

        Args:
            y (Sequence[float]): Vektor der Länge 2n+2
            n (int, optional): Dimension; wird sonst aus der Länge bestimmt

        Returns:
            ExtendedState: Der Zustand
        """
        y = np.asarray(y, dtype=float)
        if n is None:
            n = (y.size - 2) // 2
        if y.size != 2 * n + 2:
            raise ValueError(f"Vektor der Länge {y.size} passt nicht zu n = {n}")
        return cls(q=y[:n], p=y[n:2 * n], t=y[2 * n], e=y[2 * n + 1])

    def replace(self, **changes) -> "ExtendedState":
        """Gibt eine Kopie mit geänderten Feldern zurück"""
        data = {'q': self.q, 'p': self.p, 't': self.t, 'e': self.e}
        data.update(changes)
        return ExtendedState(**data)

    @classmethod
    def from_dict(cls, data):
        return cls(q=data['q'], p=data['p'], t=data.get('t', 0.0), e=data.get('e', 0.0))

    def to_dict(self) -> dict:
        return {'q': self.q.tolist(), 'p': self.p.tolist(), 't': self.t, 'e': self.e}


class ParameterKind(str, Enum):
    """Art des Bahnparameters einer Trajektorie"""
    TIME_T = "time_t"
    EVOLUTION_S = "evolution_s"


@dataclass(frozen=True)
class TrajectorySample:
    param: float
    state: ExtendedState


@dataclass(frozen=True)
class Trajectory:
    """
    Geordnete Folge erweiterter Zustände über einem Bahnparameter (t oder s).

    Die Zustände liegen zeilenweise als Vektoren [q, p, t, e] in ``states``;
    ``residuals`` enthält optional den Wert von He an jedem Punkt.
    """
    parameter_kind: ParameterKind
    params: np.ndarray
    states: np.ndarray
    residuals: Optional[np.ndarray] = None

    def __post_init__(self):
        params = np.array(self.params, dtype=float).reshape(-1)
        states = np.array(self.states, dtype=float)
        if states.ndim != 2 or states.shape[0] != params.size or params.size == 0:
            raise ValueError("params und states müssen dieselbe, nicht leere Länge haben")
        if states.shape[1] < 4 or states.shape[1] % 2 != 0:
            raise ValueError(f"Ungültige Zustandsbreite {states.shape[1]}")
        if np.any(np.diff(params) <= 0):
            raise ValueError("Die Parameterwerte müssen streng monoton steigen")
        params.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, 'parameter_kind', ParameterKind(self.parameter_kind))
        object.__setattr__(self, 'params', params)
        object.__setattr__(self, 'states', states)
        if self.residuals is not None:
            residuals = np.array(self.residuals, dtype=float).reshape(-1)
            if residuals.size != params.size:
                raise ValueError("residuals muss zu params passen")
            residuals.setflags(write=False)
            object.__setattr__(self, 'residuals', residuals)

    @property
    def n(self) -> int:
        return (self.states.shape[1] - 2) // 2

    def __len__(self) -> int:
        return self.params.size

    def __getitem__(self, index) -> TrajectorySample:
        return TrajectorySample(float(self.params[index]), ExtendedState.from_vector(self.states[index], self.n))

    def __iter__(self) -> Iterator[TrajectorySample]:
        for i in range(len(self)):
            yield self[i]

    @property
    def initial(self) -> ExtendedState:
        return self[0].state

    @property
    def final(self) -> ExtendedState:
        return self[-1].state

    @property
    def q(self) -> np.ndarray:
        return self.states[:, :self.n]

    @property
    def p(self) -> np.ndarray:
        return self.states[:, self.n:2 * self.n]

    @property
    def t(self) -> np.ndarray:
        return self.states[:, 2 * self.n]

    @property
    def e(self) -> np.ndarray:
        return self.states[:, 2 * self.n + 1]

    def resample(self, params) -> "Trajectory":
        """
        Interpoliert die Trajektorie kubisch auf neue Parameterwerte

        Args:
            params (Sequence[float]): Streng steigende Werte innerhalb des Bereichs

        Returns:
            Trajectory: Neue Trajektorie (ohne Residuen)
        """
        params = np.asarray(params, dtype=float)
        self._check_inside(params, self.params)
        spline = CubicSpline(self.params, self.states, axis=0)
        return Trajectory(self.parameter_kind, params, spline(params))

    def resample_at_times(self, times) -> "Trajectory":
        """
        Interpoliert die Zustände mit der Zeitkoordinate t als Abszisse.
        Damit lassen sich s-parametrisierte Läufe mit t-parametrisierten vergleichen.

        Args:
            times (Sequence[float]): Streng steigende Zeiten innerhalb des Laufs

        Returns:
            Trajectory: Trajektorie mit parameter_kind = time_t
        """
        times = np.asarray(times, dtype=float)
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("t ist entlang der Trajektorie nicht streng monoton")
        self._check_inside(times, self.t)
        spline = CubicSpline(self.t, self.states, axis=0)
        return Trajectory(ParameterKind.TIME_T, times, spline(times))

    @staticmethod
    def _check_inside(values, grid):
        span = grid[-1] - grid[0]
        slack = 1e-12 * max(1.0, abs(span))
        if values.size and (values.min() < grid[0] - slack or values.max() > grid[-1] + slack):
            raise ValueError("Interpolation außerhalb des Trajektorienbereichs")


class TrajectoryBuilder:
    """Sammelt Stützpunkte während der Integration und prüft die Reihenfolge"""

    def __init__(self, parameter_kind: ParameterKind):
        self.parameter_kind = ParameterKind(parameter_kind)
        self._params: List[float] = []
        self._states: List[np.ndarray] = []

    def append(self, param, state):
        """
        Fügt einen Stützpunkt an

        Args:
            param (float): Parameterwert, größer als der letzte
            state (ExtendedState or np.ndarray): Zustand oder Vektor [q, p, t, e]

        Raises:
            ValueError: Wenn der Parameter nicht streng steigt
        """
        param = float(param)
        if self._params and param <= self._params[-1]:
            raise ValueError(
                f"Stützpunkt bei {param} liegt nicht hinter dem letzten Punkt {self._params[-1]}"
            )
        vector = state.as_vector() if isinstance(state, ExtendedState) else np.array(state, dtype=float)
        if self._states and vector.size != self._states[0].size:
            raise ValueError("Alle Zustände einer Trajektorie müssen dieselbe Dimension haben")
        self._params.append(param)
        self._states.append(vector)

    def __len__(self):
        return len(self._params)

    def build(self, residuals=None) -> Trajectory:
        return Trajectory(self.parameter_kind, np.array(self._params), np.vstack(self._states), residuals)


def lift(state: ConventionalState, H) -> ExtendedState:
    """
    Hebt einen konventionellen Zustand in den erweiterten Phasenraum, e = H(q, p, t)

    Args:
        state (ConventionalState): Konventioneller Zustand
        H (ConventionalHamiltonian): Hamiltonfunktion des Systems

    Returns:
        ExtendedState: Zustand auf der Schale He = 0 des Standard-Lifts

    Raises:
        DomainError: Wenn H am Zustand nicht definiert ist
    """
    return ExtendedState(q=state.q, p=state.p, t=state.t, e=H.eval(state.q, state.p, state.t))


def project(xstate: ExtendedState) -> ConventionalState:
    """Verwirft die Energiekoordinate e"""
    return ConventionalState(q=xstate.q, p=xstate.p, t=xstate.t)


def constraint_residual(xstate: ExtendedState, He) -> float:
    """
    Wert der erweiterten Hamiltonfunktion; auf zulässigen Zuständen (schwach) null

    Args:
        xstate (ExtendedState): Zustand
        He (ExtendedHamiltonian): Erweiterte Hamiltonfunktion

    Returns:
        float: He(q, p, t, e)
    """
    return He.eval(xstate.q, xstate.p, xstate.t, xstate.e)
