#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Funktionen auf dem erweiterten Phasenraum.
Eine ExtendedFunction liefert ihren Wert f(q, p, t, e) und optional die analytischen
partiellen Ableitungen. Erweiterte Hamiltonfunktionen, Invarianten und die Operanden
der erweiterten Poisson-Klammer folgen alle diesem Vertrag.
"""

from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np


class Gradient(NamedTuple):
    """Partielle Ableitungen (df/dq, df/dp, df/dt, df/de)"""
    dq: np.ndarray
    dp: np.ndarray
    dt: float
    de: float

    def as_vector(self) -> np.ndarray:
        return np.concatenate((self.dq, self.dp, (self.dt, self.de)))


class ExtendedFunction:
    """Basisklasse für Funktionen f(q, p, t, e)"""

    name = "f"

    def eval(self, q, p, t, e) -> float:
        raise NotImplementedError

    def partials(self, q, p, t, e) -> Optional[Gradient]:
        """
        Analytische partielle Ableitungen

        Returns:
            Optional[Gradient]: Die Ableitungen oder None, wenn keine analytische Form bekannt ist
        """
        return None

    @property
    def has_partials(self) -> bool:
        return type(self).partials is not ExtendedFunction.partials

    def __call__(self, xstate) -> float:
        return self.eval(xstate.q, xstate.p, xstate.t, xstate.e)

    def __add__(self, other):
        return LinearCombination([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        return LinearCombination([(1.0, self), (-1.0, other)])

    def __mul__(self, factor):
        return LinearCombination([(float(factor), self)])

    __rmul__ = __mul__

    def __neg__(self):
        return LinearCombination([(-1.0, self)])

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class CallableFunction(ExtendedFunction):
    """Funktion aus einer Python-Funktion, optional mit analytischen Ableitungen"""

    def __init__(self, func: Callable, partials: Optional[Callable] = None, name: str = "f"):
        """
        Args:
            func (Callable): f(q, p, t, e) -> float
            partials (Callable, optional): (q, p, t, e) -> (dq, dp, dt, de)
            name (str): Anzeigename
        """
        self._func = func
        self._partials = partials
        self.name = name

    def eval(self, q, p, t, e):
        return float(self._func(q, p, t, e))

    def partials(self, q, p, t, e):
        if self._partials is None:
            return None
        dq, dp, dt, de = self._partials(q, p, t, e)
        return Gradient(np.asarray(dq, dtype=float), np.asarray(dp, dtype=float), float(dt), float(de))

    @property
    def has_partials(self) -> bool:
        return self._partials is not None


class CoordinateFunction(ExtendedFunction):
    """Koordinatenfunktion q_i, p_i, t oder e"""

    def __init__(self, kind: str, index: int = 0, n: int = 2):
        """
        Args:
            kind (str): 'q', 'p', 't' oder 'e'
            index (int): Index (0-basiert) für q und p
            n (int): Dimension des Konfigurationsraums
        """
        if kind not in ('q', 'p', 't', 'e'):
            raise ValueError(f"Unbekannte Koordinate '{kind}'")
        if kind in ('q', 'p') and not 0 <= index < n:
            raise ValueError(f"Index {index} außerhalb von 0..{n - 1}")
        self.kind = kind
        self.index = index
        self.n = n
        self.name = f"{kind}{index + 1}" if kind in ('q', 'p') else kind

    def eval(self, q, p, t, e):
        if self.kind == 'q':
            return float(q[self.index])
        if self.kind == 'p':
            return float(p[self.index])
        return float(t if self.kind == 't' else e)

    def partials(self, q, p, t, e):
        dq = np.zeros(len(q))
        dp = np.zeros(len(p))
        if self.kind == 'q':
            dq[self.index] = 1.0
        elif self.kind == 'p':
            dp[self.index] = 1.0
        return Gradient(dq, dp, 1.0 if self.kind == 't' else 0.0, 1.0 if self.kind == 'e' else 0.0)


class ConstantFunction(ExtendedFunction):
    def __init__(self, value: float = 1.0):
        self.value = float(value)
        self.name = f"const({self.value:g})"

    def eval(self, q, p, t, e):
        return self.value

    def partials(self, q, p, t, e):
        return Gradient(np.zeros(len(q)), np.zeros(len(p)), 0.0, 0.0)


class LinearCombination(ExtendedFunction):
    """Summe a_1 f_1 + a_2 f_2 + ... (für Bilinearitätsprüfungen)"""

    def __init__(self, terms: Sequence[Tuple[float, ExtendedFunction]]):
        flat = []
        for coefficient, func in terms:
            if isinstance(func, LinearCombination):
                flat.extend((coefficient * c, f) for c, f in func.terms)
            else:
                flat.append((float(coefficient), func))
        self.terms = flat
        self.name = " + ".join(f"{c:g}*{f.name}" for c, f in flat)

    def eval(self, q, p, t, e):
        return sum(c * f.eval(q, p, t, e) for c, f in self.terms)

    @property
    def has_partials(self) -> bool:
        return all(f.has_partials for _, f in self.terms)

    def partials(self, q, p, t, e):
        if not self.has_partials:
            return None
        total = None
        for c, f in self.terms:
            g = f.partials(q, p, t, e)
            if total is None:
                total = Gradient(c * g.dq, c * g.dp, c * g.dt, c * g.de)
            else:
                total = Gradient(total.dq + c * g.dq, total.dp + c * g.dp, total.dt + c * g.dt, total.de + c * g.de)
        return total
