#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Gradienten im erweiterten Phasenraum, die erweiterte Poisson-Klammer und
Erhaltungstests in beiden Parametrisierungen.

Vorzeichen: [f, g] = sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i) - df/dt dg/de + df/de dg/dt.
Für den Standard-Lift He = H - e gilt auf der Schale [He, I] = -dI/dt.
"""

import logging
import math
from typing import Callable

import numpy as np

from core.exceptions import DomainError
from core.functions import ExtendedFunction, Gradient
from core.models import ANALYTIC, GradientScheme, ScanStatistics
from core.phase_space import ExtendedState

logger = logging.getLogger(__name__)

DEFAULT_SCHEME = GradientScheme()


def _central_difference(f: ExtendedFunction, q, p, t, e, fd_step: float) -> Gradient:
    """Zentrale Differenzen mit Schrittweite fd_step * max(1, |x_i|) je Koordinate"""
    n = len(q)
    x = np.concatenate((np.asarray(q, dtype=float), np.asarray(p, dtype=float), (float(t), float(e))))
    derivative = np.empty_like(x)
    for i in range(x.size):
        h = fd_step * max(1.0, abs(x[i]))
        forward = x.copy()
        backward = x.copy()
        forward[i] += h
        backward[i] -= h
        h2 = forward[i] - backward[i]
        f_plus = f.eval(forward[:n], forward[n:2 * n], forward[2 * n], forward[2 * n + 1])
        f_minus = f.eval(backward[:n], backward[n:2 * n], backward[2 * n], backward[2 * n + 1])
        derivative[i] = (f_plus - f_minus) / h2
    return Gradient(derivative[:n], derivative[n:2 * n], float(derivative[2 * n]), float(derivative[2 * n + 1]))


def gradient_function(f: ExtendedFunction, scheme: GradientScheme = None) -> Callable[..., Gradient]:
    """
    Liefert eine Funktion (q, p, t, e) -> Gradient nach dem gewählten Schema

    Args:
        f (ExtendedFunction): Funktion
        scheme (GradientScheme, optional): Schema; Standard ist analytisch

    Returns:
        Callable: Gradientenfunktion
    """
    scheme = scheme or DEFAULT_SCHEME
    if scheme.mode == ANALYTIC and f.has_partials:
        return f.partials
    return lambda q, p, t, e: _central_difference(f, q, p, t, e, scheme.fd_step)


def gradient(f: ExtendedFunction, xstate: ExtendedState, scheme: GradientScheme = None) -> Gradient:
    """
    Partielle Ableitungen von f am Zustand

    Args:
        f (ExtendedFunction): Funktion
        xstate (ExtendedState): Zustand
        scheme (GradientScheme, optional): analytisch (falls vorhanden) oder zentrale Differenzen

    Returns:
        Gradient: (df/dq, df/dp, df/dt, df/de)

    Raises:
        DomainError: Wenn ein Stützpunkt außerhalb des Definitionsbereichs liegt
    """
    return gradient_function(f, scheme)(xstate.q, xstate.p, xstate.t, xstate.e)


def bracket_from_gradients(gf: Gradient, gg: Gradient) -> float:
    return float(np.dot(gf.dq, gg.dp) - np.dot(gf.dp, gg.dq) - gf.dt * gg.de + gf.de * gg.dt)


def extended_poisson(f: ExtendedFunction, g: ExtendedFunction, xstate: ExtendedState,
                     scheme: GradientScheme = None) -> float:
    """
    Erweiterte Poisson-Klammer [f, g]_ext

    Args:
        f (ExtendedFunction): Erster Operand (Rolle von He)
        g (ExtendedFunction): Zweiter Operand
        xstate (ExtendedState): Zustand
        scheme (GradientScheme, optional): Gradientenschema

    Returns:
        float: Wert der Klammer
    """
    return bracket_from_gradients(gradient(f, xstate, scheme), gradient(g, xstate, scheme))


def total_time_derivative(I: ExtendedFunction, H, xstate: ExtendedState, scheme: GradientScheme = None) -> float:
    """
    dI/dt entlang der konventionellen Dynamik

    Args:
        I (ExtendedFunction): Charakteristische Funktion
        H (ConventionalHamiltonian): Hamiltonfunktion
        xstate (ExtendedState): Zustand auf der Schale (e = H)
        scheme (GradientScheme, optional): Gradientenschema für I

    Returns:
        float: dI/dt + dI/de dH/dt + sum_i (dI/dq_i dH/dp_i - dI/dp_i dH/dq_i)
    """
    q, p, t = xstate.q, xstate.p, xstate.t
    gi = gradient(I, xstate, scheme)
    return float(gi.dt + gi.de * H.dt(q, p, t) + np.dot(gi.dq, H.dp(q, p, t)) - np.dot(gi.dp, H.dq(q, p, t)))


def conservation_scan(I: ExtendedFunction, He: ExtendedFunction, sampler, count: int,
                      scheme: GradientScheme = None) -> ScanStatistics:
    """
    Wertet [He, I]_ext an count Zuständen auf der Schale aus

    Args:
        I (ExtendedFunction): Kandidat für eine Invariante
        He (ExtendedFunction): Erweiterte Hamiltonfunktion
        sampler (OnShellSampler): Quelle der Zustände
        count (int): Anzahl der Zustände
        scheme (GradientScheme, optional): Gradientenschema

    Returns:
        ScanStatistics: Maximum und Mittel von |[He, I]|, Zahl der Punkte und der Ausfälle
    """
    values = []
    failures = 0
    for xstate in sampler.draw(count):
        try:
            values.append(abs(extended_poisson(He, I, xstate, scheme)))
        except DomainError as e:
            failures += 1
            logger.debug("Punkt übersprungen: %s", e)
    if not values:
        logger.warning("Keine auswertbaren Punkte für %s", getattr(I, 'name', I))
        return ScanStatistics(max=math.nan, mean=math.nan, count=0, failures=failures)
    stats = ScanStatistics(max=float(np.max(values)), mean=float(np.mean(values)),
                           count=len(values), failures=failures)
    logger.info("[He, %s]: max %.3e, Mittel %.3e (%d Punkte)", getattr(I, 'name', 'I'), stats.max, stats.mean, stats.count)
    return stats
