#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Kanonische Gleichungen und ihre numerische Integration.
Die konventionellen Gleichungen werden über der Zeit t integriert, die erweiterten
über dem Bahnparameter s. Beide Läufe liefern eine Trajectory mit vollständigen
erweiterten Zuständen, damit sie direkt vergleichbar sind.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from scipy.integrate import RK45

from core.exceptions import DomainError, IntegrationError
from core.functions import Gradient
from core.models import RK4_FIXED, DriftReport, StepperConfig
from core.phase_space import (
    ConventionalState, ExtendedState, ParameterKind, Trajectory, TrajectoryBuilder, constraint_residual
)

logger = logging.getLogger(__name__)

# |He| oberhalb dieser Schranke (relativ zur Energieskala) gilt als nicht auf der Schale
ONSHELL_TOLERANCE = 1e-9

VectorField = Callable[[float, np.ndarray], np.ndarray]


def conventional_rhs(H, state: ConventionalState) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Rechte Seite der konventionellen kanonischen Gleichungen

    Args:
        H (ConventionalHamiltonian): Hamiltonfunktion
        state (ConventionalState): Zustand

    Returns:
        Tuple: (dq/dt, dp/dt, de/dt) = (dH/dp, -dH/dq, dH/dt)
    """
    q, p, t = state.q, state.p, state.t
    return H.dp(q, p, t), -H.dq(q, p, t), H.dt(q, p, t)


def extended_rhs(He, xstate: ExtendedState) -> Tuple[np.ndarray, np.ndarray, float, float]:
    """
    Rechte Seite der erweiterten kanonischen Gleichungen

    Args:
        He (ExtendedHamiltonian): Erweiterte Hamiltonfunktion
        xstate (ExtendedState): Zustand

    Returns:
        Tuple: (dq/ds, dp/ds, dt/ds, de/ds) = (dHe/dp, -dHe/dq, -dHe/de, dHe/dt)
    """
    g = He.partials(xstate.q, xstate.p, xstate.t, xstate.e)
    return g.dp, -g.dq, -g.de, g.dt


def generator_field(gradient_fn: Callable[..., Gradient], n: int) -> VectorField:
    """
    Hamiltonsches Vektorfeld einer Funktion auf dem erweiterten Phasenraum.
    Für He ist das die erweiterte Dynamik, für eine Invariante I ihr Symmetriefluss.

    Args:
        gradient_fn (Callable): (q, p, t, e) -> Gradient
        n (int): Dimension des Konfigurationsraums

    Returns:
        VectorField: f(s, y) mit y = [q, p, t, e]
    """
    def field(s, y):
        g = gradient_fn(y[:n], y[n:2 * n], y[2 * n], y[2 * n + 1])
        return np.concatenate((g.dp, -g.dq, (-g.de, g.dt)))
    return field


def _conventional_field(H, n: int) -> VectorField:
    def field(t, y):
        q, p = y[:n], y[n:]
        return np.concatenate((H.dp(q, p, t), -H.dq(q, p, t)))
    return field


def _rk4_step(field: VectorField, s: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = field(s, y)
    k2 = field(s + 0.5 * h, y + 0.5 * h * k1)
    k3 = field(s + 0.5 * h, y + 0.5 * h * k2)
    k4 = field(s + h, y + h * k3)
    return y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def integrate_field(field: VectorField, s0: float, y0, span: float, cfg: StepperConfig,
                    atol_scale: float = 1.0) -> Tuple[List[float], List[np.ndarray]]:
    """
    Integriert ein Vektorfeld von s0 bis s0 + span

    Args:
        field (VectorField): Rechte Seite f(s, y)
        s0 (float): Startparameter
        y0 (Sequence[float]): Anfangsvektor
        span (float): Länge des Intervalls (> 0)
        cfg (StepperConfig): Verfahren und Schrittweiten
        atol_scale (float): Skalierung der absoluten Toleranz (Energieskala des Systems)

    Returns:
        Tuple[List[float], List[np.ndarray]]: Parameterwerte und Zustandsvektoren inklusive Startpunkt

    Raises:
        IntegrationError: Bei Singularitäten, nicht-endlichen Werten oder zu vielen Schritten
    """
    if not (span > 0 and math.isfinite(span)):
        raise ValueError(f"Die Spanne muss positiv sein, erhalten: {span}")
    y = np.array(y0, dtype=float)
    params, states = [float(s0)], [y.copy()]
    try:
        if cfg.method == RK4_FIXED:
            steps = max(1, math.ceil(span / cfg.step * (1.0 - 1e-12)))
            if steps > cfg.max_steps:
                raise IntegrationError(f"{steps} Schritte nötig, erlaubt sind max_steps = {cfg.max_steps}")
            s = float(s0)
            for k in range(1, steps + 1):
                s_next = s0 + span if k == steps else s0 + k * cfg.step
                y = _rk4_step(field, s, y, s_next - s)
                if not np.all(np.isfinite(y)):
                    raise IntegrationError(f"Nicht-endlicher Zustand bei Parameter {s_next}")
                s = s_next
                params.append(s)
                states.append(y)
        else:
            solver = RK45(field, float(s0), y, s0 + span, rtol=cfg.rel_tol,
                          atol=cfg.abs_tol * atol_scale, first_step=min(cfg.step, span))
            count = 0
            while solver.status == 'running':
                message = solver.step()
                count += 1
                if solver.status == 'failed':
                    raise IntegrationError(f"Adaptiver Schritt fehlgeschlagen bei {solver.t}: {message}")
                if count > cfg.max_steps:
                    raise IntegrationError(f"max_steps = {cfg.max_steps} überschritten bei {solver.t}")
                if solver.t > params[-1]:
                    params.append(float(solver.t))
                    states.append(np.array(solver.y, dtype=float))
    except DomainError as e:
        raise IntegrationError(f"Integration abgebrochen: {e}") from e
    return params, states


def integrate_conventional(H, initial: ConventionalState, t_span: float, cfg: StepperConfig) -> Trajectory:
    """
    Integriert die konventionellen kanonischen Gleichungen über der Zeit

    Args:
        H (ConventionalHamiltonian): Hamiltonfunktion
        initial (ConventionalState): Anfangszustand
        t_span (float): Zeitspanne ab initial.t
        cfg (StepperConfig): Integrator

    Returns:
        Trajectory: parameter_kind = time_t; e ist der laufende Wert von H
    """
    n = initial.n
    logger.info("Konventionelle Integration von %s über %.6g (%s)", H.name, t_span, cfg.method)
    params, vectors = integrate_field(_conventional_field(H, n), initial.t,
                                      np.concatenate((initial.q, initial.p)), t_span, cfg, H.energy_scale)
    builder = TrajectoryBuilder(ParameterKind.TIME_T)
    residuals = []
    for t, y in zip(params, vectors):
        q, p = y[:n], y[n:]
        e = H.eval(q, p, t)
        builder.append(t, np.concatenate((y, (t, e))))
        residuals.append(H.eval(q, p, t) - e)
    return builder.build(residuals)


def integrate_extended(He, initial: ExtendedState, s_span: float, cfg: StepperConfig, s0: float = 0.0) -> Trajectory:
    """
    Integriert die erweiterten kanonischen Gleichungen über dem Bahnparameter s

    Args:
        He (ExtendedHamiltonian): Erweiterte Hamiltonfunktion
        initial (ExtendedState): Anfangszustand (sollte auf der Schale He = 0 liegen)
        s_span (float): Spanne in s
        cfg (StepperConfig): Integrator
        s0 (float): Startwert von s

    Returns:
        Trajectory: parameter_kind = evolution_s, Residuenspalte = He an jedem Punkt
    """
    residual = constraint_residual(initial, He)
    if abs(residual) > ONSHELL_TOLERANCE * max(1.0, He.energy_scale):
        logger.warning("Anfangszustand liegt nicht auf der Schale: He = %.3e; der Wert bleibt erhalten", residual)
    logger.info("Erweiterte Integration von %s über s = %.6g (%s)", He.name, s_span, cfg.method)
    n = initial.n
    params, vectors = integrate_field(generator_field(He.partials, n), s0, initial.as_vector(),
                                      s_span, cfg, He.energy_scale)
    builder = TrajectoryBuilder(ParameterKind.EVOLUTION_S)
    residuals = []
    for s, y in zip(params, vectors):
        builder.append(s, y)
        residuals.append(He.eval(y[:n], y[n:2 * n], y[2 * n], y[2 * n + 1]))
    return builder.build(residuals)


def _quantity_name(quantity) -> str:
    return getattr(quantity, 'name', None) or getattr(quantity, '__name__', 'quantity')


def monitor(trajectory: Trajectory, quantity, name: str = None) -> DriftReport:
    """
    Misst die Abweichung einer Größe vom Anfangswert über alle Stützpunkte

    Args:
        trajectory (Trajectory): Nicht leere Trajektorie
        quantity (Callable): Auswertbar auf ExtendedState (z.B. He, Invariante, Energie)
        name (str, optional): Bezeichnung im Bericht

    Returns:
        DriftReport: Anfangswert, größte absolute und relative Abweichung und deren Ort
    """
    values = np.array([quantity(sample.state) for sample in trajectory], dtype=float)
    initial = float(values[0])
    deviations = np.abs(values - initial)
    index = int(np.argmax(deviations))
    max_abs = float(deviations[index])
    # Größen mit Anfangswert 0 werden relativ zu 1 gemessen
    max_rel = max_abs / abs(initial) if initial != 0.0 else max_abs
    return DriftReport(
        quantity=name or _quantity_name(quantity),
        initial=initial,
        max_abs_deviation=max_abs,
        max_rel_deviation=max_rel,
        location=float(trajectory.params[index])
    )


@dataclass
class OrderCheck:
    """Drift von He bei Schrittweite h und h/2"""
    step: float
    drift: float
    drift_half: float

    @property
    def ratio(self) -> float:
        return self.drift / self.drift_half if self.drift_half > 0 else math.nan

    def to_dict(self) -> dict:
        ratio = self.ratio
        return {'step': self.step, 'drift': self.drift, 'drift_half': self.drift_half,
                'ratio': ratio if math.isfinite(ratio) else None}


def order_check(He, initial: ExtendedState, s_span: float, step: float) -> OrderCheck:
    """
    Konvergenzprüfung für RK4: Halbieren der Schrittweite sollte die Drift von He etwa durch 16 teilen

    Args:
        He (ExtendedHamiltonian): Erweiterte Hamiltonfunktion
        initial (ExtendedState): Anfangszustand
        s_span (float): Spanne in s
        step (float): Grobe Schrittweite h

    Returns:
        OrderCheck: Drift bei h und h/2
    """
    drifts = []
    for h in (step, 0.5 * step):
        run = integrate_extended(He, initial, s_span, StepperConfig(method=RK4_FIXED, step=h))
        drifts.append(float(np.max(np.abs(run.residuals - run.residuals[0]))))
    logger.debug("Drift bei h = %g: %.3e, bei h/2: %.3e", step, drifts[0], drifts[1])
    return OrderCheck(step, drifts[0], drifts[1])
