#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Argumente der Kommandozeile.
Alle Szenario-Flags stehen jedem Unterbefehl zur Verfügung und haben den Standardwert
None, damit nur ausdrücklich gesetzte Flags die JSON-Konfiguration überschreiben.
"""

import argparse

from core.models import STEPPER_METHODS

COMMANDS = ("simulate", "bracket", "symmetry", "check")


def _scenario_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)

    general = common.add_argument_group("Allgemein")
    general.add_argument("--config", help="JSON-Datei mit einer Szenario-Konfiguration")
    general.add_argument("--name", help="Szenarioname (Präfix der Ausgabedateien)")
    general.add_argument("--out-dir", dest="out_dir", help="Ausgabeverzeichnis")
    general.add_argument("--seed", type=int, help="Seed der Stichproben")
    general.add_argument("--ci", action="store_true", help="Reproduzierbarkeit erzwingen (--seed Pflicht)")
    verbosity = general.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Ausführliche Protokollierung")
    verbosity.add_argument("--quiet", action="store_true", help="Nur Warnungen und Fehler")

    system = common.add_argument_group("System")
    system.add_argument("--system", help="kepler, kepler-timedep, relativistic oder free")
    system.add_argument("--mu", help="Kopplung: Zahl, const:<v> oder sin:<a>,<omega>")
    system.add_argument("--mass", type=float, help="Masse m")
    system.add_argument("--c", type=float, help="Lichtgeschwindigkeit c")
    system.add_argument("--potential", help="Potential des relativistischen Teilchens: none oder coulomb:<k>")

    state = common.add_argument_group("Anfangszustand")
    state.add_argument("--q", help="Orte als Komma-Liste, z.B. 1,0")
    state.add_argument("--p", help="Impulse als Komma-Liste, z.B. 0,1.2")
    state.add_argument("--t0", type=float, help="Anfangszeit")
    state.add_argument("--e", type=float, help="Energiekoordinate (Standard: Wert aus dem Lift)")
    state.add_argument("--state", help="Erweiterter Zustand q1..qn,p1..pn,t,e als Komma-Liste")

    stepper = common.add_argument_group("Integrator")
    stepper.add_argument("--param", choices=("t", "s"), help="Parametrisierung der Integration")
    stepper.add_argument("--span", type=float, help="Spanne in t bzw. s")
    stepper.add_argument("--method", choices=STEPPER_METHODS, help="Integrationsverfahren")
    stepper.add_argument("--step", type=float, help="Schrittweite")
    stepper.add_argument("--abs-tol", dest="abs_tol", type=float, help="Absolute Toleranz (adaptiv)")
    stepper.add_argument("--rel-tol", dest="rel_tol", type=float, help="Relative Toleranz (adaptiv)")
    stepper.add_argument("--max-steps", dest="max_steps", type=int, help="Höchstzahl an Schritten")

    checks = common.add_argument_group("Prüfungen")
    checks.add_argument("--invariants", help="Zu überwachende Invarianten als Komma-Liste")
    checks.add_argument("--invariant", help="Invariante für bracket und symmetry")
    checks.add_argument("--samples", type=int, help="Anzahl der Zustände auf der Schale")
    checks.add_argument("--scheme", choices=("analytic", "fd"), help="Gradientenschema")
    checks.add_argument("--eps", type=float, help="Gruppenparameter der Symmetrie")
    checks.add_argument("--mode", choices=("infinitesimal", "finite"), help="Art der Symmetrietransformation")
    checks.add_argument("--delta-s", dest="delta_s", type=float, help="Spanne der Dynamik im Kommutatortest")
    return common


def build_parser() -> argparse.ArgumentParser:
    """
    Erstellt den Parser mit den Unterbefehlen simulate, bracket, symmetry und check

    Returns:
        argparse.ArgumentParser: Der Parser
    """
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Hamiltonsche Dynamik im erweiterten Phasenraum und Noether-Symmetrien"
    )
    common = _scenario_arguments()
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="Trajektorie integrieren und Invarianten überwachen")
    sub.add_parser("bracket", parents=[common], help="Erweiterte Poisson-Klammer [He, I] stichprobenartig prüfen")
    sub.add_parser("symmetry", parents=[common], help="Symmetrietransformation einer Invarianten anwenden")
    sub.add_parser("check", parents=[common], help="Alle Abnahmekriterien ausführen")
    return parser
