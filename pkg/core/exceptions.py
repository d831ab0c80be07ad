#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Fehlerklassen des Toolkits.
Alle Fehler leiten von den eingebauten Typen ab, die auch sonst geworfen werden,
damit aufrufender Code weiterhin ``ValueError`` bzw. ``RuntimeError`` abfangen kann.
"""


class ExtendedPhaseSpaceError(Exception):
    """Basisklasse für alle Fehler des Toolkits"""


class DomainError(ExtendedPhaseSpaceError, ValueError):
    """Eine Funktion wurde außerhalb ihres Definitionsbereichs ausgewertet (z.B. r = 0)"""


class IntegrationError(ExtendedPhaseSpaceError, RuntimeError):
    """Die numerische Integration musste abgebrochen werden"""


class ConfigError(ExtendedPhaseSpaceError, ValueError):
    """Ungültige Konfiguration oder unbekannter Name"""


class SymmetryError(ExtendedPhaseSpaceError, ValueError):
    """Eine Invariante hat die Noether-Prüfung nicht bestanden"""
