#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Erweiterter Phasenraum - Haupteinstiegspunkt der Kommandozeile.

Exit-Codes: 0 alle Urteile bestanden, 1 mindestens ein Urteil nicht bestanden,
2 Konfigurationsfehler, 3 numerischer Fehler.
"""

import logging
import os
import sys
import traceback

# Füge das aktuelle Verzeichnis zum Suchpfad hinzu
current_dir = os.path.dirname(os.path.abspath(__file__))
if current_dir not in sys.path:
    sys.path.insert(0, current_dir)

from cli.commands import dispatch
from cli.parser import build_parser
from core.exceptions import ConfigError, DomainError, ExtendedPhaseSpaceError, IntegrationError

EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3

logger = logging.getLogger("main")


def exception_hook(exctype, value, tb):
    """
    Globaler Exception-Handler für unerwartete Fehler

    Args:
        exctype: Exception-Typ
        value: Exception-Wert
        tb: Traceback
    """
    error_msg = ''.join(traceback.format_exception(exctype, value, tb))
    logger.critical("Ein unerwarteter Fehler ist aufgetreten:\n%s", error_msg)


def configure_logging(verbose=False, quiet=False):
    """Protokollierung auf stderr: --verbose DEBUG, --quiet WARNING, sonst INFO"""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)


def main(argv=None) -> int:
    """
    Hauptfunktion der Anwendung

    Args:
        argv (List[str], optional): Argumente ohne Programmnamen

    Returns:
        int: Exit-Code
    """
    ns = build_parser().parse_args(argv)
    configure_logging(ns.verbose, ns.quiet)
    try:
        return dispatch(ns)
    except ConfigError as e:
        logger.error("Konfigurationsfehler: %s", e)
        return EXIT_CONFIG_ERROR
    except (DomainError, IntegrationError) as e:
        logger.error("Numerischer Fehler: %s", e)
        return EXIT_NUMERICAL_ERROR
    except (ExtendedPhaseSpaceError, ValueError) as e:
        # DomainError ist ebenfalls ein ValueError und wird oben behandelt
        logger.error("Ungültige Eingabe: %s", e)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    # Globalen Exception-Handler setzen
    sys.excepthook = exception_hook
    sys.exit(main())
