#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Hilfsfunktionen für das Toolkit.
Enthält kleine Funktionen, die von der Kommandozeile und beim Export verwendet werden.
"""

import json
import os
import re
from typing import List

from cryptography.hazmat.primitives import hashes

from core.exceptions import ConfigError


def parse_float_list(text) -> List[float]:
    """
    Wandelt eine Komma-Liste wie "1,0" oder "0, 1.2" in Gleitkommazahlen um.

    Args:
        text (str or Sequence[float]): Komma-Liste oder bereits eine Liste

    Returns:
        List[float]: Die Zahlen

    Raises:
        ConfigError: Bei leeren oder ungültigen Einträgen
    """
    if isinstance(text, (list, tuple)):
        values = list(text)
    else:
        values = [part.strip() for part in str(text).split(',')]
    if not values or any(value == '' for value in values):
        raise ConfigError(f"Leere Zahl in der Liste '{text}'")
    try:
        return [float(value) for value in values]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Ungültige Zahlenliste '{text}': {e}") from e


def config_fingerprint(config: dict) -> str:
    """
    Berechnet einen SHA-256-Fingerabdruck einer aufgelösten Konfiguration.
    Gleiche Konfigurationen liefern unabhängig von der Schlüsselreihenfolge denselben Wert.

    Args:
        config (dict): JSON-serialisierbare Konfiguration

    Returns:
        str: Hexadezimaler Fingerabdruck
    """
    canonical = json.dumps(config, sort_keys=True, separators=(',', ':'), ensure_ascii=True)
    digest = hashes.Hash(hashes.SHA256())
    digest.update(canonical.encode('utf-8'))
    return digest.finalize().hex()


def create_filename(base_name, extension):
    """
    Erstellt einen dateisystemtauglichen Dateinamen aus einem Szenarionamen.

    Args:
        base_name (str): Grundname der Datei
        extension (str): Dateierweiterung

    Returns:
        str: Dateiname
    """
    safe = re.sub(r'[^A-Za-z0-9_.-]+', '_', base_name).strip('_') or "scenario"
    return f"{safe}.{extension}"


def ensure_directory(path):
    """Legt ein Verzeichnis an, falls es noch nicht existiert, und gibt den Pfad zurück"""
    if path:
        os.makedirs(path, exist_ok=True)
    return path
