#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Utils-Modul des Toolkits.
Enthält Hilfsfunktionen sowie den CSV- und JSON-Export.
"""

from utils.helpers import (
    parse_float_list, config_fingerprint, create_filename, ensure_directory
)

from utils.import_export import (
    export_to_csv, import_from_csv,
    export_to_json, import_from_json
)

__all__ = [
    # helpers.py
    'parse_float_list',
    'config_fingerprint',
    'create_filename',
    'ensure_directory',

    # import_export.py
    'export_to_csv',
    'import_from_csv',
    'export_to_json',
    'import_from_json'
]
