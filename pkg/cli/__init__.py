#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
CLI-Modul des Toolkits.
Enthält den Argumentparser, die Unterbefehle und die Abnahmekriterien.
"""

from cli.parser import build_parser
from cli.commands import (
    resolve_config, run_simulate, run_bracket, run_symmetry, run_check, dispatch
)
from cli.acceptance import run_acceptance

__all__ = [
    'build_parser',
    'resolve_config',
    'run_simulate',
    'run_bracket',
    'run_symmetry',
    'run_check',
    'dispatch',
    'run_acceptance'
]
