#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Import- und Export-Funktionen für das Toolkit.
Trajektorien werden als CSV geschrieben, Prüfberichte als JSON. Die CSV-Datei beginnt direkt mit der
Kopfzeile; die Art des Parameters (t oder s) steht im Bericht unter scenario.outputs.parameter_kind.
"""

import csv
import json
import logging
from typing import List

import numpy as np

from core.models import CheckReport
from core.phase_space import ParameterKind, Trajectory
from utils.helpers import config_fingerprint

logger = logging.getLogger(__name__)

REPORT_FORMAT_VERSION = '1.0'


def trajectory_header(n: int) -> List[str]:
    """Spaltennamen param,t,e,q1..qn,p1..pn,He_residual"""
    return (['param', 't', 'e'] + [f'q{i}' for i in range(1, n + 1)]
            + [f'p{i}' for i in range(1, n + 1)] + ['He_residual'])


def _format(value) -> str:
    # 17 signifikante Stellen reichen für binary64
    return format(float(value), '.17g')


def export_to_csv(trajectory: Trajectory, filepath: str) -> str:
    """
    Exportiert eine Trajektorie in eine CSV-Datei.

    Args:
        trajectory (Trajectory): Die zu exportierende Trajektorie
        filepath (str): Pfad zur Zieldatei

    Returns:
        str: Der Pfad der geschriebenen Datei
    """
    n = trajectory.n
    with open(filepath, 'w', newline='', encoding='utf-8') as csvfile:
        writer = csv.writer(csvfile)
        writer.writerow(trajectory_header(n))
        for i in range(len(trajectory)):
            row = trajectory.states[i]
            residual = '' if trajectory.residuals is None else _format(trajectory.residuals[i])
            writer.writerow([_format(trajectory.params[i]), _format(row[2 * n]), _format(row[2 * n + 1])]
                            + [_format(v) for v in row[:2 * n]] + [residual])
    logger.info("Trajektorie mit %d Punkten nach %s exportiert", len(trajectory), filepath)
    return filepath


def import_from_csv(filepath: str, parameter_kind: ParameterKind = ParameterKind.TIME_T) -> Trajectory:
    """
    Importiert eine Trajektorie aus einer CSV-Datei.

    Args:
        filepath (str): Pfad zur Quelldatei
        parameter_kind (ParameterKind): Art der param-Spalte, siehe outputs.parameter_kind im Bericht

    Returns:
        Trajectory: Die gelesene Trajektorie, bitgenau wie exportiert

    Raises:
        ValueError: Wenn Kopfzeile oder Werte nicht zum Format passen
    """
    with open(filepath, 'r', newline='', encoding='utf-8') as csvfile:
        reader = csv.reader(csvfile)
        header = next(reader, None)
        if not header or len(header) < 6 or (len(header) - 4) % 2 != 0:
            raise ValueError(f"Ungültige Kopfzeile in {filepath}")
        n = (len(header) - 4) // 2
        if header != trajectory_header(n):
            raise ValueError(f"Unerwartete Spalten in {filepath}: {','.join(header)}")

        params, states, residuals = [], [], []
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"Zeile mit {len(row)} statt {len(header)} Werten in {filepath}")
            values = [float(v) for v in row[:-1]]
            params.append(values[0])
            states.append(values[3:3 + 2 * n] + [values[1], values[2]])
            residuals.append(row[-1])

    if all(r == '' for r in residuals):
        residual_column = None
    else:
        residual_column = np.array([float(r) for r in residuals])
    return Trajectory(ParameterKind(parameter_kind), np.array(params), np.array(states), residual_column)


def export_to_json(report: CheckReport, filepath: str) -> str:
    """
    Exportiert einen Prüfbericht in eine JSON-Datei.

    Args:
        report (CheckReport): Der Bericht
        filepath (str): Pfad zur Zieldatei

    Returns:
        str: Der Pfad der geschriebenen Datei

    Raises:
        ValueError: Wenn der Bericht nicht-endliche Zahlen außerhalb der Statistiken enthält
    """
    export_data = {
        'version': REPORT_FORMAT_VERSION,
        'fingerprint': config_fingerprint(report.scenario),
        'count': len(report.verdicts),
        'report': report.to_dict()
    }
    with open(filepath, 'w', encoding='utf-8') as f:
        json.dump(export_data, f, ensure_ascii=False, indent=2, allow_nan=False)
    logger.info("Bericht nach %s exportiert (%d Urteile)", filepath, len(report.verdicts))
    return filepath


def import_from_json(filepath: str) -> CheckReport:
    """
    Importiert einen Prüfbericht aus einer JSON-Datei.

    Args:
        filepath (str): Pfad zur Quelldatei

    Returns:
        CheckReport: Der gelesene Bericht

    Raises:
        ValueError: Bei ungültigem Format oder abweichendem Fingerabdruck
    """
    with open(filepath, 'r', encoding='utf-8') as f:
        data = json.load(f)

    if not isinstance(data, dict) or 'report' not in data:
        raise ValueError("Ungültiges JSON-Format: 'report' fehlt")

    report = CheckReport.from_dict(data['report'])
    fingerprint = data.get('fingerprint')
    if fingerprint is not None and fingerprint != config_fingerprint(report.scenario):
        raise ValueError("Der Fingerabdruck passt nicht zur enthaltenen Konfiguration")
    return report
