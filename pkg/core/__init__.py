#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Core-Modul des Toolkits.
Enthält den erweiterten Phasenraum, die Systeme, die Integration,
die Poisson-Klammern und die Noether-Symmetrien.
"""

from core.exceptions import (
    ExtendedPhaseSpaceError, DomainError, IntegrationError, ConfigError, SymmetryError
)
from core.models import (
    StepperConfig, GradientScheme, SamplerBounds, DriftReport, ScanStatistics,
    Verdict, CheckReport, ScenarioConfig
)
from core.phase_space import (
    ConventionalState, ExtendedState, ParameterKind, Trajectory, lift, project, constraint_residual
)
from core.systems import (
    kepler, free_particle, relativistic_conventional, relativistic_extended,
    standard_lift, energy_branch, build_system, register_system
)
from core.dynamics import (
    conventional_rhs, extended_rhs, integrate_conventional, integrate_extended, monitor
)
from core.brackets import extended_poisson, total_time_derivative, conservation_scan
from core.sampling import OnShellSampler
from core.noether import (
    infinitesimal_transform, finite_transform, canonicity_check, flow_commutation_check,
    conventional_subgroup_transform, scaled_rotation_decomposition,
    angular_momentum, runge_lenz, runge_lenz_extended, build_invariant, register_invariant
)

__all__ = [
    'ExtendedPhaseSpaceError', 'DomainError', 'IntegrationError', 'ConfigError', 'SymmetryError',
    'StepperConfig', 'GradientScheme', 'SamplerBounds', 'DriftReport', 'ScanStatistics',
    'Verdict', 'CheckReport', 'ScenarioConfig',
    'ConventionalState', 'ExtendedState', 'ParameterKind', 'Trajectory', 'lift', 'project',
    'constraint_residual',
    'kepler', 'free_particle', 'relativistic_conventional', 'relativistic_extended',
    'standard_lift', 'energy_branch', 'build_system', 'register_system',
    'conventional_rhs', 'extended_rhs', 'integrate_conventional', 'integrate_extended', 'monitor',
    'extended_poisson', 'total_time_derivative', 'conservation_scan',
    'OnShellSampler',
    'infinitesimal_transform', 'finite_transform', 'canonicity_check', 'flow_commutation_check',
    'conventional_subgroup_transform', 'scaled_rotation_decomposition',
    'angular_momentum', 'runge_lenz', 'runge_lenz_extended', 'build_invariant', 'register_invariant'
]
