#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Zufallsstichproben von Zuständen auf der Schale He = 0.
Die Punkte (q, p, t) werden gleichverteilt aus einem Kasten gezogen und mit e = H(q, p, t)
angehoben. Bei festem Seed entsteht immer dieselbe Folge.
"""

import logging
from typing import List

import numpy as np

from core.exceptions import ConfigError, DomainError
from core.models import SamplerBounds
from core.phase_space import ExtendedState

logger = logging.getLogger(__name__)


class OnShellSampler:
    """Klasse für die Erzeugung reproduzierbarer Zustände auf der Schale"""

    def __init__(self, H, bounds: SamplerBounds = None, seed: int = 42):
        """
        Initialisiert den Sampler

        Args:
            H (ConventionalHamiltonian): Hamiltonfunktion für den Lift e = H
            bounds (SamplerBounds, optional): Kasten für q, p und t
            seed (int): Startwert des Zufallsgenerators
        """
        self.H = H
        self.bounds = bounds or SamplerBounds()
        self.seed = seed

    def draw(self, count: int) -> List[ExtendedState]:
        """
        Zieht Zustände auf der Schale

        Args:
            count (int): Anzahl der Zustände

        Returns:
            List[ExtendedState]: Die Zustände in fester Reihenfolge

        Raises:
            ConfigError: Wenn count nicht positiv ist oder der Kasten kaum gültige Zustände enthält
        """
        if count <= 0:
            raise ConfigError("count muss positiv sein")
        rng = np.random.default_rng(self.seed)
        b = self.bounds
        n = self.H.n
        states = []
        attempts = 0
        while len(states) < count:
            attempts += 1
            if attempts > 100 * count:
                raise ConfigError(f"Zu viele verworfene Zustände ({attempts}) im Kasten {b.to_dict()}")
            q = rng.uniform(b.q_min, b.q_max, n)
            p = rng.uniform(b.p_min, b.p_max, n)
            t = rng.uniform(b.t_min, b.t_max) if b.t_max > b.t_min else b.t_min
            if np.linalg.norm(q) < b.r_min:
                continue
            try:
                e = self.H.eval(q, p, t)
            except DomainError:
                continue
            states.append(ExtendedState(q=q, p=p, t=t, e=e))
        logger.debug("%d Zustände gezogen (%d Versuche, Seed %s)", count, attempts, self.seed)
        return states
