"""Shared tuning knobs for the samplers.

One frozen dataclass holds every constant the algorithms consume, so a run
can be reproduced from (data, seed, Config) alone.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    """Algorithm constants.

    start   rows labeled up front, before any model exists
    halt    acquisition iterations after the seed phase
    best    exponent sizing the elite split: round(n**best) of n labeled rows
    upper   fraction of the ranked candidate pool kept each round
    m       count offset smoothing symbolic likelihoods
    k       count offset smoothing class priors
    far     percentile rank used when picking distant endpoint rows
    half    sample size when hunting for endpoint rows
    stop    exponent in the bi-clustering stop rule 2 * n**stop
    """

    start: int = 4
    halt: int = 16
    best: float = 0.5
    upper: float = 0.8
    m: int = 2
    k: int = 1
    far: float = 0.95
    half: int = 256
    stop: float = 0.5

    def __post_init__(self) -> None:
        if self.start < 2:
            raise ValueError(f"start must be >= 2, got {self.start}")
        if not 0 < self.best <= 1:
            raise ValueError(f"best must be in (0, 1], got {self.best}")
        if not 0 < self.upper <= 1:
            raise ValueError(f"upper must be in (0, 1], got {self.upper}")
        if not 0 < self.far <= 1:
            raise ValueError(f"far must be in (0, 1], got {self.far}")
        if self.half < 2:
            raise ValueError(f"half must be >= 2, got {self.half}")
        if self.m < 0 or self.k < 0:
            raise ValueError("m and k must be non-negative")
