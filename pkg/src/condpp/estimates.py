"""Shared result container for Monte Carlo estimates."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class MCEstimate:
    """Point estimate with a standard error and its provenance.

    capped counts replicas that hit an event budget and contributed a
    truncated, worst-case-inflated value; consumers decide whether the
    capped fraction is tolerable (verification requires < 1e-3).
    """

    estimate: float
    se: float
    replicas: int
    seed: int
    capped: int = 0

    @property
    def capped_fraction(self) -> float:
        return self.capped / self.replicas if self.replicas else 0.0

    def within(self, target: float, k_se: float = 3.0) -> bool:
        """|estimate - target| <= k_se * se."""
        return abs(self.estimate - target) <= k_se * self.se
