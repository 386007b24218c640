"""Coordinate boxes and deterministic sample grids.

Every field in this package lives on a ChartBox: a named product of open
intervals.  Sample grids are drawn from a scrambled Halton sequence inside a
margin-shrunk copy of the box, so reports are reproducible for a fixed seed
and never touch coordinate singularities sitting on the boundary (sigma -> 0
and friends).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .errors import DomainError

DEFAULT_SAMPLES = 64
DEFAULT_MARGIN = 0.1


@dataclass(frozen=True)
class ChartBox:
    """An open coordinate box: per-coordinate (lower, upper) bounds."""

    label: str
    bounds: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.bounds) < 1:
            raise DomainError("chart must have dimension >= 1")
        for lo, hi in self.bounds:
            if not lo < hi:
                raise DomainError(f"chart {self.label!r}: empty interval ({lo}, {hi})")

    @property
    def dim(self) -> int:
        return len(self.bounds)

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            return False
        return all(lo < x < hi for x, (lo, hi) in zip(p, self.bounds))

    def require_inside(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if not self.contains(p):
            raise DomainError(f"point {p} outside chart {self.label!r} {self.bounds}")
        return p

    def sample(self, n: int = DEFAULT_SAMPLES, seed: int = 0,
               margin: float = DEFAULT_MARGIN) -> np.ndarray:
        """Low-discrepancy grid of n points, shape (n, dim).

        Points fill the box shrunk by `margin` per side, so finite-difference
        stencils around any sample stay strictly inside the chart.
        """
        lo = np.array([b[0] for b in self.bounds])
        hi = np.array([b[1] for b in self.bounds])
        width = hi - lo
        engine = qmc.Halton(d=self.dim, scramble=True, seed=seed)
        u = engine.random(n)
        return lo + margin * width + u * (1.0 - 2.0 * margin) * width

    def product(self, other: "ChartBox", label: str | None = None) -> "ChartBox":
        """Concatenate two boxes (base coordinates first, then fiber)."""
        return ChartBox(label or f"{self.label}x{other.label}",
                        self.bounds + other.bounds)


def box(label: str, *intervals) -> ChartBox:
    """Shorthand constructor: box('takano', (0.5, 2.0), (-1, 1))."""
    return ChartBox(label, tuple((float(a), float(b)) for a, b in intervals))
