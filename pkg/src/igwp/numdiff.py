"""Finite differences for fields evaluated pointwise on a chart.

Default scheme: second-order central differences with per-coordinate step
h_i = cbrt(eps) * max(1, |p_i|), the usual truncation/rounding balance for
smooth O(1) fields.  Richardson extrapolation (one level, effective fourth
order) is off by default; it is switched on, together with a coarser base
step, when differentiating quantities that are themselves finite-difference
products, where evaluation noise rather than truncation dominates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EvaluationError

EPS = float(np.finfo(float).eps)
STEP_ANALYTIC = EPS ** (1.0 / 3.0)       # ~6.06e-6, noise-free evaluations
STEP_DERIVED = 5e-4                      # evaluations carrying FD noise


@dataclass(frozen=True)
class FDConfig:
    rel_step: float = STEP_ANALYTIC
    richardson: bool = False

    def step(self, coordinate_value: float) -> float:
        return self.rel_step * max(1.0, abs(coordinate_value))


#: configuration for differentiating fields whose own evaluation already
#: involves finite differences (e.g. a dual connection built from FD metric
#: partials); larger step + Richardson keeps the noise amplification down.
FD_DERIVED = FDConfig(rel_step=STEP_DERIVED, richardson=True)


def _shifted(p, i, h):
    q = np.array(p, dtype=float)
    q[i] += h
    return q


def _central(func, p, i, h, chart):
    for s in (+h, -h):
        q = _shifted(p, i, s)
        if chart is not None and not chart.contains(q):
            raise EvaluationError(
                f"finite-difference step leaves chart {chart.label!r} at {q}")
    return (np.asarray(func(_shifted(p, i, +h)))
            - np.asarray(func(_shifted(p, i, -h)))) / (2.0 * h)


def partial_derivative(func, p, i, chart=None, config: FDConfig = FDConfig()):
    """d(func)/dp_i at p; func may return a scalar or an ndarray."""
    p = np.asarray(p, dtype=float)
    h = config.step(p[i])
    d1 = _central(func, p, i, h, chart)
    if not config.richardson:
        return d1
    d2 = _central(func, p, i, h / 2.0, chart)
    return (4.0 * d2 - d1) / 3.0


def gradient(func, p, chart=None, config: FDConfig = FDConfig()):
    """All partial derivatives, stacked along a new leading axis.

    Result shape: (dim,) + shape(func(p)).
    """
    p = np.asarray(p, dtype=float)
    return np.stack([partial_derivative(func, p, i, chart, config)
                     for i in range(p.size)])
