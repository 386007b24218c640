"""Gaussian families with common scalar variance ("Takano Gaussian space").

Coordinates (sigma, m_1, ..., m_n) with sigma > 0.  Fisher metric

    ds^2 = (2n dsigma^2 + dm_1^2 + ... + dm_n^2) / sigma^2,

alpha-connection symbols (raised form)

    nabla_{d_i} d_j     = (1-alpha)/(2 n sigma) delta_ij d_sigma
    nabla_{d_i} d_sigma = nabla_{d_sigma} d_i = -(1+alpha)/sigma d_i
    nabla_{d_sigma} d_sigma = -(1+2 alpha)/sigma d_sigma.

The space has constant curvature -(1-alpha^2)/(2n) and is flat exactly at
alpha = +-1.  It is also a doubly warped product over the sigma half-line
with both warp functions proportional to 1/sigma, which is how the scans in
the verify module slot it in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..charts import ChartBox, box
from ..errors import DomainError
from ..fields import ConnectionField, MetricField


@dataclass(frozen=True)
class TakanoSpace:
    n: int = 1
    alpha: float = 0.0
    sigma_bounds: tuple[float, float] = (0.5, 2.0)
    mean_bounds: tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("need n >= 1 mean coordinates")
        if self.sigma_bounds[0] <= 0:
            raise DomainError("sigma must stay positive")

    @property
    def chart(self) -> ChartBox:
        return box(f"takano(n={self.n})",
                   self.sigma_bounds, *([self.mean_bounds] * self.n))

    @property
    def dim(self) -> int:
        return self.n + 1


def takano_metric(space: TakanoSpace) -> MetricField:
    n = space.n

    def value(p):
        s = p[0]
        g = np.eye(n + 1) / s ** 2
        g[0, 0] = 2.0 * n / s ** 2
        return g

    def partials(p):
        s = p[0]
        dg = np.zeros((n + 1, n + 1, n + 1))
        dg[0] = -2.0 * np.eye(n + 1) / s ** 3
        dg[0, 0, 0] = -4.0 * n / s ** 3
        return dg

    return MetricField(chart=space.chart, value=value, partials=partials)


def takano_alpha_connection(space: TakanoSpace,
                            alpha: float | None = None) -> ConnectionField:
    n = space.n
    a = space.alpha if alpha is None else alpha
    c_fiber = (1.0 - a) / (2.0 * n)     # sigma-component of nabla_i d_j, times 1/sigma
    c_mixed = -(1.0 + a)                # d_i component of nabla_i d_sigma, times 1/sigma
    c_line = -(1.0 + 2.0 * a)           # d_sigma component of nabla_sigma d_sigma

    def gamma(p):
        s = p[0]
        G = np.zeros((n + 1, n + 1, n + 1))
        for i in range(1, n + 1):
            G[0, i, i] = c_fiber / s
            G[i, 0, i] = G[i, i, 0] = c_mixed / s
        G[0, 0, 0] = c_line / s
        return G

    def partials(p):
        s = p[0]
        dG = np.zeros((n + 1, n + 1, n + 1, n + 1))
        dG[0] = -gamma(p) / s
        return dG

    return ConnectionField(chart=space.chart, gamma=gamma, partials=partials)


def takano_geometry(space: TakanoSpace) -> tuple[MetricField, ConnectionField]:
    """Closed-form metric and alpha-connection with analytic partials."""
    return takano_metric(space), takano_alpha_connection(space)


def takano_constant_curvature(space: TakanoSpace) -> float:
    """-(1-alpha)(1+alpha)/(2n), the constant sectional value of the family."""
    return -(1.0 - space.alpha ** 2) / (2.0 * space.n)


def takano_warped_spec(space: TakanoSpace):
    """The doubly warped presentation: f = b = sqrt(2n)/sigma over a
    Euclidean base dsigma^2 with fiber metric delta/(2n).

    Returns keyword arguments for warped.WarpedSpec (kept here so the model
    module does not import the warped machinery).
    """
    n = space.n
    base_chart = box(f"sigma(n={n})", space.sigma_bounds)
    fiber_chart = box(f"means(n={n})", *([space.mean_bounds] * n))
    base_metric = MetricField(
        chart=base_chart,
        value=lambda p: np.array([[1.0]]),
        partials=lambda p: np.zeros((1, 1, 1)))
    fiber_metric = MetricField(
        chart=fiber_chart,
        value=lambda q: np.eye(n) / (2.0 * n),
        partials=lambda q: np.zeros((n, n, n)))

    root = np.sqrt(2.0 * n)
    warp = lambda pb: root / pb[0]
    warp_grad = lambda pb: np.array([-root / pb[0] ** 2])
    return dict(base_chart=base_chart, base_metric=base_metric,
                fiber_chart=fiber_chart, fiber_metric=fiber_metric,
                base_warp=warp, base_warp_grad=warp_grad,
                fiber_warp=warp, fiber_warp_grad=warp_grad,
                mode="doubly")
