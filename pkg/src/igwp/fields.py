"""Metric, connection and P-tensor fields on a chart.

Index conventions used throughout the package:

  metric          g[j, k]          = g_{jk}
  metric partials dg[i, j, k]      = d_i g_{jk}
  connection      gamma[k, i, j]   = Gamma^k_{ij}, the d_k coefficient of
                                     nabla_{d_i} d_j
  conn. partials  dgamma[l, k, i, j] = d_l Gamma^k_{ij}
  lowered symbol  Gamma_{ij,k} = g_{km} Gamma^m_{ij}

Fields are immutable and evaluate as pure functions of the point, so grid
scans may run concurrently and results cannot depend on evaluation order.
Analytic first partials are attached wherever the model has closed forms;
otherwise the finite-difference fallback from numdiff is used with the
field's own FDConfig.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .charts import ChartBox
from .errors import EvaluationError, PreconditionError
from .numdiff import FDConfig, gradient

SYMMETRY_TOL = 1e-12


def _as_point(chart, p):
    return chart.require_inside(p)


@dataclass(frozen=True)
class MetricField:
    """Smooth map point -> symmetric positive-definite matrix."""

    chart: ChartBox
    value: Callable[[np.ndarray], np.ndarray]
    partials: Optional[Callable[[np.ndarray], np.ndarray]] = None
    fd: FDConfig = field(default_factory=FDConfig)

    def __call__(self, p) -> np.ndarray:
        p = _as_point(self.chart, p)
        g = np.asarray(self.value(p), dtype=float)
        scale = max(1.0, float(np.abs(g).max()))
        if np.abs(g - g.T).max() > SYMMETRY_TOL * scale:
            raise EvaluationError(f"metric not symmetric at {p}")
        return g

    def partials_at(self, p) -> np.ndarray:
        """d_i g_{jk}, shape (dim, dim, dim)."""
        p = _as_point(self.chart, p)
        if self.partials is not None:
            return np.asarray(self.partials(p), dtype=float)
        return gradient(self.value, p, self.chart, self.fd)

    def inverse_at(self, p) -> np.ndarray:
        g = self(p)
        d = g.shape[0]
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise EvaluationError(
                f"metric on chart {self.chart.label!r} not positive definite "
                f"at point {np.asarray(p, dtype=float)}")
        if d == 1:
            return np.array([[1.0 / g[0, 0]]])
        if d == 2:
            det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
            return np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]]) / det
        return np.linalg.inv(g)

    @property
    def has_analytic_partials(self) -> bool:
        return self.partials is not None


@dataclass(frozen=True)
class ConnectionField:
    """Smooth map point -> Christoffel array Gamma^k_{ij}."""

    chart: ChartBox
    gamma: Callable[[np.ndarray], np.ndarray]
    partials: Optional[Callable[[np.ndarray], np.ndarray]] = None
    fd: FDConfig = field(default_factory=FDConfig)
    torsion_free: bool = True

    def __call__(self, p) -> np.ndarray:
        p = _as_point(self.chart, p)
        G = np.asarray(self.gamma(p), dtype=float)
        if not np.all(np.isfinite(G)):
            raise EvaluationError(f"connection has non-finite symbols at {p}")
        return G

    def partials_at(self, p) -> np.ndarray:
        """d_l Gamma^k_{ij}, shape (dim, dim, dim, dim)."""
        p = _as_point(self.chart, p)
        if self.partials is not None:
            return np.asarray(self.partials(p), dtype=float)
        return gradient(self.gamma, p, self.chart, self.fd)

    @property
    def has_analytic_partials(self) -> bool:
        return self.partials is not None


@dataclass(frozen=True)
class PTensorField:
    """The difference tensor (nabla - nabla*)/2 of a torsion-free dual pair.

    Pointwise a (1,2)-tensor P^k_{ij}; symmetric in (i, j) and self-adjoint
    with respect to the metric it was built from.
    """

    chart: ChartBox
    value: Callable[[np.ndarray], np.ndarray]

    def __call__(self, p) -> np.ndarray:
        p = _as_point(self.chart, p)
        return np.asarray(self.value(p), dtype=float)

    def apply(self, p, x, y) -> np.ndarray:
        """P_X Y at p for constant-coefficient vectors x, y."""
        return np.einsum('kij,i,j->k', self(p), np.asarray(x, float),
                         np.asarray(y, float))


def require_torsion_free(nabla: ConnectionField, points, tol: float = 1e-10):
    """Reject a connection whose symbols are visibly asymmetric in (i, j)."""
    for p in points:
        G = nabla(p)
        worst = np.abs(G - np.swapaxes(G, 1, 2)).max()
        if worst > tol * max(1.0, np.abs(G).max()):
            raise PreconditionError(
                f"connection has torsion at {np.asarray(p, float)} "
                f"(max asymmetry {worst:.3e})")
