"""Finite probability simplex: Fisher metric, alpha-connections, and the
positive-measure cone obtained by attaching a scale coordinate.

A family with m atoms is charted by xi = (p_1, ..., p_{m-1}) with p_i > 0
and sum p_i < 1; the last atom carries p_m = 1 - sum.  With the alpha
representation

    L_a(u) = 2/(1-a) u^{(1-a)/2}   (a != 1),      log u   (a = 1),

the metric and connection symbols are finite sums over atoms:

    g_ij      = sum_x  d_i L_a(p) d_j L_{-a}(p)        (independent of a)
    Gamma^{(a)}_{ij,k} = sum_x d_i d_j L_a(p) d_k L_{-a}(p)
                       = -(1+a)/2 * sum_x d_i p d_j p d_k p / p^2.

The scale extension adds tau > 0 with masses tau*p_x.  Its metric splits as
g~_tautau = 1/tau, g~_ij = tau g_ij, and the alpha-connection acquires

    nabla~_X Y   = (nabla_X Y)~ - (1+a)/2 g~(X,Y) dtau
    nabla~_tau X = (1-a)/(2 tau) X,     nabla~_tau tau = -(1+a)/(2 tau) dtau.

Under tau = t^2/4 the scale line has unit speed and the radial coefficient
becomes -alpha/t, which is the cone normal form checked in verify.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..charts import ChartBox, box
from ..errors import DomainError
from ..fields import ConnectionField, MetricField

BOUNDARY_FLOOR = 1e-8


@dataclass(frozen=True)
class SimplexFamily:
    atoms: int = 3
    alpha: float = 0.0

    def __post_init__(self):
        if self.atoms < 2:
            raise DomainError("need at least two atoms")

    @property
    def dim(self) -> int:
        return self.atoms - 1

    @property
    def chart(self) -> ChartBox:
        # A box strictly inside the simplex: coordinates sum to at most 3/4.
        lo = 1.0 / (4.0 * self.dim)
        hi = 3.0 / (4.0 * self.dim)
        return box(f"simplex(m={self.atoms})", *([(lo, hi)] * self.dim))

    def atom_probabilities(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        p = np.append(xi, 1.0 - xi.sum())
        if np.any(p < BOUNDARY_FLOOR):
            raise DomainError(f"probabilities too close to the boundary: {p}")
        return p

    def atom_jacobian(self) -> np.ndarray:
        """D[i, x] = d p_x / d xi_i; constant because p is affine in xi."""
        d, m = self.dim, self.atoms
        D = np.zeros((d, m))
        D[:, :d] = np.eye(d)
        D[:, m - 1] = -1.0
        return D


def _l_prime(u, a):
    return u ** (-(1.0 + a) / 2.0)


def _l_second(u, a):
    return -(1.0 + a) / 2.0 * u ** (-(3.0 + a) / 2.0)


def _cubic_sum(fam: SimplexFamily, xi) -> np.ndarray:
    """S_ijk = sum_x d_i p d_j p d_k p / p^2 (totally symmetric)."""
    p = fam.atom_probabilities(xi)
    D = fam.atom_jacobian()
    return np.einsum('ix,jx,kx,x->ijk', D, D, D, p ** -2.0)


def _cubic_sum_partials(fam: SimplexFamily, xi) -> np.ndarray:
    p = fam.atom_probabilities(xi)
    D = fam.atom_jacobian()
    return -2.0 * np.einsum('lx,ix,jx,kx,x->lijk', D, D, D, D, p ** -3.0)


def simplex_fisher(fam: SimplexFamily) -> MetricField:
    """Fisher metric, evaluated through the literal alpha-representation sum.

    The family's alpha enters the integrand only; the result is
    alpha-independent (the powers cancel atomwise), which the property tests
    verify numerically.
    """
    a = fam.alpha
    D = fam.atom_jacobian()

    def value(xi):
        p = fam.atom_probabilities(xi)
        w = _l_prime(p, a) * _l_prime(p, -a)
        return np.einsum('ix,jx,x->ij', D, D, w)

    return MetricField(chart=fam.chart, value=value,
                       partials=lambda xi: _metric_partials(fam, xi))


def _metric_partials(fam: SimplexFamily, xi) -> np.ndarray:
    """d_l g_ij = -S_lij."""
    return -_cubic_sum(fam, xi)


def simplex_alpha_connection(fam: SimplexFamily,
                             alpha: float | None = None) -> ConnectionField:
    """Raised alpha-connection symbols with analytic partials."""
    a = fam.alpha if alpha is None else alpha
    D = fam.atom_jacobian()

    def lowered(xi):
        p = fam.atom_probabilities(xi)
        w = _l_second(p, a) * _l_prime(p, -a)
        return np.einsum('ix,jx,kx,x->ijk', D, D, D, w)

    def metric_inverse(xi):
        p = fam.atom_probabilities(xi)
        g = np.einsum('ix,jx,x->ij', D, D, 1.0 / p)
        return g, np.linalg.inv(g)

    def gamma(xi):
        _, ginv = metric_inverse(xi)
        return np.einsum('km,ijm->kij', ginv, lowered(xi))

    def partials(xi):
        g, ginv = metric_inverse(xi)
        dg = _metric_partials(fam, xi)
        low = lowered(xi)
        dlow = -(1.0 + a) / 2.0 * _cubic_sum_partials(fam, xi)
        dginv = -np.einsum('km,lmn,nj->lkj', ginv, dg, ginv)
        return (np.einsum('lkm,ijm->lkij', dginv, low)
                + np.einsum('km,lijm->lkij', ginv, dlow))

    return ConnectionField(chart=fam.chart, gamma=gamma, partials=partials)


@dataclass(frozen=True)
class DenormalizedFamily:
    """Positive finite measures tau * p_xi over a simplex family."""

    base: SimplexFamily
    alpha: float = 0.0
    tau_bounds: tuple[float, float] = (1.0 / 16.0, 1.1)
    t_bounds: tuple[float, float] = (0.4, 2.1)

    def __post_init__(self):
        if self.tau_bounds[0] <= 0 or self.t_bounds[0] <= 0:
            raise DomainError("scale coordinate must stay positive")

    @property
    def dim(self) -> int:
        return self.base.dim + 1

    def chart(self, coordinates: str = "tau") -> ChartBox:
        radial = self.tau_bounds if coordinates == "tau" else self.t_bounds
        return box(f"denorm(m={self.base.atoms},{coordinates})",
                   radial, *self.base.chart.bounds)


def denormalization_geometry(fam: DenormalizedFamily,
                             coordinates: str = "tau"
                             ) -> tuple[MetricField, ConnectionField]:
    """Metric and alpha-connection of the scale extension.

    coordinates="tau": chart (tau, xi), metric diag(1/tau, tau*g).
    coordinates="t":   chart (t, xi) with tau = t^2/4; the scale line has
    unit speed and the radial symbol is exactly -alpha/t.
    """
    if coordinates not in ("tau", "t"):
        raise DomainError(f"unknown chart {coordinates!r}")
    a = fam.alpha
    base = SimplexFamily(fam.base.atoms, fam.base.alpha)
    fisher = simplex_fisher(base)
    conn = simplex_alpha_connection(base, alpha=a)
    chart = fam.chart(coordinates)
    d = fam.dim

    def split(p):
        return p[0], p[1:]

    if coordinates == "tau":
        def value(p):
            tau, xi = split(p)
            G = np.zeros((d, d))
            G[0, 0] = 1.0 / tau
            G[1:, 1:] = tau * fisher.value(xi)
            return G

        def partials(p):
            tau, xi = split(p)
            dG = np.zeros((d, d, d))
            dG[0, 0, 0] = -1.0 / tau ** 2
            dG[0, 1:, 1:] = fisher.value(xi)
            dG[1:, 1:, 1:] = tau * _metric_partials(base, xi)
            return dG

        def gamma(p):
            tau, xi = split(p)
            G = np.zeros((d, d, d))
            G[1:, 1:, 1:] = conn.gamma(xi)
            G[0, 1:, 1:] = -(1.0 + a) / 2.0 * tau * fisher.value(xi)
            idx = np.arange(1, d)
            G[idx, idx, 0] = G[idx, 0, idx] = (1.0 - a) / (2.0 * tau)
            G[0, 0, 0] = -(1.0 + a) / (2.0 * tau)
            return G

        def gamma_partials(p):
            tau, xi = split(p)
            dG = np.zeros((d, d, d, d))
            g = fisher.value(xi)
            dg = _metric_partials(base, xi)
            idx = np.arange(1, d)
            # radial derivative
            dG[0, 1:, 1:, 1:] = 0.0
            dG[0, 0, 1:, 1:] = -(1.0 + a) / 2.0 * g
            dG[0, idx, idx, 0] = dG[0, idx, 0, idx] = -(1.0 - a) / (2.0 * tau ** 2)
            dG[0, 0, 0, 0] = (1.0 + a) / (2.0 * tau ** 2)
            # fiber derivatives
            dG[1:, 1:, 1:, 1:] = conn.partials(xi)
            dG[1:, 0, 1:, 1:] = -(1.0 + a) / 2.0 * tau * dg
            return dG

    else:
        def value(p):
            t, xi = split(p)
            G = np.zeros((d, d))
            G[0, 0] = 1.0
            G[1:, 1:] = t ** 2 / 4.0 * fisher.value(xi)
            return G

        def partials(p):
            t, xi = split(p)
            dG = np.zeros((d, d, d))
            dG[0, 1:, 1:] = t / 2.0 * fisher.value(xi)
            dG[1:, 1:, 1:] = t ** 2 / 4.0 * _metric_partials(base, xi)
            return dG

        def gamma(p):
            t, xi = split(p)
            G = np.zeros((d, d, d))
            G[1:, 1:, 1:] = conn.gamma(xi)
            G[0, 1:, 1:] = -(1.0 + a) * t / 4.0 * fisher.value(xi)
            idx = np.arange(1, d)
            G[idx, idx, 0] = G[idx, 0, idx] = (1.0 - a) / t
            G[0, 0, 0] = -a / t
            return G

        def gamma_partials(p):
            t, xi = split(p)
            dG = np.zeros((d, d, d, d))
            g = fisher.value(xi)
            dg = _metric_partials(base, xi)
            idx = np.arange(1, d)
            dG[0, 0, 1:, 1:] = -(1.0 + a) / 4.0 * g
            dG[0, idx, idx, 0] = dG[0, idx, 0, idx] = -(1.0 - a) / t ** 2
            dG[0, 0, 0, 0] = a / t ** 2
            dG[1:, 1:, 1:, 1:] = conn.partials(xi)
            dG[1:, 0, 1:, 1:] = -(1.0 + a) * t / 4.0 * dg
            return dG

    metric = MetricField(chart=chart, value=value, partials=partials)
    connection = ConnectionField(chart=chart, gamma=gamma,
                                 partials=gamma_partials)
    return metric, connection
