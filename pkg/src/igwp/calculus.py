"""Coordinate-chart tensor calculus for dual affine connections.

The central identity is the duality pairing

    d_i g(Y, Z) = g(nabla_{d_i} Y, Z) + g(Y, nabla*_{d_i} Z),

which in lowered symbols reads d_i g_{jk} = Gamma_{ij,k} + Gamma*_{ik,j}.
Everything else here is bookkeeping on top of it: torsion, curvature, the
difference tensor P = (nabla - nabla*)/2, the affine Koszul residual, the
constant-curvature residual and the flatness report used by every model in
the zoo.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import ConnectionField, MetricField, PTensorField, require_torsion_free
from .numdiff import FD_DERIVED, FDConfig


def lowered_symbols(g: MetricField, nabla: ConnectionField, p) -> np.ndarray:
    """Gamma_{ij,k} = g_{km} Gamma^m_{ij}, shape (dim, dim, dim) as [i,j,k]."""
    return np.einsum('km,mij->ijk', g(p), nabla(p))


def dual_connection(g: MetricField, nabla: ConnectionField) -> ConnectionField:
    """The connection nabla* paired to nabla by the metric.

    Lowered symbols: Gamma*_{ik,j} = d_i g_{jk} - Gamma_{ij,k}; raised with
    the inverse metric.  Evaluation is pointwise algebra, so the result is
    exactly involutive: dual(dual(nabla)) reproduces nabla to roundoff.
    """
    def gamma_star(p):
        dg = g.partials_at(p)
        low = lowered_symbols(g, nabla, p)
        a = dg - low                       # a[i,j,k] = Gamma*_{ik,j}
        return np.einsum('mj,ijk->mik', g.inverse_at(p), a)

    fd = nabla.fd
    if g.partials is None or nabla.partials is None:
        fd = FD_DERIVED
    return ConnectionField(chart=nabla.chart, gamma=gamma_star, fd=fd,
                           torsion_free=False)


def torsion_at(nabla: ConnectionField, p) -> np.ndarray:
    """T^k_{ij} = Gamma^k_{ij} - Gamma^k_{ji}."""
    G = nabla(p)
    return G - np.swapaxes(G, 1, 2)


def curvature_at(nabla: ConnectionField, p) -> np.ndarray:
    """R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
                 + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}.

    Uses analytic symbol partials when the field carries them, central
    differences otherwise.
    """
    G = nabla(p)
    dG = nabla.partials_at(p)
    r = np.einsum('iljk->lkij', dG) - np.einsum('jlik->lkij', dG)
    quad = np.einsum('lim,mjk->lkij', G, G)
    return r + quad - np.swapaxes(quad, 2, 3)


def p_tensor(g: MetricField, nabla: ConnectionField,
             check_points=None) -> PTensorField:
    """P = (nabla - nabla*)/2 for a torsion-free nabla.

    Rejects connections with torsion: the symmetry and self-adjointness of P
    are theorems only for torsion-free dual pairs.
    """
    pts = check_points if check_points is not None else g.chart.sample(8)
    require_torsion_free(nabla, pts)
    star = dual_connection(g, nabla)

    def value(p):
        return 0.5 * (nabla(p) - star(p))

    return PTensorField(chart=nabla.chart, value=value)


def koszul_residual(g: MetricField, nabla: ConnectionField, p, x, y, z) -> float:
    """Residual of the affine Koszul identity for commuting frame vectors.

    For constant-coefficient coordinate-frame vectors X, Y, Z (all brackets
    vanish) the identity reads

        2 g(nabla_X Y, Z) = X g(Y,Z) + Y g(X,Z) - Z g(X,Y) + 2 g(Y, P_X Z).

    Only coordinate frames are supported; bracket terms are dropped.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    z = np.asarray(z, float)
    gm = g(p)
    dg = g.partials_at(p)
    low = lowered_symbols(g, nabla, p)                 # Gamma_{ij,k}
    star = dual_connection(g, nabla)
    plow = np.einsum('km,mij->ijk', gm, 0.5 * (nabla(p) - star(p)))

    lhs = 2.0 * np.einsum('ijk,i,j,k->', low, x, y, z)
    rhs = (np.einsum('ijk,i,j,k->', dg, x, y, z)
           + np.einsum('mjk,j,m,k->', dg, x, y, z)
           - np.einsum('mij,i,j,m->', dg, x, y, z)
           + 2.0 * np.einsum('ikj,i,j,k->', plow, x, y, z))
    return float(abs(lhs - rhs))


def constant_curvature_residual(g: MetricField, nabla: ConnectionField,
                                k: float, grid) -> float:
    """max |R^l_{kij} - k (g_{jk} d^l_i - g_{ik} d^l_j)| over the grid."""
    worst = 0.0
    for p in grid:
        gm = g(p)
        dim = gm.shape[0]
        eye = np.eye(dim)
        model = k * (np.einsum('jk,li->lkij', gm, eye)
                     - np.einsum('ik,lj->lkij', gm, eye))
        worst = max(worst, float(np.abs(curvature_at(nabla, p) - model).max()))
    return worst


def levi_civita(g: MetricField) -> ConnectionField:
    """Metric connection: Gamma^k_{ij} = (1/2) g^{km}(d_i g_{mj} + d_j g_{mi} - d_m g_{ij})."""
    def gamma(p):
        dg = g.partials_at(p)
        ginv = g.inverse_at(p)
        brack = (np.einsum('imj->mij', dg) + np.einsum('jmi->mij', dg)
                 - np.einsum('mij->mij', dg))
        return 0.5 * np.einsum('km,mij->kij', ginv, brack)

    fd = FDConfig() if g.partials is not None else FD_DERIVED
    return ConnectionField(chart=g.chart, gamma=gamma, fd=fd, torsion_free=True)


def duality_residual_at(g: MetricField, nabla: ConnectionField,
                        nabla_star: ConnectionField, p) -> float:
    """max |d_i g_{jk} - Gamma_{ij,k} - Gamma*_{ik,j}| at p."""
    dg = g.partials_at(p)
    low = lowered_symbols(g, nabla, p)
    low_star = np.einsum('km,mij->ijk', g(p), nabla_star(p))  # Gamma*_{ij,k}
    recon = low + np.einsum('ikj->ijk', low_star)             # + Gamma*_{ik,j}
    return float(np.abs(dg - recon).max())


@dataclass(frozen=True)
class FlatnessReport:
    """Grid maxima of the four flatness obstructions plus the duality check."""

    label: str
    samples: int
    tolerance: float
    max_torsion: float
    max_dual_torsion: float
    max_curvature: float
    max_dual_curvature: float
    max_duality_residual: float

    @property
    def passed(self) -> bool:
        return (max(self.max_torsion, self.max_dual_torsion,
                    self.max_curvature, self.max_dual_curvature,
                    self.max_duality_residual) <= self.tolerance)

    @property
    def worst(self) -> float:
        return max(self.max_torsion, self.max_dual_torsion,
                   self.max_curvature, self.max_dual_curvature,
                   self.max_duality_residual)

    def as_dict(self) -> dict:
        return {
            "model": self.label,
            "residuals": {
                "torsion": self.max_torsion,
                "dual_torsion": self.max_dual_torsion,
                "curvature": self.max_curvature,
                "dual_curvature": self.max_dual_curvature,
                "duality_identity": self.max_duality_residual,
            },
            "samples": self.samples,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def flatness_report(g: MetricField, nabla: ConnectionField, grid,
                    dual: ConnectionField | None = None,
                    tol: float = 1e-6, label: str = "") -> FlatnessReport:
    """Evaluate |T|, |T*|, |R|, |R*| and the duality reconstruction residual.

    A closed-form dual can be passed in (e.g. the (-alpha)-connection); when
    it is, the duality residual is a genuine cross-check of two independent
    constructions rather than an identity of dual_connection.
    """
    star = dual if dual is not None else dual_connection(g, nabla)
    t = ts = r = rs = du = 0.0
    n = 0
    for p in grid:
        n += 1
        t = max(t, float(np.abs(torsion_at(nabla, p)).max()))
        ts = max(ts, float(np.abs(torsion_at(star, p)).max()))
        r = max(r, float(np.abs(curvature_at(nabla, p)).max()))
        rs = max(rs, float(np.abs(curvature_at(star, p)).max()))
        du = max(du, duality_residual_at(g, nabla, star, p))
    return FlatnessReport(label=label, samples=n, tolerance=tol,
                          max_torsion=t, max_dual_torsion=ts,
                          max_curvature=r, max_dual_curvature=rs,
                          max_duality_residual=du)
