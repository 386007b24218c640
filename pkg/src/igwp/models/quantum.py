"""Monotone metrics on 2x2 positive matrices and the quantum cone.

A monotone metric is generated by an operator-monotone symbol f with
f(1) = 1 and f(t) = t f(1/t).  In the eigenbasis of rho = V diag(x, y) V*
the metric is a weighted Hadamard pairing

    g^f_rho(X, Y) = sum_{ij} c(lam_i, lam_j) Xt_ij conj(Yt_ij),
    c(x, y) = 1/(y f(x/y)),   Xt = V* X V,

with weights 4c(x,x), 4c(y,y), 2c(x,y), 2c(x,y) on the standard orthogonal
tangent basis.  Presets:

    BKM:  f(x) = (x-1)/log x,  c(x,y) = (log x - log y)/(x - y)
    SLD:  f(x) = (1+x)/2,      c(x,y) = 2/(x+y)

The BKM weight is the first divided difference of log, which makes the
metric the integral  int_0^inf Tr[(rho+s)^{-1} X (rho+s)^{-1} Y] ds and its
directional derivative along H the second-divided-difference trilinear form

    dg(X,Y)[H] = - sum_{ijk} w(l_i,l_j,l_k) (Ht_ij Xt_jk Yt_ki
                                             + Xt_ij Ht_jk Yt_ki),
    w(a,b,c) = int_0^inf ds / ((a+s)(b+s)(c+s)).

For 2x2 matrices only the coincidence patterns w(x,x,x) = 1/(2x^2) and
w(x,x,y) = psi(y/x)/x^2 with psi(r) = (r - 1 - log r)/(r - 1)^2 occur; both
are evaluated with series near the removable singularity, so near-degenerate
spectra cost no accuracy.  This gives every BKM-derived metric field
analytic first partials.

The cone structure: scaling a trace-one rho to (t^2/4) rho embeds
R_>0 x D into P(2) so that the radial line has unit speed and the fiber
block scales by t^2; the raw matrix entries are affine coordinates of the
(flat, dually flat with BKM) mixture connection, while the product
coordinates (t, x, y, z) are affine for a *different* flat connection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..charts import ChartBox, box
from ..errors import DomainError
from ..fields import ConnectionField, MetricField
from ..numdiff import gradient

HERMITIAN_TOL = 1e-12

E_DIAG = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
E_REAL = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
E_IMAG = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
E_11 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
E_22 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


def _log_mean_inverse(x: float, y: float) -> float:
    """(log x - log y)/(x - y), stable through x = y."""
    mu = 0.5 * (x + y)
    t = (x - y) / (x + y)
    if abs(t) < 1e-4:
        return (1.0 + t * t / 3.0 + t ** 4 / 5.0) / mu
    return (np.log(x) - np.log(y)) / (x - y)


def _psi(r: float) -> float:
    """(r - 1 - log r)/(r - 1)^2, stable through r = 1."""
    e = r - 1.0
    if abs(e) < 1e-3:
        # alternating series sum_n (-1)^n e^n / (n+2)
        acc, term = 0.0, 1.0
        for n in range(9):
            acc += term / (n + 2.0)
            term *= -e
        return acc
    return (e - np.log(r)) / (e * e)


def _bkm_triple_weight(a: float, b: float, c: float) -> float:
    """int_0^inf ds/((a+s)(b+s)(c+s)) for arguments drawn from two values."""
    if a == b == c:
        return 1.0 / (2.0 * a * a)
    if a == b:
        return _psi(c / a) / (a * a)
    if a == c:
        return _psi(b / a) / (a * a)
    if b == c:
        return _psi(a / b) / (b * b)
    raise DomainError("triple weights with three distinct eigenvalues "
                      "only arise beyond 2x2 matrices")


def _bkm_f(x: float) -> float:
    e = x - 1.0
    if abs(e) < 1e-4:
        return 1.0 / (1.0 - e / 2.0 + e * e / 3.0 - e ** 3 / 4.0)
    return e / np.log(x)


@dataclass(frozen=True)
class MonotoneSymbol:
    """Operator-monotone generator f plus its Morozova-Chentsov weight c."""

    name: str
    f: Callable[[float], float]
    c: Callable[[float, float], float]
    has_derivative: bool = False


BKM = MonotoneSymbol("bkm", _bkm_f, _log_mean_inverse, has_derivative=True)
SLD = MonotoneSymbol("sld", lambda x: 0.5 * (1.0 + x),
                     lambda x, y: 2.0 / (x + y))


@dataclass(frozen=True)
class MonotoneConeModel:
    symbol: MonotoneSymbol = BKM


def _require_hermitian(m, what="matrix"):
    m = np.asarray(m, dtype=complex)
    if np.abs(m - m.conj().T).max() > HERMITIAN_TOL * max(1.0, np.abs(m).max()):
        raise DomainError(f"{what} is not Hermitian")
    return m


def _eig(rho):
    rho = _require_hermitian(rho, "state")
    lam, vecs = np.linalg.eigh(rho)
    if lam[0] <= 0.0:
        raise DomainError(f"state has non-positive eigenvalue {lam[0]:.3e}")
    return lam, vecs


def monotone_metric_2x2(model: MonotoneConeModel, rho, X, Y) -> float:
    """g^f_rho(X, Y) for Hermitian tangents X, Y at a positive 2x2 rho.

    Diagonalize rho, rotate the tangents into the eigenbasis, and apply the
    Hadamard weights c(lam_i, lam_j).  Unitary invariance and the
    homogeneity law g_{k rho}(kX, kX) = k g_rho(X, X) hold by construction.
    """
    lam, V = _eig(rho)
    Xt = V.conj().T @ _require_hermitian(X, "tangent") @ V
    Yt = V.conj().T @ _require_hermitian(Y, "tangent") @ V
    C = np.array([[model.symbol.c(lam[i], lam[j]) for j in range(2)]
                  for i in range(2)])
    return float(np.real(np.sum(C * Xt * Yt.conj())))


class _BkmPoint:
    """BKM pairing and its directional derivative at a fixed state."""

    def __init__(self, rho):
        self.lam, self.V = _eig(rho)
        n = self.lam.size
        self.C = np.array([[_log_mean_inverse(self.lam[i], self.lam[j])
                            for j in range(n)] for i in range(n)])
        self.W = np.empty((n, n, n))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    self.W[i, j, k] = _bkm_triple_weight(
                        self.lam[i], self.lam[j], self.lam[k])

    def rotate(self, X):
        return self.V.conj().T @ np.asarray(X, dtype=complex) @ self.V

    def pair(self, X, Y) -> float:
        Xt, Yt = self.rotate(X), self.rotate(Y)
        return float(np.real(np.sum(self.C * Xt * Yt.conj())))

    def derivative(self, X, Y, H) -> float:
        Xt, Yt, Ht = self.rotate(X), self.rotate(Y), self.rotate(H)
        term = (np.einsum('ijk,ij,jk,ki->', self.W, Ht, Xt, Yt)
                + np.einsum('ijk,ij,jk,ki->', self.W, Xt, Ht, Yt))
        return float(-np.real(term))


def bkm_metric_derivative(rho, X, Y, H) -> float:
    """Directional derivative of g^BKM_rho(X, Y) along a state move H."""
    return _BkmPoint(rho).derivative(X, Y, H)


def density_matrix(u) -> np.ndarray:
    """Trace-one chart: (x, y, z) -> [[x, y+iz], [y-iz, 1-x]]."""
    x, y, z = u
    return np.array([[x, y + 1j * z], [y - 1j * z, 1.0 - x]])

FIBER_TANGENTS = (E_DIAG, E_REAL, E_IMAG)


def fiber_chart() -> ChartBox:
    return box("density2", (0.3, 0.7), (-0.2, 0.2), (-0.2, 0.2))


def _pullback(symbol: MonotoneSymbol, chart: ChartBox, matrix_map,
              tangent_map, second_map, scale: float = 1.0) -> MetricField:
    """Pull a monotone metric back through u -> M(u).

    tangent_map(u)[i] = dM/du_i, second_map(u)[i][j] = d2M/du_i du_j.
    Analytic partials are attached for the BKM symbol (divided-difference
    derivative); other symbols fall back to finite differences.
    """
    def value(u):
        M = matrix_map(u)
        T = tangent_map(u)
        pt = _BkmPoint(M) if symbol.has_derivative else None
        d = len(T)
        G = np.empty((d, d))
        for i in range(d):
            for j in range(i, d):
                if pt is not None:
                    G[i, j] = G[j, i] = scale * pt.pair(T[i], T[j])
                else:
                    G[i, j] = G[j, i] = scale * monotone_metric_2x2(
                        MonotoneConeModel(symbol), M, T[i], T[j])
        return G

    partials = None
    if symbol.has_derivative:
        def partials(u):
            M = matrix_map(u)
            T = tangent_map(u)
            S = second_map(u)
            pt = _BkmPoint(M)
            d = len(T)
            dG = np.empty((d, d, d))
            for k in range(d):
                for i in range(d):
                    for j in range(i, d):
                        v = (pt.derivative(T[i], T[j], T[k])
                             + pt.pair(S[k][i], T[j])
                             + pt.pair(T[i], S[k][j]))
                        dG[k, i, j] = dG[k, j, i] = scale * v
            return dG

    return MetricField(chart=chart, value=value, partials=partials)


def density_matrix_fiber(model: MonotoneConeModel = MonotoneConeModel(),
                         scale: float = 1.0, analytic_partials: bool = True
                         ) -> tuple[ChartBox, MetricField, ConnectionField]:
    """The trace-one 2x2 slice: chart, monotone metric, mixture connection.

    The mixture connection has the raw matrix entries as affine coordinates,
    so its symbols vanish identically on this chart.  scale multiplies the
    metric (the cone fiber at unit radius carries 1/4 of the ambient
    pairing); flatness and duality are scale-invariant.
    """
    chart = fiber_chart()
    zero3 = [[np.zeros((2, 2), dtype=complex)] * 3 for _ in range(3)]
    metric = _pullback(model.symbol, chart, density_matrix,
                       lambda u: FIBER_TANGENTS, lambda u: zero3, scale=scale)
    if not analytic_partials:
        metric = MetricField(chart=chart, value=metric.value, partials=None,
                             fd=metric.fd)
    mixture = ConnectionField(
        chart=chart,
        gamma=lambda u: np.zeros((3, 3, 3)),
        partials=lambda u: np.zeros((3, 3, 3, 3)))
    return chart, metric, mixture


def mixture_connection_action(rho_of, x_coeffs, y_coeffs):
    """(nabla^m_X Y) as the matrix field u -> X(Y rho).

    rho_of maps chart points to Hermitian matrices; x_coeffs / y_coeffs map
    points to coordinate-vector coefficients.  The m-representation of the
    mixture connection is the plain second directional derivative of the
    matrix map, so constant-coefficient pairs on an affine chart give zero.
    """
    def y_rho(u):
        J = gradient(rho_of, np.asarray(u, dtype=float))
        return np.einsum('i,i...->...', np.asarray(y_coeffs(u), float), J)

    def value(u):
        u = np.asarray(u, dtype=float)
        J = gradient(y_rho, u)
        return np.einsum('i,i...->...', np.asarray(x_coeffs(u), float), J)

    return value


@dataclass(frozen=True)
class BkmConeGeometry:
    """Charts, metrics and the two flat connections of the quantum cone.

    cone_*   : chart (t, x, y, z), matrices (t^2/4) rho(x,y,z); the radial
               line has unit speed and the fiber block scales by t^2.
    trace_*  : chart (tau, x, y, z), matrices tau rho(x,y,z); tau = t^2/4.
    product_affine: the connection whose affine coordinates are the product
               chart itself (zero symbols there).
    entry_affine:  the mixture connection, affine in raw matrix entries,
               expressed on the trace chart; its mixed radial symbols are
               delta_ij / tau.
    """

    model: MonotoneConeModel
    fiber_chart: ChartBox
    fiber_metric: MetricField
    fiber_mixture: ConnectionField
    cone_chart: ChartBox
    cone_metric: MetricField
    trace_chart: ChartBox
    trace_metric: MetricField
    product_affine: ConnectionField
    entry_affine: ConnectionField


def bkm_cone_geometry(model: MonotoneConeModel = MonotoneConeModel()
                      ) -> BkmConeGeometry:
    fchart, fmetric, fmix = density_matrix_fiber(model, scale=0.25)

    cone_chart = box("cone2", (0.25, 3.5), *fchart.bounds)
    trace_chart = box("trace2", (0.5, 2.0), *fchart.bounds)

    def cone_matrix(u):
        return (u[0] ** 2 / 4.0) * density_matrix(u[1:])

    def cone_tangents(u):
        t = u[0]
        return [(t / 2.0) * density_matrix(u[1:])] + \
               [(t ** 2 / 4.0) * E for E in FIBER_TANGENTS]

    def cone_seconds(u):
        t = u[0]
        zero = np.zeros((2, 2), dtype=complex)
        S = [[zero] * 4 for _ in range(4)]
        S[0][0] = 0.5 * density_matrix(u[1:])
        for i, E in enumerate(FIBER_TANGENTS, start=1):
            S[0][i] = S[i][0] = (t / 2.0) * E
        return S

    def trace_matrix(u):
        return u[0] * density_matrix(u[1:])

    def trace_tangents(u):
        return [density_matrix(u[1:])] + [u[0] * E for E in FIBER_TANGENTS]

    def trace_seconds(u):
        zero = np.zeros((2, 2), dtype=complex)
        S = [[zero] * 4 for _ in range(4)]
        for i, E in enumerate(FIBER_TANGENTS, start=1):
            S[0][i] = S[i][0] = E
        return S

    cone_metric = _pullback(model.symbol, cone_chart, cone_matrix,
                            cone_tangents, cone_seconds)
    trace_metric = _pullback(model.symbol, trace_chart, trace_matrix,
                             trace_tangents, trace_seconds)

    product_affine = ConnectionField(
        chart=trace_chart,
        gamma=lambda u: np.zeros((4, 4, 4)),
        partials=lambda u: np.zeros((4, 4, 4, 4)))

    def entry_gamma(u):
        tau = u[0]
        G = np.zeros((4, 4, 4))
        idx = np.arange(1, 4)
        G[idx, idx, 0] = G[idx, 0, idx] = 1.0 / tau
        return G

    def entry_gamma_partials(u):
        tau = u[0]
        dG = np.zeros((4, 4, 4, 4))
        idx = np.arange(1, 4)
        dG[0, idx, idx, 0] = dG[0, idx, 0, idx] = -1.0 / tau ** 2
        return dG

    entry_affine = ConnectionField(chart=trace_chart, gamma=entry_gamma,
                                   partials=entry_gamma_partials)

    return BkmConeGeometry(
        model=model, fiber_chart=fchart, fiber_metric=fmetric,
        fiber_mixture=fmix, cone_chart=cone_chart, cone_metric=cone_metric,
        trace_chart=trace_chart, trace_metric=trace_metric,
        product_affine=product_affine, entry_affine=entry_affine)


def entry_chart_vector_on_trace_chart(which: str, u) -> np.ndarray:
    """Components of d/da or d/dd (raw diagonal entries) on the trace chart.

    With tau = a + d, x = a/tau, y = c/tau, z = b/tau:
        d/da = dtau + ((1-x)/tau) dx - (y/tau) dy - (z/tau) dz
        d/dd = dtau - (x/tau) dx   - (y/tau) dy - (z/tau) dz.
    """
    tau, x, y, z = u
    if which == "a":
        return np.array([1.0, (1.0 - x) / tau, -y / tau, -z / tau])
    if which == "d":
        return np.array([1.0, -x / tau, -y / tau, -z / tau])
    raise DomainError(f"unknown entry coordinate {which!r}")
