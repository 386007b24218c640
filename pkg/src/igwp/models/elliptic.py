"""One-dimensional elliptic location-scale families.

A generator h > 0 on [0, inf) defines densities h((x-mu)^2/sigma^2)/sigma.
With Z distributed under h(z^2) and W = d log h(u)/du evaluated at u = Z^2,
the three moments

    a = E[Z^2 W^2],   b = E[Z^4 W^2],   d = E[Z^6 W^3]

determine the Fisher metric

    ds^2 = (4a dmu^2 + (4b-1) dsigma^2) / sigma^2.

Substituting t = sqrt(4b-1) log sigma turns this into the warped normal form
dt^2 + f(t)^2 dmu^2 with f(t) = sqrt(4a) exp(-t/sqrt(4b-1)): a unit-speed
line warped over the location axis.  The radial coefficient of the
alpha-connection family is alpha (6b+4d-1)/(4b-1)^{3/2}, and a dually flat
pair compatible with the warped structure exists iff the pair

    k l - 1/(4b-1) - l^2 = 0,
    -k/sqrt(4b-1) - l' + 2l/sqrt(4b-1) = 0

admits a solution; for constant l the unique solution is
(k, l) = (2, 1)/sqrt(4b-1).  Presets: Gauss, Cauchy, Student-t.  The Cauchy
family is the showcase where no alpha-connection is dually flat yet the
constant-solution pair is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from ..charts import ChartBox, box
from ..errors import DomainError, EvaluationError, PreconditionError
from ..fields import ConnectionField, MetricField


@dataclass(frozen=True)
class EllipticConstants:
    a: float
    b: float
    d: float

    def __post_init__(self):
        if 4.0 * self.b - 1.0 <= 0.0:
            raise DomainError(f"need 4b - 1 > 0, got b = {self.b}")
        if self.a <= 0.0:
            raise DomainError(f"need a > 0, got a = {self.a}")

    @property
    def beta(self) -> float:
        """1/sqrt(4b-1), the logarithmic decay rate of the warp."""
        return 1.0 / math.sqrt(4.0 * self.b - 1.0)


@dataclass(frozen=True)
class GeneratorPreset:
    """Density generator h(u) and its logarithmic derivative w = (log h)'."""

    name: str
    h: Callable[[float], float]
    w: Callable[[float], float]


def _student_norm(k: float) -> float:
    return math.gamma((k + 1.0) / 2.0) / (math.sqrt(k * math.pi)
                                          * math.gamma(k / 2.0))


def generator_preset(name: str, dof: float | None = None) -> GeneratorPreset:
    if name == "gauss":
        c = 1.0 / math.sqrt(2.0 * math.pi)
        return GeneratorPreset("gauss", lambda u: c * math.exp(-u / 2.0),
                               lambda u: -0.5)
    if name == "cauchy":
        return GeneratorPreset("cauchy", lambda u: 1.0 / (math.pi * (1.0 + u)),
                               lambda u: -1.0 / (1.0 + u))
    if name == "student":
        if dof is None or dof <= 0:
            raise DomainError("student preset needs positive degrees of freedom")
        k = float(dof)
        c = _student_norm(k)
        return GeneratorPreset(
            f"student(k={k:g})",
            lambda u: c * (1.0 + u / k) ** (-(k + 1.0) / 2.0),
            lambda u: -(k + 1.0) / (2.0 * (k + u)))
    raise DomainError(f"unknown generator preset {name!r}")


def elliptic_closed_form_constants(name: str,
                                   dof: float | None = None) -> EllipticConstants:
    """The tabulated moment constants of the three presets."""
    if name == "gauss":
        return EllipticConstants(0.25, 0.75, -15.0 / 8.0)
    if name == "cauchy":
        return EllipticConstants(0.125, 0.375, -5.0 / 16.0)
    if name == "student":
        if dof is None or dof <= 0:
            raise DomainError("student preset needs positive degrees of freedom")
        k = float(dof)
        return EllipticConstants(
            (k + 1.0) / (4.0 * (k + 3.0)),
            3.0 * (k + 1.0) / (4.0 * (k + 3.0)),
            -15.0 * (k + 1.0) ** 2 / (8.0 * (k + 3.0) * (k + 5.0)))
    raise DomainError(f"unknown generator preset {name!r}")


def elliptic_constants(name: str, dof: float | None = None,
                       abs_tol: float = 1e-10) -> EllipticConstants:
    """Moment constants by adaptive quadrature over the whole line.

    Raises EvaluationError with the achieved error estimate if QUADPACK
    cannot certify the requested absolute tolerance.
    """
    gen = generator_preset(name, dof)

    def density(z):
        return gen.h(z * z)

    def moment(power, wpower):
        f = lambda z: z ** power * gen.w(z * z) ** wpower * density(z)
        val, err = quad(f, -np.inf, np.inf, epsabs=abs_tol * 1e-2,
                        epsrel=1e-11, limit=400)
        if err > abs_tol:
            raise EvaluationError(
                f"quadrature for E[Z^{power} W^{wpower}] of {gen.name} did not "
                f"converge: error estimate {err:.3e} > {abs_tol:.1e}")
        return val

    norm, err = quad(density, -np.inf, np.inf, epsabs=1e-12, limit=400)
    if abs(norm - 1.0) > 1e-8:
        raise EvaluationError(
            f"generator {gen.name} not normalized: integral {norm!r}")
    return EllipticConstants(moment(2, 2), moment(4, 2), moment(6, 3))


@dataclass(frozen=True)
class EllipticFamily:
    generator: str
    constants: EllipticConstants
    dof: float | None = None
    mu_bounds: tuple[float, float] = (-1.0, 1.0)
    sigma_bounds: tuple[float, float] = (0.5, 2.0)

    @classmethod
    def from_preset(cls, name: str, dof: float | None = None,
                    quadrature: bool = False) -> "EllipticFamily":
        c = (elliptic_constants(name, dof) if quadrature
             else elliptic_closed_form_constants(name, dof))
        return cls(generator=name, constants=c, dof=dof)

    @property
    def location_scale_chart(self) -> ChartBox:
        return box(f"elliptic({self.generator})",
                   self.mu_bounds, self.sigma_bounds)

    @property
    def warped_chart(self) -> ChartBox:
        q = 1.0 / self.constants.beta
        lo = q * math.log(self.sigma_bounds[0] * 0.9)
        hi = q * math.log(self.sigma_bounds[1] * 1.1)
        return box(f"elliptic({self.generator},t)", (lo, hi), self.mu_bounds)


def warp_profile(fam: EllipticFamily):
    """f(t) = sqrt(4a) exp(-beta t) and its derivative."""
    c = fam.constants
    f0 = math.sqrt(4.0 * c.a)
    beta = c.beta

    def f(t):
        return f0 * math.exp(-beta * t)

    def fp(t):
        return -beta * f(t)

    return f, fp


def elliptic_fisher_metric(fam: EllipticFamily) -> MetricField:
    """Fisher metric on the (mu, sigma) chart."""
    c = fam.constants

    def value(p):
        s = p[1]
        return np.diag([4.0 * c.a, 4.0 * c.b - 1.0]) / s ** 2

    def partials(p):
        s = p[1]
        dg = np.zeros((2, 2, 2))
        dg[1] = -2.0 * value(p) / s
        return dg

    return MetricField(chart=fam.location_scale_chart, value=value,
                       partials=partials)


def elliptic_warped_metric(fam: EllipticFamily) -> MetricField:
    """The same metric in unit-speed coordinates (t, mu)."""
    f, _ = warp_profile(fam)
    beta = fam.constants.beta

    def value(p):
        return np.diag([1.0, f(p[0]) ** 2])

    def partials(p):
        dg = np.zeros((2, 2, 2))
        dg[0, 1, 1] = -2.0 * beta * f(p[0]) ** 2
        return dg

    return MetricField(chart=fam.warped_chart, value=value, partials=partials)


def alpha_radial_coefficient(fam: EllipticFamily, alpha: float) -> float:
    """Coefficient of d_t in nabla^(alpha)_{d_t} d_t."""
    c = fam.constants
    return alpha * (6.0 * c.b + 4.0 * c.d - 1.0) / (4.0 * c.b - 1.0) ** 1.5


def alpha_p_line_coefficient(fam: EllipticFamily, alpha: float) -> float:
    """Radial P coefficient of the (nabla^(-alpha), nabla^(alpha)) pair."""
    return -alpha_radial_coefficient(fam, alpha)


def dually_flat_alpha(fam: EllipticFamily) -> float | None:
    """The alpha whose connection pair can be dually flat, if any.

    Solves -alpha (6b+4d-1)/(4b-1)^{3/2} = 2/sqrt(4b-1); when 6b+4d-1 = 0
    (the Cauchy family) no alpha-connection works and None is returned.
    """
    c = fam.constants
    denom = 6.0 * c.b + 4.0 * c.d - 1.0
    if denom == 0.0:
        return None
    return -2.0 * (4.0 * c.b - 1.0) / denom


def _as_time_function(v):
    if callable(v):
        return v
    return lambda t, v=float(v): v


def warped_connection_pair(fam: EllipticFamily, k, l, gamma: float = 0.0,
                           k_prime=0.0, l_prime=0.0
                           ) -> tuple[ConnectionField, ConnectionField]:
    """The warped-compatible pair with radial coefficient k and P_X V = l V.

    Symbols on the (t, mu) chart (beta = 1/sqrt(4b-1), f the warp):

        D_t t  = k(t) d_t
        D_t mu = (l(t) - beta) d_mu
        D_mu mu = gamma d_mu + (beta + l(t)) f(t)^2 d_t

    The horizontal component (beta + l) f^2 = -f f' + l f^2 is forced by
    self-adjointness of P (P_mu mu pairs with P_t mu through the metric).
    The dual is 2 * Levi-Civita - D, returned in closed form.
    """
    kf, lf = _as_time_function(k), _as_time_function(l)
    kpf, lpf = _as_time_function(k_prime), _as_time_function(l_prime)
    f, _ = warp_profile(fam)
    beta = fam.constants.beta
    chart = fam.warped_chart

    def gamma_of(sign):
        def g(p):
            t = p[0]
            f2 = f(t) ** 2
            G = np.zeros((2, 2, 2))
            G[0, 0, 0] = sign * kf(t)
            G[1, 0, 1] = G[1, 1, 0] = sign * lf(t) - beta
            G[0, 1, 1] = (beta + sign * lf(t)) * f2
            G[1, 1, 1] = sign * gamma
            return G
        return g

    def partials_of(sign):
        def dg(p):
            t = p[0]
            f2 = f(t) ** 2
            out = np.zeros((2, 2, 2, 2))
            out[0, 0, 0, 0] = sign * kpf(t)
            out[0, 1, 0, 1] = out[0, 1, 1, 0] = sign * lpf(t)
            out[0, 0, 1, 1] = (sign * lpf(t)
                               - 2.0 * beta * (beta + sign * lf(t))) * f2
            return out
        return dg

    primal = ConnectionField(chart=chart, gamma=gamma_of(+1),
                             partials=partials_of(+1))
    dual = ConnectionField(chart=chart, gamma=gamma_of(-1),
                           partials=partials_of(-1))
    return primal, dual


def dually_flat_connection(fam: EllipticFamily, k=None, l=None,
                           gamma: float = 0.0, gate_tol: float = 1e-10,
                           n_gate: int = 17
                           ) -> tuple[MetricField, ConnectionField, ConnectionField]:
    """Metric plus a dually flat warped-compatible pair.

    Defaults to the constant solution (k, l) = (2, 1)/sqrt(4b-1); arbitrary
    (k, l) are accepted but rejected unless they satisfy the flatness system
    to gate_tol on a radial grid.
    """
    c = fam.constants
    beta = c.beta
    if k is None and l is None:
        k, l = 2.0 * beta, beta
    kf, lf = _as_time_function(k), _as_time_function(l)
    lo, hi = fam.warped_chart.bounds[0]
    ts = np.linspace(lo + 1e-3, hi - 1e-3, n_gate)
    h = 1e-5
    worst = 0.0
    for t in ts:
        kv, lv = kf(t), lf(t)
        dl = (lf(t + h) - lf(t - h)) / (2.0 * h)
        r1 = kv * lv - beta ** 2 - lv ** 2
        r2 = -kv * beta - dl + 2.0 * lv * beta
        worst = max(worst, abs(r1), abs(r2))
    if worst > gate_tol:
        raise PreconditionError(
            f"(k, l) fail the flatness system: max residual {worst:.3e} "
            f"> {gate_tol:.1e}")
    primal, dual = warped_connection_pair(fam, k, l, gamma=gamma)
    return elliptic_warped_metric(fam), primal, dual


def radial_curvature_closed_form(fam: EllipticFamily, k, l, l_prime, t: float
                                 ) -> tuple[float, float]:
    """Closed forms of G(R(V,X)X,V) and G(R*(V,X)X,V) on the warped chart.

    Independent re-derivation used to cross-check the generic curvature
    path: R = f^2 (-k beta + k l - beta^2 - l' + 2 l beta - l^2) and the
    dual with (k, l, l') -> (-k, ...) sign pattern.
    """
    f, _ = warp_profile(fam)
    beta = fam.constants.beta
    kv = _as_time_function(k)(t)
    lv = _as_time_function(l)(t)
    dl = _as_time_function(l_prime)(t)
    f2 = f(t) ** 2
    r = f2 * (-kv * beta + kv * lv - beta ** 2 - dl + 2.0 * lv * beta - lv ** 2)
    rs = f2 * (kv * beta + kv * lv - beta ** 2 + dl - 2.0 * lv * beta - lv ** 2)
    return r, rs


def upper_half_plane_metric(lam: float,
                            x_bounds=(-1.0, 1.0),
                            y_bounds=(0.5, 2.0)) -> MetricField:
    """g = (dx^2 + lam^2 dy^2)/y^2 on the upper half plane."""
    if lam <= 0:
        raise DomainError("the anisotropy parameter must be positive")
    chart = box(f"uhp(lam={lam:g})", x_bounds, y_bounds)

    def value(p):
        y = p[1]
        return np.diag([1.0, lam * lam]) / y ** 2

    def partials(p):
        y = p[1]
        dg = np.zeros((2, 2, 2))
        dg[1] = -2.0 * value(p) / y
        return dg

    return MetricField(chart=chart, value=value, partials=partials)


def upper_half_plane_family(lam: float) -> EllipticFamily:
    """The warped presentation of the half-plane metric.

    Matching dt^2 + exp(-2t/lam) dx^2 against the elliptic normal form gives
    sqrt(4a) = 1 and sqrt(4b-1) = lam; the third moment plays no role in the
    constant-solution construction and is fixed arbitrarily.
    """
    return EllipticFamily(
        generator=f"uhp(lam={lam:g})",
        constants=EllipticConstants(0.25, (lam * lam + 1.0) / 4.0, 0.0))
