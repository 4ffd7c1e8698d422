"""Reduced ball functions f_alpha(t), h_alpha(t) and their derivatives.

For the x1-ball D(t) = B(t, 1), ``f_alpha(t)`` is the normalized integral of
``|x|^(alpha-n)`` and ``h_alpha(t)`` that of ``x1 |x|^(alpha-n-2)``.  Closed
forms are used for ``n == 1`` and ``alpha == 2``; otherwise both come from
Gauss hypergeometric representations in the argument ``1 - t^2``.

Negative orders go through the symmetry ``f_alpha = f_{-alpha}`` so the
hypergeometric parameters stay positive.

Every function accepts an optional ``w = t^2 - 1``.  Near ``t = 1`` the caller
should pass it, since forming it from ``t`` loses relative accuracy.
"""
import math
from dataclasses import dataclass

from . import _kernels
from .errors import DomainError, NonConvergent
from .hypergeom import ln_gamma

__all__ = [
    "ReducedPoint",
    "reduced_point",
    "f_alpha",
    "h_alpha",
    "log_f_alpha",
    "log_h_alpha",
    "df_alpha",
    "dh_alpha",
    "asymptotic_coefficient",
    "f0_integral",
]


def _tw(t, w):
    t = float(t)
    if not t >= 1.0 or not math.isfinite(t):
        raise DomainError(f"reduced functions need t >= 1, got {t}")
    if w is None:
        w = (t - 1.0) * (t + 1.0)
    return t, float(w)


def _ok(value, status, name):
    if status != _kernels.STATUS_OK or math.isnan(value):
        raise NonConvergent(f"{name} did not converge")
    return value


def log_f_alpha(n, alpha, t, w=None):
    """Natural log of f_alpha(t); ``-inf`` at t = 1."""
    t, w = _tw(t, w)
    return _ok(*_kernels.log_f(int(n), float(alpha), t, w), "f_alpha")


def log_h_alpha(n, alpha, t, w=None):
    """Natural log of h_alpha(t); ``-inf`` at t = 1."""
    t, w = _tw(t, w)
    return _ok(*_kernels.log_h(int(n), float(alpha), t, w), "h_alpha")


def f_alpha(n, alpha, t, w=None):
    """f_alpha(t) for dimension n; exactly 0 at t = 1."""
    return math.exp(log_f_alpha(n, alpha, t, w))


def h_alpha(n, alpha, t, w=None):
    """h_alpha(t) for dimension n; exactly 0 at t = 1."""
    return math.exp(log_h_alpha(n, alpha, t, w))


def df_alpha(n, alpha, t, w=None, method="hypergeometric"):
    """Derivative f_alpha'(t) for t > 1.

    ``method="hypergeometric"`` differentiates the 2F1 representation;
    ``method="identity"`` uses (n-a) h_a = (t^2-1) f_a' - a t f_a instead
    (undefined when alpha equals n).
    """
    t, w = _tw(t, w)
    if not w > 0.0:
        raise DomainError("derivatives are singular at t = 1")
    if method == "hypergeometric":
        return _ok(*_kernels.d_f(int(n), float(alpha), t, w), "f_alpha'")
    if method == "identity":
        a = abs(float(alpha))
        if a == n:
            raise DomainError("identity route needs alpha != n")
        return ((n - a) * h_alpha(n, a, t, w) + a * t * f_alpha(n, a, t, w)) / w
    raise ValueError(f"unknown method {method!r}")


def dh_alpha(n, alpha, t, w=None, method="hypergeometric"):
    """Derivative h_alpha'(t) for t > 1.

    ``method="identity"`` uses 2 t h_a' = f_a' + f_{a-2}'.
    """
    t, w = _tw(t, w)
    if not w > 0.0:
        raise DomainError("derivatives are singular at t = 1")
    if method == "hypergeometric":
        return _ok(*_kernels.d_h(int(n), float(alpha), t, w), "h_alpha'")
    if method == "identity":
        a = float(alpha)
        return (df_alpha(n, a, t, w) + df_alpha(n, a - 2.0, t, w)) / (2.0 * t)
    raise ValueError(f"unknown method {method!r}")


def asymptotic_coefficient(n, alpha):
    """lim f_alpha(t) / t^alpha as t -> infinity, for alpha > 0."""
    if not alpha > 0:
        raise DomainError("asymptotic coefficient needs alpha > 0")
    return math.exp(
        ln_gamma(0.5 * n + 1.0)
        + ln_gamma(alpha)
        - ln_gamma(0.5 * (n + alpha))
        - ln_gamma(0.5 * alpha + 1.0)
    )


def f0_integral(n, t):
    """f_0(t) = n * int_1^t (s^2-1)^((n-2)/2) s^(1-n) ds by adaptive quadrature.

    Independent of the hypergeometric path; the substitution s = cosh(x)
    removes the endpoint singularity for n = 1.
    """
    from scipy.integrate import quad

    t = float(t)
    if t < 1.0:
        raise DomainError("t must be >= 1")
    xi = math.acosh(t)

    def integrand(x):
        s = math.cosh(x)
        sh = math.sinh(x)
        return sh ** (n - 1) * s ** (1 - n)

    val, _ = quad(integrand, 0.0, xi, epsabs=0.0, epsrel=1e-13, limit=200)
    return n * val


@dataclass(frozen=True)
class ReducedPoint:
    """Values of the reduced functions and their derivatives at one (n, alpha, t)."""

    n: int
    alpha: float
    t: float
    f: float
    h: float
    df: float
    dh: float

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("dimension must be >= 1")
        if self.t < 1.0:
            raise DomainError("t must be >= 1")


def reduced_point(n, alpha, t, w=None):
    """Build a :class:`ReducedPoint`; derivatives are NaN at t = 1."""
    t, w = _tw(t, w)
    f = f_alpha(n, alpha, t, w)
    h = h_alpha(n, alpha, t, w)
    if w > 0.0:
        df = df_alpha(n, alpha, t, w)
        dh = dh_alpha(n, alpha, t, w)
    else:
        df = dh = math.nan
    return ReducedPoint(int(n), float(alpha), t, f, h, df, dh)
