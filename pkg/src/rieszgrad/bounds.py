"""Sharp goal functions and the pointwise gradient bound.

Every shape function is obtained by inverting a monotone parametric
representation along the x1-ball family D(t).  Inversions are carried out in
the variable ``y = ln(t^2 - 1)``, in which the near-tangent regime ``t -> 1``
is well conditioned and the log of every reduced function is close to
linear.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import AdmissibilityError, ConvergenceError, DomainError, RangeError
from .hypergeom import ln_gamma
from .potentials import BallSpec
from .reduced import df_alpha, log_f_alpha, log_h_alpha

__all__ = [
    "BoundResult",
    "ShapeFunctionTable",
    "solve_t",
    "N_alpha",
    "psi_shape",
    "M_n",
    "M_n_ode",
    "M_n_derivative",
    "Phi_n",
    "Phi_n_derivatives",
    "phi_ode_residual",
    "phi_asymptote_constant",
    "gradient_bound",
    "build_shape_table",
]

T_MAX = 1e15
_RTOL = 4 * np.finfo(float).eps


def _check_alpha(alpha):
    if not 0.0 < alpha <= 2.0:
        raise RangeError(f"alpha must lie in (0,2], got {alpha}")


def _t_of(y):
    w = math.exp(y)
    return math.sqrt(1.0 + w), w


def _invert(logfun, target, slope):
    """Solve logfun(y) = target for an increasing logfun with logfun ~ slope*y at -inf."""
    lo = target / slope - 1.0
    for _ in range(200):
        if logfun(lo) < target:
            break
        lo -= max(1.0, abs(lo))
    else:  # pragma: no cover - the slope bound makes this unreachable
        raise ConvergenceError("could not bracket the root from below")
    t = 2.0
    hi = math.log(t * t - 1.0)
    while logfun(hi) <= target:
        if t >= T_MAX:
            raise ConvergenceError(f"root lies beyond t = {T_MAX:g}")
        t = min(2.0 * t, T_MAX)
        hi = math.log(t * t - 1.0)
    if hi <= lo:
        return hi
    y = brentq(lambda s: logfun(s) - target, lo, hi, xtol=1e-15, rtol=_RTOL, maxiter=200)
    return y


def _log_g(n, alpha):
    def g(y):
        t, w = _t_of(y)
        return (2.0 - alpha) * log_f_alpha(n, alpha, t, w) + alpha * log_f_alpha(
            n, alpha - 2.0, t, w
        )

    return g


def _solve_y(n, alpha, log_target):
    return _invert(_log_g(n, alpha), log_target, float(n))


def solve_t(n, alpha, u, v):
    """Unique t >= 1 with f_a(t)^(2-a) f_{a-2}(t)^a = u^(2-a) v^a."""
    _check_alpha(alpha)
    if not (u > 0.0 and v > 0.0):
        raise DomainError("solve_t needs u > 0 and v > 0")
    y = _solve_y(n, alpha, (2.0 - alpha) * math.log(u) + alpha * math.log(v))
    return _t_of(y)[0]


@dataclass(frozen=True)
class BoundResult:
    """Value of N_alpha(u, v) with the ball that attains it.

    ``witness`` is None for degenerate pairs (u or v zero) and when the ball
    is too thin for its radius to be resolved in double precision.
    """

    t0: float
    sigma0: float
    value: float
    witness: BallSpec
    alpha: float
    n: int
    u: float
    v: float
    w0: float = field(default=0.0, repr=False)

    @property
    def cauchy(self):
        return self.u * self.v


def N_alpha(n, alpha, u, v):
    """Sharp supremum of H^2 over densities with F_a rho = u, F_{a-2} rho = v."""
    _check_alpha(alpha)
    if u < 0.0 or v < 0.0:
        raise DomainError("u and v must be nonnegative")
    if u == 0.0 or v == 0.0:
        return BoundResult(1.0, 0.0, 0.0, None, alpha, n, u, v, 0.0)
    y = _solve_y(n, alpha, (2.0 - alpha) * math.log(u) + alpha * math.log(v))
    t, w = _t_of(y)
    lf = log_f_alpha(n, alpha, t, w)
    log_sigma = (math.log(u) - lf) / alpha
    log_value = 2.0 * (alpha - 1.0) * log_sigma + 2.0 * log_h_alpha(n, alpha, t, w)
    sigma0 = math.exp(log_sigma)
    try:
        witness = BallSpec(sigma0 * t, sigma0, n)
    except AdmissibilityError:
        witness = None
    return BoundResult(t, sigma0, math.exp(log_value), witness, alpha, n, u, v, w)


def psi_shape(n, alpha, s):
    """psi(s) = h_a^2 / (f_a f_{a-2}) at the t where f_a^(2-a) f_{a-2}^a = s."""
    _check_alpha(alpha)
    if s < 0.0:
        raise DomainError("s must be nonnegative")
    if s == 0.0:
        return 1.0
    t, w = _t_of(_solve_y(n, alpha, math.log(s)))
    return math.exp(
        2.0 * log_h_alpha(n, alpha, t, w)
        - log_f_alpha(n, alpha, t, w)
        - log_f_alpha(n, alpha - 2.0, t, w)
    )


def _f_inverse(n, alpha, value):
    """(t, w) with f_alpha(t) = value > 0."""
    y = _invert(lambda y: log_f_alpha(n, alpha, *_t_of(y)), math.log(value), 0.5 * n)
    return _t_of(y)


def M_n(n, v):
    """Shape function with M' = 1 - M^(2/n), M(0) = 0, via f_0(t) = v."""
    if v < 0.0:
        raise DomainError("v must be nonnegative")
    if v == 0.0:
        return 0.0
    # beyond t ~ 1e15 the value is 1 to double precision
    if v > n * math.log(T_MAX):
        return 1.0
    t, w = _f_inverse(n, 0.0, v)
    return math.exp(-0.5 * n * math.log1p(1.0 / w))


def M_n_derivative(n, v):
    """dM_n/dv from the parametric form (for residual checks)."""
    if v <= 0.0:
        return 1.0
    t, w = _f_inverse(n, 0.0, v)
    dm_dt = n * math.exp((0.5 * n - 1.0) * math.log(w / (t * t))) / t**3
    return dm_dt / df_alpha(n, 0.0, t, w)


def M_n_ode(n, v, rtol=1e-12, atol=1e-14):
    """M_n by adaptive integration of M' = 1 - M^(2/n); accepts scalars or arrays."""
    vs = np.atleast_1d(np.asarray(v, dtype=float))
    if np.any(vs < 0.0):
        raise DomainError("v must be nonnegative")
    order = np.argsort(vs)
    top = float(vs.max()) if vs.size else 0.0
    out = np.zeros_like(vs)
    if top > 0.0:
        sol = solve_ivp(
            lambda _, m: 1.0 - np.abs(m) ** (2.0 / n),
            (0.0, top),
            [0.0],
            method="DOP853",
            t_eval=vs[order],
            rtol=rtol,
            atol=atol,
        )
        out[order] = sol.y[0]
    return out if np.ndim(v) else float(out[0])


def Phi_n(n, s):
    """Phi_n(s) = h_1(t) at the t with f_1(t) = s."""
    if s < 0.0:
        raise DomainError("s must be nonnegative")
    if s == 0.0:
        return 0.0
    t, w = _f_inverse(n, 1.0, s)
    return math.exp(log_h_alpha(n, 1.0, t, w))


def Phi_n_derivatives(n, s):
    """(Phi, Phi', Phi'') at s; Phi' = 1/t and Phi'' = -1/(t^2 f_1'(t))."""
    if s < 0.0:
        raise DomainError("s must be nonnegative")
    if s == 0.0:
        second = {1: 0.0, 2: -0.5}.get(n, -math.inf)
        return 0.0, 1.0, second
    t, w = _f_inverse(n, 1.0, s)
    phi = math.exp(log_h_alpha(n, 1.0, t, w))
    return phi, 1.0 / t, -1.0 / (t * t * df_alpha(n, 1.0, t, w))


def phi_ode_residual(n, s, scale=1.0):
    """Residual of Phi'' (( n-1) Phi Phi' + s) = Phi' (Phi'^2 - 1).

    With ``scale = c`` the rescaled function Phi_n(c s)/c is tested instead.
    """
    p, d1, d2 = Phi_n_derivatives(n, scale * s)
    p, d2 = p / scale, d2 * scale
    return d2 * ((n - 1) * p * d1 + s) - d1 * (d1 * d1 - 1.0)


def phi_asymptote_constant(n):
    """c_n with Phi_n(s) ~ c_n ln s."""
    return math.exp(ln_gamma(0.5 * n + 1.0) - ln_gamma(0.5 * (n + 1)) - ln_gamma(1.5))


def gradient_bound(n, alpha, u, v):
    """Upper bound for |grad I_a rho| where I_a rho = u and I_{a-2} rho = v."""
    _check_alpha(alpha)
    if alpha == n:
        raise RangeError("gradient bound is trivial for alpha == n")
    return (n - alpha) * math.sqrt(N_alpha(n, alpha, u, v).value)


_KINDS = ("M_n", "Phi_n", "psi")


def _shape_fn(kind, n, alpha):
    if kind == "M_n":
        return lambda x: M_n(n, x)
    if kind == "Phi_n":
        return lambda x: Phi_n(n, x)
    if kind == "psi":
        return lambda x: psi_shape(n, alpha, x)
    raise ValueError(f"unknown shape function {kind!r}; expected one of {_KINDS}")


@dataclass(frozen=True)
class ShapeFunctionTable:
    """Certified samples of a shape function on an interval."""

    kind: str
    n: int
    samples: tuple
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def arguments(self):
        return np.array([x for x, _ in self.samples])

    @property
    def values(self):
        return np.array([y for _, y in self.samples])

    def interpolate(self, x):
        return CubicSpline(self.arguments, self.values)(x)


def build_shape_table(kind, n, lo, hi, alpha=1.0, tol=1e-8, initial=17, max_rounds=12):
    """Sample a shape function on [lo, hi] until cubic-spline interpolation
    reproduces every midpoint to ``tol`` (relative to max(1, |value|)).

    Arguments are spaced evenly in log(1 + x), so they are log-like for large
    x while still allowing lo = 0.
    """
    if not 0.0 <= lo < hi:
        raise DomainError("need 0 <= lo < hi")
    fn = _shape_fn(kind, n, alpha)
    xs = np.expm1(np.linspace(math.log1p(lo), math.log1p(hi), initial))
    xs[0], xs[-1] = lo, hi
    ys = np.array([fn(x) for x in xs])
    rounds = 0
    while rounds < max_rounds:
        mids = 0.5 * (xs[:-1] + xs[1:])
        exact = np.array([fn(x) for x in mids])
        approx = CubicSpline(xs, ys)(mids)
        bad = np.abs(approx - exact) > tol * np.maximum(1.0, np.abs(exact))
        if not bad.any():
            break
        xs = np.concatenate([xs, mids[bad]])
        ys = np.concatenate([ys, exact[bad]])
        idx = np.argsort(xs)
        xs, ys = xs[idx], ys[idx]
        rounds += 1
    meta = {"tol": tol, "rounds": rounds, "lo": lo, "hi": hi}
    if kind == "psi":
        meta["alpha"] = alpha
    return ShapeFunctionTable(
        kind, n, tuple(zip(xs.tolist(), ys.tolist())), meta
    )
