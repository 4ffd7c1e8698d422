"""Named property suites with deterministic JSON reports.

Every suite draws its random cases from ``numpy.random.default_rng`` seeded
with ``(seed, suite index)``, so a suite produces the same cases whether it
runs alone or as part of ``all``.  Reports contain no timings.
"""
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .. import bounds, moments, potentials, reduced
from ..errors import SupportError, UnknownSuite
from ..hypergeom import gauss_2f1
from .lp import BAND, build_grid, lp_oracle

__all__ = [
    "SUITES",
    "SuiteReport",
    "run_suite",
    "random_density",
    "random_ball",
    "random_pieces",
    "identity_residuals",
    "tangent_limit",
    "growth_limit",
    "PHI2_TAYLOR",
]

# Taylor coefficients of Phi_2 at the origin, z^1 .. z^10
PHI2_TAYLOR = (
    1.0,
    -1 / 4,
    1 / 16,
    -7 / 512,
    5 / 2048,
    -21 / 65536,
    3 / 131072,
    7 / 2**24,
    11 / 2**26,
    -959 / 2**32,
)


def _num(x):
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.15g}")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    return _num(obj)


@dataclass
class SuiteReport:
    """Outcome of one suite: case count, largest residual and failing cases."""

    suite: str
    seed: int
    cases: int = 0
    max_residual: float = 0.0
    failures: list = field(default_factory=list)
    children: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def record(self, check, residual, tol, **inputs):
        self.cases += 1
        residual = float(residual)
        if math.isnan(residual):
            self.max_residual = math.nan
        elif not math.isnan(self.max_residual):
            self.max_residual = max(self.max_residual, residual)
        if not residual <= tol:
            self.failures.append(
                {"check": check, "residual": residual, "tol": tol, "inputs": inputs}
            )

    def absorb(self, child):
        self.children.append(child)
        self.cases += child.cases
        if math.isnan(child.max_residual) or math.isnan(self.max_residual):
            self.max_residual = math.nan
        else:
            self.max_residual = max(self.max_residual, child.max_residual)
        self.failures.extend(dict(f, suite=child.suite) for f in child.failures)

    def to_dict(self):
        out = {
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases,
            "max_residual": self.max_residual,
            "failures": self.failures,
            "ok": self.ok,
        }
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return _clean(out)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def summary(self):
        status = "ok" if self.ok else f"{len(self.failures)} failing"
        return f"{self.suite}: {self.cases} cases, max residual {self.max_residual:.3g}, {status}"


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0.0 else abs(a - b) / scale


def _absolute_series(a, b, c, z):
    """Sum of |terms| of the 2F1 series: the rounding scale of direct summation."""
    term = total = 1.0
    for k in range(100_000):
        term *= abs((a + k) * (b + k) / ((c + k) * (k + 1.0)) * z)
        total += term
        if term < 1e-17 * total:
            break
    return total


def random_ball(rng, n, t_range=(1.01, 20.0), sigma_range=(0.1, 5.0)):
    t = math.exp(rng.uniform(math.log(t_range[0] - 1.0), math.log(t_range[1] - 1.0))) + 1.0
    sigma = math.exp(rng.uniform(math.log(sigma_range[0]), math.log(sigma_range[1])))
    return potentials.BallSpec(sigma * t, sigma, n)


def random_density(rng, n, max_components=3, reflect=True):
    """Disjoint ball mixture with random weights, some balls mirrored."""
    comps = []
    edge = {False: rng.uniform(0.05, 1.0), True: rng.uniform(0.05, 1.0)}
    for _ in range(int(rng.integers(1, max_components + 1))):
        side = bool(reflect and rng.random() < 0.3)
        radius = rng.uniform(0.1, 1.5)
        tau = edge[side] + radius
        sigma = math.sqrt(edge[side] * (edge[side] + 2.0 * radius))
        weight = 1.0 if rng.random() < 0.3 else rng.uniform(0.05, 1.0)
        comps.append(potentials.Component(potentials.BallSpec(tau, sigma, n), weight, side))
        gap = 0.0 if rng.random() < 0.1 else rng.uniform(0.0, 1.0)
        edge[side] = tau + radius + gap
    return potentials.Density(n, comps)


def random_pieces(rng, max_pieces=4, lo=0.01, hi=5.0):
    k = int(rng.integers(1, max_pieces + 1))
    ends = np.sort(rng.uniform(lo, hi, 2 * k))
    return [(ends[2 * j], ends[2 * j + 1], rng.uniform(0.0, 1.0)) for j in range(k)]


def identity_residuals(n, alpha, t):
    """Relative residuals of the exact functional identities at (n, alpha, t)."""
    w = (t - 1.0) * (t + 1.0)
    f = lambda a: reduced.f_alpha(n, a, t, w)  # noqa: E731
    df = lambda a: reduced.df_alpha(n, a, t, w)  # noqa: E731
    h = reduced.h_alpha(n, alpha, t, w)
    dh = reduced.dh_alpha(n, alpha, t, w)
    fa, fv, dfa, dfv = f(alpha), f(alpha - 2.0), df(alpha), df(alpha - 2.0)
    out = {}
    # 2(a-1) t h_a = a f_a + (a-2) f_{a-2}
    lhs, rhs = 2.0 * (alpha - 1.0) * t * h, alpha * fa + (alpha - 2.0) * fv
    out["h_from_f"] = abs(lhs - rhs) / (abs(alpha * fa) + abs((alpha - 2.0) * fv) + abs(lhs))
    # 2 t h_a' = f_a' + f_{a-2}'
    out["dh_from_df"] = _rel(2.0 * t * dh, dfa + dfv)
    # (n-a) h_a = (t^2-1) f_a' - a t f_a
    lhs, a1, a2 = (n - alpha) * h, w * dfa, alpha * t * fa
    out["h_from_df"] = abs(lhs - (a1 - a2)) / (abs(lhs) + abs(a1) + abs(a2))
    # f_a = (t^2-1) h'/a + ((a-1) t^2 + 1 - n) h / (a t)
    b1, b2 = w * dh / alpha, ((alpha - 1.0) * t * t + 1.0 - n) * h / (alpha * t)
    out["f_from_h"] = abs(fa - b1 - b2) / (abs(fa) + abs(b1) + abs(b2))
    # second-order equation for f_a, with f_a'' from the derivative of h_from_df
    d2 = ((n - alpha) * dh - (2.0 - alpha) * t * dfa + alpha * fa) / w
    c1, c2, c3 = t * w * d2, (t * t - n + 1.0) * dfa, t * alpha * alpha * fa
    out["f_ode"] = abs(c1 + c2 - c3) / (abs(c1) + abs(c2) + abs(c3))
    # inversion of a ball swaps alpha -> -alpha for F and alpha -> 2-alpha for H
    ball = potentials.BallSpec(2.0 * t, 2.0, n)
    inv = potentials.invert_ball(ball)
    out["inversion_F"] = _rel(potentials.ball_F(ball, alpha), potentials.ball_F(inv, -alpha))
    out["inversion_H"] = _rel(potentials.ball_H(ball, alpha), potentials.ball_H(inv, 2.0 - alpha))
    return out


def _holder_slack(n, p, q, gamma, t):
    lhs = gamma * reduced.log_f_alpha(n, p, t) + (1.0 - gamma) * reduced.log_f_alpha(n, q, t)
    return lhs - reduced.log_f_alpha(n, gamma * p + (1.0 - gamma) * q, t)


def _suite_identities(rep, rng, size):
    for _ in range(size):
        n = int(rng.integers(1, 7))
        alpha = float(rng.uniform(0.05, 2.0))
        t = 1.0 + math.exp(rng.uniform(math.log(1e-3), math.log(50.0)))
        for name, res in identity_residuals(n, alpha, t).items():
            rep.record(name, res, 1e-9, n=n, alpha=alpha, t=t)
        p, q = rng.uniform(-3.0, 3.0, 2)
        gamma = float(rng.uniform(0.01, 0.99))
        slack = _holder_slack(n, float(p), float(q), gamma, t)
        rep.record("holder", max(0.0, -slack), 1e-12, n=n, p=float(p), q=float(q), gamma=gamma, t=t)


def tangent_limit(n, alpha):
    """Extrapolated lim f_a(t) (t^2-1)^(-n/2) at t -> 1.

    The ratio is analytic in w = t^2 - 1, so quadratic extrapolation from
    three small w is accurate to O(w^3).
    """
    ws, rs = [], []
    for k in (4, 5, 6):
        eps = 10.0**-k
        w = eps * (2.0 + eps)
        ws.append(w)
        rs.append(reduced.f_alpha(n, alpha, 1.0 + eps, w) * w ** (-0.5 * n))
    total = 0.0
    for i in range(3):
        weight = 1.0
        for j in range(3):
            if j != i:
                weight *= ws[j] / (ws[j] - ws[i])
        total += weight * rs[i]
    return total


def growth_limit(n, alpha):
    """Extrapolated lim f_a(t)/t^a as t -> infinity.

    Solutions of the second-order equation behave like t^a and t^-a, so
    f_a(t)/t^a = A + B t^(-2a) + O(t^-2); the t^(-2a) term is eliminated
    between t = 1e4 and t = 1e6.
    """
    t1, t2 = 1e4, 1e6
    r1 = math.exp(reduced.log_f_alpha(n, alpha, t1) - alpha * math.log(t1))
    r2 = math.exp(reduced.log_f_alpha(n, alpha, t2) - alpha * math.log(t2))
    q = (t1 / t2) ** (2.0 * alpha)
    return (r2 - q * r1) / (1.0 - q)


def _suite_hypergeom(rep, rng, size):
    for _ in range(size):
        a, b = rng.uniform(-2.0, 3.0, 2)
        c = float(rng.uniform(0.3, 4.0))
        z = float(rng.uniform(-0.95, 0.0))
        direct = gauss_2f1(a, b, c, z, transform=False)
        pfaff = gauss_2f1(a, b, c, z)
        # direct summation cancels, so its error scales with the absolute series
        scale = max(1.0, abs(direct), _absolute_series(a, b, c, z))
        rep.record("pfaff_vs_series", abs(direct - pfaff) / scale, 1e-13,
                   a=float(a), b=float(b), c=c, z=z)
        x = float(rng.uniform(0.0, 0.999))
        rep.record("elementary_log", _rel(gauss_2f1(1.0, 1.0, 2.0, x) * x, -math.log1p(-x)) if x else 0.0,
                   1e-12, z=x)
        rep.record("elementary_asin", _rel(gauss_2f1(0.5, 0.5, 1.5, x * x) * x, math.asin(x)) if x else 0.0,
                   1e-12, z=x)
        n = int(rng.integers(1, 7))
        alpha = float(rng.uniform(0.05, 2.0))
        t = 1.0 + math.exp(rng.uniform(math.log(1e-3), math.log(50.0)))
        w = (t - 1.0) * (t + 1.0)
        # representation in the argument (t^2-1)/t^2 evaluated on [0, 1)
        alt = math.log(gauss_2f1(0.5 * (n + alpha), 0.5 * (2.0 + alpha), 0.5 * (n + 2.0), w / (t * t)))
        alt += -(n + alpha) * math.log(t) + 0.5 * n * math.log(w)
        rep.record("second_representation", _rel(math.exp(alt), reduced.f_alpha(n, alpha, t, w)), 1e-9,
                   n=n, alpha=alpha, t=t)
    for n in range(1, 7):
        for alpha in (0.05, 0.25, 0.5, 1.0, 1.5, 2.0):
            rep.record("tangent_limit", abs(tangent_limit(n, alpha) - 1.0), 1e-6, n=n, alpha=alpha)
            coef = reduced.asymptotic_coefficient(n, alpha)
            rep.record("growth_limit", _rel(growth_limit(n, alpha), coef), 1e-6, n=n, alpha=alpha)
    # closed forms against the general series in one and two dimensions
    for alpha in (0.3, 1.0, 1.7):
        for t in (1.1, 2.0, 7.0):
            xi = math.acosh(t)
            rep.record("closed_form_n1", _rel(reduced.f_alpha(1, alpha, t), math.sinh(alpha * xi) / alpha),
                       1e-12, alpha=alpha, t=t)
    # the quadratic closed form against the series in the second representation
    for n in (2, 3, 5):
        for t in (1.1, 2.0, 7.0):
            w = t * t - 1.0
            series = t ** (-n - 2.0) * w ** (0.5 * n) * gauss_2f1(0.5 * (n + 2.0), 2.0, 0.5 * (n + 2.0), w / (t * t))
            rep.record("closed_form_alpha2", _rel(reduced.f_alpha(n, 2.0, t), series), 1e-12, n=n, t=t)


def _suite_sharpness(rep, rng, size):
    for _ in range(size):
        n = int(rng.integers(1, 7))
        alpha = float(rng.uniform(0.02, 2.0))
        ball = random_ball(rng, n)
        u, v = potentials.ball_F(ball, alpha), potentials.ball_F(ball, alpha - 2.0)
        res = bounds.N_alpha(n, alpha, u, v)
        H = potentials.ball_H(ball, alpha)
        inputs = dict(n=n, alpha=alpha, tau=ball.tau, sigma=ball.sigma)
        rep.record("ball_equality", _rel(H * H, res.value), 1e-9, **inputs)
        rep.record("witness_t", _rel(res.t0, ball.t), 1e-9, **inputs)
        rep.record("witness_sigma", _rel(res.sigma0, ball.sigma), 1e-9, **inputs)


def _suite_inequality(rep, rng, size):
    for _ in range(size):
        n = int(rng.integers(1, 6))
        alpha = float(rng.uniform(0.05, 2.0))
        rho = random_density(rng, n)
        fv = potentials.density_functionals(rho, alpha)
        N = bounds.N_alpha(n, alpha, fv.u, fv.v).value
        uv = fv.u * fv.v
        inputs = dict(n=n, alpha=alpha, components=len(rho.components))
        rep.record("goal_bound", max(0.0, fv.H**2 - N) / uv, 1e-10, **inputs)
        rep.record("cauchy_bound", max(0.0, N - uv) / uv, 1e-10, **inputs)
        rep.record("cauchy_strict", 0.0 if fv.H**2 < uv else 1.0, 0.5, **inputs)
        pos = potentials.density_functionals(rho.positive_part(), alpha).H
        neg = potentials.density_functionals(rho.negative_part_mirrored(), alpha).H
        rep.record("two_sided_reduction", max(0.0, abs(fv.H) - max(abs(pos), abs(neg))), 1e-12, **inputs)
    for _ in range(max(1, size // 5)):
        rho = random_density(rng, 3)
        y = rng.normal(size=3)
        y[0] -= 1.0
        try:
            U = potentials.newton_potential(rho, y)
        except SupportError:  # point landed in the support; skip it
            continue
        g = potentials.newton_gradient(rho, y)
        I0 = potentials.riesz_potential(rho, y, 0.0)
        rhs = U * bounds.M_n(3, I0)
        rep.record("newton_bound", max(0.0, float(g @ g) - rhs) / rhs, 1e-10, y=list(map(float, y)))


def _suite_shapes(rep, rng, size):
    vs = np.sort(rng.uniform(0.0, 5.0, size))
    for n in range(1, 6):
        ode = bounds.M_n_ode(n, vs)
        for v, m_ode in zip(vs, ode):
            m = bounds.M_n(n, float(v))
            rep.record("M_parametric_vs_ode", abs(m - m_ode), 1e-9, n=n, v=float(v))
            if n == 1:
                rep.record("M1_tanh", abs(m - math.tanh(v)), 1e-12, v=float(v))
            if n == 2:
                rep.record("M2_exp", abs(m - (-math.expm1(-v))), 1e-12, v=float(v))
            if v > 0.05:
                rep.record("M_ode_residual", abs(bounds.M_n_derivative(n, float(v)) - (1 - m ** (2 / n))),
                           1e-7, n=n, v=float(v))
    for s in np.exp(rng.uniform(math.log(0.1), math.log(100.0), size)):
        n = int(rng.integers(1, 6))
        rep.record("Phi_ode_residual", abs(bounds.phi_ode_residual(n, float(s))), 1e-7, n=n, s=float(s))
        c = float(rng.uniform(0.2, 5.0))
        rep.record("Phi_homothety", abs(bounds.phi_ode_residual(n, float(s) / c, c)), 1e-7, n=n, s=float(s), c=c)
        rep.record("Phi1_asinh", _rel(bounds.Phi_n(1, float(s)), math.asinh(s)), 1e-12, s=float(s))
    for z in (1e-3, 5e-3, 1e-2, 2e-2, 5e-2):
        poly = sum(c * z ** (k + 1) for k, c in enumerate(PHI2_TAYLOR))
        rep.record("Phi2_taylor", abs(bounds.Phi_n(2, z) - poly) / z, 1e-12, z=z)
    for _ in range(size):
        n = int(rng.integers(1, 6))
        u, v = np.exp(rng.uniform(-3.0, 3.0, 2))
        u, v = float(u), float(v)
        rep.record("alpha2_reduction", _rel(bounds.N_alpha(n, 2.0, u, v).value, u * bounds.M_n(n, v)), 1e-9,
                   n=n, u=u, v=v)
        a = bounds.N_alpha(n, 1.0, u, v).value
        rep.record("alpha1_product", max(_rel(a, bounds.N_alpha(n, 1.0, v, u).value),
                                         _rel(a, bounds.N_alpha(n, 1.0, u * v, 1.0).value)), 1e-9, n=n, u=u, v=v)
        rep.record("alpha1_phi", _rel(a, bounds.Phi_n(n, math.sqrt(u * v)) ** 2), 1e-9, n=n, u=u, v=v)
        alpha = float(rng.uniform(0.05, 2.0))
        N = bounds.N_alpha(n, alpha, u, v).value
        psi = bounds.psi_shape(n, alpha, u ** (2 - alpha) * v**alpha)
        rep.record("psi_factorization", _rel(N, u * v * psi), 1e-9, n=n, alpha=alpha, u=u, v=v)
        rep.record("psi_below_one", 0.0 if psi < 1.0 else psi, 0.5, n=n, alpha=alpha, u=u, v=v)
        # monotone in each argument
        N_u = bounds.N_alpha(n, alpha, 1.1 * u, v).value
        N_v = bounds.N_alpha(n, alpha, u, 1.1 * v).value
        rep.record("monotone", max(0.0, N - N_u, N - N_v) / N, 1e-12, n=n, alpha=alpha, u=u, v=v)


def _suite_moments(rep, rng, size):
    r = moments.check_critical_inequalities(moments.interval_moments(0.0, 1.0, range(0, 3)))
    rep.record("interval_markov", abs(r.slacks["markov"]), 1e-12)
    r = moments.check_critical_inequalities(moments.interval_moments(1.0, 2.0, range(-2, 3)))
    for name in ("tanh_critical", "sinh_critical"):
        rep.record(f"interval_{name}", abs(r.slacks[name]), 1e-12)
    for _ in range(size):
        pieces = random_pieces(rng)
        s = moments.step_moments(pieces, range(-6, 5))
        for name, slack in moments.check_critical_inequalities(s).slacks.items():
            rep.record(name, max(0.0, -slack), 1e-10, pieces=pieces)
        inv = moments.step_moments(moments.invert_pieces(pieces), range(-6, 5))
        for k in range(5):
            rep.record("inversion", _rel(s[k], inv[-k - 2]), 1e-12, pieces=pieces, k=k)
        # the one-dimensional goal function at alpha = 1 gives the sinh inequality
        phi = bounds.Phi_n(1, math.sqrt(s[0] * s[-2]))
        rep.record("goal_function_n1", max(0.0, s[-1] - phi) / phi, 1e-12, pieces=pieces)
        a = moments.exp_transform_moments(moments.step_moments(pieces, range(0, 6)), 5)
        for m in range(3):
            d, dp = moments.hankel_determinants(a, m)
            scale = max(abs(x) for x in a[: 2 * m + 2]) ** (m + 1)
            rep.record("hankel", max(0.0, -d, -dp) / scale, 1e-10, pieces=pieces, m=m)


def _suite_lp(rep, rng, size):
    for _ in range(size):
        n = int(rng.integers(1, 6))
        alpha = float(rng.uniform(0.2, 2.0))
        ball = random_ball(rng, n, (1.2, 4.0), (0.7, 2.0))
        u, v = potentials.ball_F(ball, alpha), potentials.ball_F(ball, alpha - 2.0)
        ref = math.sqrt(bounds.N_alpha(n, alpha, u * (1 + BAND), v * (1 + BAND)).value)
        opt = lp_oracle(build_grid(n, alpha, 50, 50), u, v).value
        inputs = dict(n=n, alpha=alpha, tau=ball.tau, sigma=ball.sigma)
        rep.record("lp_below_bound", max(0.0, opt - ref) / ref, 1e-9, **inputs)
        rep.record("lp_near_bound", (ref - opt) / ref, 0.02, **inputs)


SUITES = {
    "identities": (_suite_identities, 300),
    "hypergeom": (_suite_hypergeom, 200),
    "sharpness": (_suite_sharpness, 300),
    "inequality-fuzz": (_suite_inequality, 300),
    "shape-functions": (_suite_shapes, 40),
    "moments": (_suite_moments, 300),
    "lp": (_suite_lp, 3),
}


def run_suite(name, seed=0, size=None):
    """Run a named suite (or ``all``) and return its :class:`SuiteReport`."""
    if name == "all":
        rep = SuiteReport("all", int(seed))
        for child in SUITES:
            rep.absorb(run_suite(child, seed, size))
        return rep
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}")
    fn, default = SUITES[name]
    rep = SuiteReport(name, int(seed))
    rng = np.random.default_rng([int(seed), list(SUITES).index(name)])
    fn(rep, rng, default if size is None else size)
    return rep
