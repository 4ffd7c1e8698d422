"""Densities built from x1-balls and the functionals evaluated on them.

All integrals use the normalized measure ``d_omega x = dx / omega_n``, where
``omega_n`` is the volume of the unit n-ball.  A ball ``B(tau, sigma)`` is
``{|x|^2 - 2 tau x1 + sigma^2 < 0}``: centre ``(tau, 0, ..., 0)``, radius
``sqrt(tau^2 - sigma^2)``.

Three routes compute the functionals of a density:

* ``analytic``   - sums of closed-form ball values ``sigma^a f_a(tau/sigma)``;
* ``quadrature`` - Gauss-Legendre in origin-centred polar coordinates;
* ``montecarlo`` - uniform sampling inside each ball (seeded, with errors).

Evaluation at a point ``y`` other than the origin uses the fact that any ball
not containing ``y`` is an x1-ball in the frame centred at ``y`` whose first
axis points at the ball centre.
"""
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import AdmissibilityError, DimensionError, SupportError
from .reduced import log_f_alpha, log_h_alpha

__all__ = [
    "BallSpec",
    "Component",
    "Density",
    "FunctionalValues",
    "ball_F",
    "ball_H",
    "ball_quadrature",
    "invert_ball",
    "density_functionals",
    "riesz_potential",
    "riesz_gradient",
    "exp_transform_point",
    "newton_potential",
    "newton_gradient",
    "unit_ball_volume",
]


def unit_ball_volume(n):
    """omega_n = pi^(n/2) / Gamma(n/2 + 1)."""
    return math.pi ** (0.5 * n) / math.gamma(0.5 * n + 1.0)


@dataclass(frozen=True)
class BallSpec:
    """The x1-ball B(tau, sigma) in dimension n, 0 < sigma < tau."""

    tau: float
    sigma: float
    n: int = 3

    def __post_init__(self):
        if not (math.isfinite(self.tau) and math.isfinite(self.sigma)):
            raise AdmissibilityError("tau and sigma must be finite")
        if not 0.0 < self.sigma < self.tau:
            raise AdmissibilityError(
                f"need 0 < sigma < tau, got tau={self.tau}, sigma={self.sigma}"
            )
        if int(self.n) != self.n or self.n < 1:
            raise AdmissibilityError("dimension must be a positive integer")

    @property
    def radius(self):
        return math.sqrt((self.tau - self.sigma) * (self.tau + self.sigma))

    @property
    def t(self):
        return self.tau / self.sigma

    @property
    def w(self):
        """t^2 - 1 computed without cancellation."""
        return (self.tau - self.sigma) * (self.tau + self.sigma) / (self.sigma * self.sigma)

    @property
    def axis_interval(self):
        """(near, far) distances of the ball from the origin along x1."""
        far = self.tau + self.radius
        return self.sigma * self.sigma / far, far


def ball_F(b, alpha):
    """F_alpha(tau, sigma) = sigma^alpha f_alpha(tau / sigma)."""
    return math.exp(alpha * math.log(b.sigma) + log_f_alpha(b.n, alpha, b.t, b.w))


def ball_H(b, alpha):
    """H_alpha(tau, sigma) = sigma^(alpha-1) h_alpha(tau / sigma)."""
    return math.exp((alpha - 1.0) * math.log(b.sigma) + log_h_alpha(b.n, alpha, b.t, b.w))


def invert_ball(b):
    """Image of B(tau, sigma) under x -> x/|x|^2, namely B(tau/sigma^2, 1/sigma)."""
    return BallSpec(b.tau / (b.sigma * b.sigma), 1.0 / b.sigma, b.n)


@lru_cache(maxsize=None)
def _gauss(m):
    return np.polynomial.legendre.leggauss(m)


def _sphere_area(k):
    # surface area of the unit k-sphere in R^(k+1)
    return 2.0 * math.pi ** (0.5 * (k + 1)) / math.gamma(0.5 * (k + 1))


def ball_quadrature(b, alpha, nodes=64):
    """(F_alpha, F_{alpha-2}, H_alpha) of one ball by deterministic quadrature.

    Radii are written rho = sigma e^s with s in [-xi, xi], xi = arccosh(t);
    at radius rho the ball covers the polar cap cos(theta) > cosh(s)/cosh(xi).
    The substitution s = xi sin(phi) removes the square-root endpoint
    behaviour, so Gauss-Legendre converges spectrally even for balls close to
    the origin.
    """
    n = b.n
    xi = math.asinh(math.sqrt(b.w))
    x, wq = _gauss(nodes)
    phi = 0.5 * math.pi * x
    s = xi * np.sin(phi)
    ds = xi * np.cos(phi) * 0.5 * math.pi * wq
    log_rho = math.log(b.sigma) + s
    if n == 1:
        # the "cap" is the single point x1 = rho, with d_omega = dx / 2
        fa = 0.5 * np.sum(np.exp(alpha * log_rho) * ds)
        fv = 0.5 * np.sum(np.exp((alpha - 2.0) * log_rho) * ds)
        ha = 0.5 * np.sum(np.exp((alpha - 1.0) * log_rho) * ds)
        return float(fa), float(fv), float(ha)
    # cos(theta_max) = cosh(s)/cosh(xi); write it via a difference to keep
    # small caps accurate: 1 - cos = (cosh xi - cosh s)/cosh xi
    one_minus_cos = 2.0 * np.sinh(0.5 * (xi - s)) * np.sinh(0.5 * (xi + s)) / math.cosh(xi)
    theta_max = 2.0 * np.arcsin(np.sqrt(np.clip(0.5 * one_minus_cos, 0.0, 1.0)))
    ua, uw = _gauss(32)
    u = 0.5 * (ua[None, :] + 1.0) * theta_max[:, None]
    cap = 0.5 * theta_max * np.sum(uw[None, :] * np.sin(u) ** (n - 2), axis=1)
    sin_max = np.sin(theta_max)
    const = _sphere_area(n - 2) / unit_ball_volume(n)
    fa = const * np.sum(np.exp(alpha * log_rho) * cap * ds)
    fv = const * np.sum(np.exp((alpha - 2.0) * log_rho) * cap * ds)
    ha = const / (n - 1) * np.sum(np.exp((alpha - 1.0) * log_rho) * sin_max ** (n - 1) * ds)
    return float(fa), float(fv), float(ha)


@dataclass(frozen=True)
class Component:
    """A ball carrying constant weight; ``reflect`` mirrors it to x1 < 0."""

    ball: BallSpec
    weight: float = 1.0
    reflect: bool = False

    @property
    def center(self):
        return -self.ball.tau if self.reflect else self.ball.tau


@dataclass(frozen=True)
class Density:
    """Disjoint weighted mixture of x1-balls with 0 <= rho <= 1.

    Balls sit on the x1-axis, so two balls on the same side are disjoint
    exactly when their axis intervals are; touching is allowed.
    """

    n: int
    components: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if int(self.n) != self.n or self.n < 1:
            raise AdmissibilityError("dimension must be a positive integer")
        for i, comp in enumerate(self.components):
            if comp.ball.n != self.n:
                raise AdmissibilityError(f"component {i} has dimension {comp.ball.n}")
            if not 0.0 <= comp.weight <= 1.0:
                raise AdmissibilityError(f"component {i} weight {comp.weight} not in [0, 1]")
        for side in (False, True):
            spans = sorted(
                (c.ball.axis_interval, i)
                for i, c in enumerate(self.components)
                if c.reflect == side
            )
            for (prev, i), (cur, j) in zip(spans, spans[1:]):
                # relative slack so that touching balls survive rounding
                if cur[0] < prev[1] * (1.0 - 1e-12):
                    raise AdmissibilityError(f"components {i} and {j} overlap")

    @classmethod
    def single(cls, ball, weight=1.0, reflect=False):
        return cls(ball.n, (Component(ball, weight, reflect),))

    @property
    def is_empty(self):
        return all(c.weight == 0.0 for c in self.components)

    @property
    def min_distance(self):
        """Distance from the origin to the support (inf when empty)."""
        return min((c.ball.axis_interval[0] for c in self.components), default=math.inf)

    def reflected(self):
        """Mirror image across the hyperplane x1 = 0."""
        return replace(
            self, components=tuple(replace(c, reflect=not c.reflect) for c in self.components)
        )

    def positive_part(self):
        return replace(self, components=tuple(c for c in self.components if not c.reflect))

    def negative_part_mirrored(self):
        """rho^- reflected onto x1 > 0."""
        return replace(
            self,
            components=tuple(replace(c, reflect=False) for c in self.components if c.reflect),
        )


@dataclass(frozen=True)
class FunctionalValues:
    """u = F_alpha rho, v = F_{alpha-2} rho, H = H_alpha rho.

    ``stderr`` holds Monte-Carlo standard errors of (u, v, H) when available.
    """

    u: float
    v: float
    H: float
    alpha: float
    n: int
    stderr: tuple = field(default=None, compare=False)

    @property
    def cauchy_slack(self):
        return self.u * self.v - self.H * self.H


def _analytic(rho, alpha):
    u = v = H = 0.0
    for c in rho.components:
        if c.weight == 0.0:
            continue
        u += c.weight * ball_F(c.ball, alpha)
        v += c.weight * ball_F(c.ball, alpha - 2.0)
        hb = c.weight * ball_H(c.ball, alpha)
        H += -hb if c.reflect else hb
    return u, v, H


def _quadrature(rho, alpha, nodes):
    u = v = H = 0.0
    for c in rho.components:
        if c.weight == 0.0:
            continue
        fa, fv, ha = ball_quadrature(c.ball, alpha, nodes)
        u += c.weight * fa
        v += c.weight * fv
        H += c.weight * (-ha if c.reflect else ha)
    return u, v, H


def sample_ball(rng, center, radius, n, count):
    """Uniform points in an n-ball, in a fixed draw order for reproducibility."""
    g = rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1)[:, None]
    r = radius * rng.random(count) ** (1.0 / n)
    pts = g * r[:, None]
    pts[:, 0] += center
    return pts


def _montecarlo(rho, alpha, samples, seed, chunk=250_000):
    rng = np.random.default_rng(seed)
    est = np.zeros(3)
    var = np.zeros(3)
    for c in rho.components:
        if c.weight == 0.0:
            continue
        b = c.ball
        vol = b.radius ** b.n  # normalized volume of the ball
        acc = np.zeros(3)
        acc2 = np.zeros(3)
        done = 0
        while done < samples:
            m = min(chunk, samples - done)
            pts = sample_ball(rng, c.center, b.radius, b.n, m)
            vals = _kernels.mc_integrands(pts, float(alpha))
            acc += vals.sum(axis=1)
            acc2 += (vals * vals).sum(axis=1)
            done += m
        mean = acc / samples
        var_c = np.maximum(acc2 / samples - mean * mean, 0.0) / samples
        scale = c.weight * vol
        est += scale * mean
        var += scale * scale * var_c
    return tuple(float(x) for x in est), tuple(float(x) for x in np.sqrt(var))


def density_functionals(rho, alpha, method="analytic", *, samples=1_000_000, seed=0, nodes=64):
    """Evaluate (F_alpha rho, F_{alpha-2} rho, H_alpha rho) at the origin."""
    if method == "analytic":
        return FunctionalValues(*_analytic(rho, alpha), alpha, rho.n)
    if method == "quadrature":
        return FunctionalValues(*_quadrature(rho, alpha, nodes), alpha, rho.n)
    if method == "montecarlo":
        est, err = _montecarlo(rho, alpha, samples, seed)
        return FunctionalValues(*est, alpha, rho.n, stderr=err)
    raise ValueError(f"unknown method {method!r}")


def _frames(rho, y):
    """Each component as a ball seen from y: (weight, ball, unit axis)."""
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != rho.n:
        raise DimensionError(f"point has {y.size} coordinates, density is {rho.n}-dimensional")
    out = []
    for c in rho.components:
        if c.weight == 0.0:
            continue
        centre = np.zeros(rho.n)
        centre[0] = c.center
        d_vec = centre - y
        d = float(np.linalg.norm(d_vec))
        R = c.ball.radius
        if not d > R:
            raise SupportError("evaluation point lies inside or on the support")
        sigma = math.sqrt((d - R) * (d + R))
        out.append((c.weight, BallSpec(d, sigma, rho.n), d_vec / d))
    return out


def _ball_pair(ball, alpha, method, nodes):
    if method == "analytic":
        return ball_F(ball, alpha), ball_H(ball, alpha)
    if method == "quadrature":
        fa, _, ha = ball_quadrature(ball, alpha, nodes)
        return fa, ha
    raise ValueError(f"unknown method {method!r}")


def riesz_potential(rho, y, alpha, method="analytic", nodes=64):
    """I_alpha rho (y) = int rho(x) |y - x|^(alpha - n) d_omega x."""
    total = 0.0
    for w, ball, _ in _frames(rho, y):
        total += w * _ball_pair(ball, alpha, method, nodes)[0]
    return total


def riesz_gradient(rho, y, alpha, method="analytic", nodes=64):
    """Gradient of I_alpha rho at y (zero vector for an empty density)."""
    grad = np.zeros(rho.n)
    for w, ball, axis in _frames(rho, y):
        grad += w * _ball_pair(ball, alpha, method, nodes)[1] * axis
    return (rho.n - alpha) * grad


def exp_transform_point(rho, y, method="analytic", nodes=64):
    """E_rho(y) = exp(-2 I_0 rho(y)) for y outside the support."""
    return math.exp(-2.0 * riesz_potential(rho, y, 0.0, method, nodes))


def _need_newton(rho):
    if rho.n <= 2:
        raise DimensionError("the Newtonian potential needs n >= 3")


def newton_potential(rho, y, method="analytic", nodes=64):
    """U_rho(y) = I_2 rho(y) / (n - 2)."""
    _need_newton(rho)
    return riesz_potential(rho, y, 2.0, method, nodes) / (rho.n - 2)


def newton_gradient(rho, y, method="analytic", nodes=64):
    """Gradient of U_rho at y."""
    _need_newton(rho)
    return riesz_gradient(rho, y, 2.0, method, nodes) / (rho.n - 2)
