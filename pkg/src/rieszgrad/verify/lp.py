"""Brute-force linear-programming oracle for the goal function.

Axially symmetric densities are discretized on a polar grid in the
(|x|, angle-to-x1-axis) half-plane.  All three functionals are linear in the
cell values, so maximizing H subject to prescribed u and v and ``0 <= rho <= 1``
is a linear program.  Nothing about the extremal shape is assumed.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from ..errors import DomainError, Infeasible
from ..potentials import unit_ball_volume

__all__ = ["GridProblem", "LPResult", "build_grid", "lp_oracle"]

BAND = 1e-3


def _radial(a, b, p):
    """int_a^b r^p dr, vectorized over cell edges."""
    if p == -1.0:
        return np.log(b / a)
    return (b ** (p + 1.0) - a ** (p + 1.0)) / (p + 1.0)


@dataclass(frozen=True)
class GridProblem:
    """Cell coefficients of u = F_a rho, v = F_{a-2} rho and H = H_a rho.

    For n >= 2 cells are (radius, angle) boxes flattened radius-major; for
    n = 1 they are intervals on both half-lines.  ``measure`` is the
    normalized volume of each cell.
    """

    n: int
    alpha: float
    delta: float
    R: float
    shape: tuple
    measure: np.ndarray
    cu: np.ndarray
    cv: np.ndarray
    ch: np.ndarray

    @property
    def size(self):
        return self.measure.size

    def functionals(self, rho):
        rho = np.asarray(rho, dtype=float)
        return float(self.cu @ rho), float(self.cv @ rho), float(self.ch @ rho)


def build_grid(n, alpha, nr=100, nt=100, delta=0.05, R=50.0):
    """Discretize the annulus delta <= |x| <= R; radii are log-spaced."""
    if not 0.0 < delta < R:
        raise DomainError("need 0 < delta < R")
    r = np.geomspace(delta, R, nr + 1)
    ra, rb = r[:-1], r[1:]
    if n == 1:
        # cells on x > 0 then their mirror images, d_omega = dx / 2
        m = 0.5 * (rb - ra)
        u = 0.5 * _radial(ra, rb, alpha - 1.0)
        v = 0.5 * _radial(ra, rb, alpha - 3.0)
        h = 0.5 * _radial(ra, rb, alpha - 2.0)
        cat = np.concatenate
        return GridProblem(
            n, alpha, delta, R, (2, nr), cat([m, m]), cat([u, u]), cat([v, v]), cat([h, -h])
        )
    th = np.linspace(0.0, math.pi, nt + 1)
    ta, tb = th[:-1], th[1:]
    x, wq = np.polynomial.legendre.leggauss(16)
    nodes = 0.5 * (ta[:, None] + tb[:, None]) + 0.5 * (tb - ta)[:, None] * x[None, :]
    ang = 0.5 * (tb - ta) * np.sum(wq[None, :] * np.sin(nodes) ** (n - 2), axis=1)
    ang_h = (np.sin(tb) ** (n - 1) - np.sin(ta) ** (n - 1)) / (n - 1)
    const = 2.0 * math.pi ** (0.5 * (n - 1)) / math.gamma(0.5 * (n - 1)) / unit_ball_volume(n)
    outer = lambda radial, angular: const * np.outer(radial, angular).ravel()  # noqa: E731
    return GridProblem(
        n,
        alpha,
        delta,
        R,
        (nr, nt),
        outer(_radial(ra, rb, n - 1.0), ang),
        outer(_radial(ra, rb, alpha - 1.0), ang),
        outer(_radial(ra, rb, alpha - 3.0), ang),
        outer(_radial(ra, rb, alpha - 2.0), ang_h),
    )


@dataclass(frozen=True)
class LPResult:
    """Optimal H, the maximizing cell vector and the measure of fractional cells."""

    value: float
    rho: np.ndarray
    fractional_measure: float
    u: float
    v: float


def lp_oracle(gp, u, v, band=BAND):
    """Maximize H over grid densities with F_a rho, F_{a-2} rho within
    ``band`` (relative) of u and v.  Solved with HiGHS."""
    A = np.vstack([gp.cu, -gp.cu, gp.cv, -gp.cv])
    b = np.array([u * (1 + band), -u * (1 - band), v * (1 + band), -v * (1 - band)])
    # rescale rows so the solver sees O(1) coefficients
    scale = np.abs(A).max(axis=1)
    res = linprog(-gp.ch, A_ub=A / scale[:, None], b_ub=b / scale, bounds=(0.0, 1.0), method="highs")
    if res.status == 2:
        raise Infeasible(f"(u, v) = ({u}, {v}) is not attainable on this grid")
    if res.status != 0:
        raise Infeasible(f"linear program failed: {res.message}")
    rho = np.clip(res.x, 0.0, 1.0)
    frac = (rho > 1e-9) & (rho < 1.0 - 1e-9)
    return LPResult(float(gp.ch @ rho), rho, float(gp.measure[frac].sum()), u, v)
