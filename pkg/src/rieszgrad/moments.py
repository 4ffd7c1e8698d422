"""One-dimensional L-problem of moments.

Moments are taken in the normalized measure ``d_omega x = dx/2`` of the real
line, ``s_k = int rho(x) x^k dx / 2``.  With this normalization the sharp
critical-exponent inequalities hold with equality on intervals; use
:meth:`MomentSeq.from_lebesgue` / :meth:`MomentSeq.to_lebesgue` to convert
from or to plain ``dx`` moments.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InsufficientData, MissingMoment

__all__ = [
    "MomentSeq",
    "CriticalReport",
    "interval_moments",
    "step_moments",
    "invert_pieces",
    "exp_transform_moments",
    "hankel_determinants",
    "check_critical_inequalities",
    "MAX_ORDER",
    "NORMALIZATION_NOTE",
]

MAX_ORDER = 12
TOLERANCE = 1e-10
NORMALIZATION_NOTE = (
    "moments use d_omega x = dx/2; with plain dx the sharp constants in the "
    "critical inequalities are not attained on intervals"
)


@dataclass(frozen=True)
class MomentSeq:
    """Power moments s_k (k may be negative) of a density 0 <= rho <= L."""

    s: dict
    L: float = 1.0
    support: tuple = None

    def __post_init__(self):
        if not self.L > 0.0:
            raise DomainError("L must be positive")
        for k, val in self.s.items():
            if not math.isfinite(val):
                raise DomainError(f"moment s_{k} is not finite")

    def __getitem__(self, k):
        try:
            return self.s[k]
        except KeyError:
            raise MissingMoment(f"moment s_{k} is not available") from None

    def __contains__(self, k):
        return k in self.s

    def __add__(self, other):
        keys = set(self.s) & set(other.s)
        return MomentSeq({k: self.s[k] + other.s[k] for k in sorted(keys)}, self.L)

    @classmethod
    def from_lebesgue(cls, s, L=1.0):
        """Build from plain dx moments."""
        return cls({k: 0.5 * v for k, v in s.items()}, L)

    def to_lebesgue(self):
        return {k: 2.0 * v for k, v in self.s.items()}


def _power_moment(a, b, k):
    if k == -1:
        return 0.5 * (math.log(b) - math.log(a))
    return (b ** (k + 1) - a ** (k + 1)) / (2.0 * (k + 1))


def interval_moments(a, b, k_range, weight=1.0):
    """Moments of weight * chi_[a, b]."""
    if not 0.0 <= a < b:
        raise DomainError("need 0 <= a < b")
    ks = list(k_range)
    if a == 0.0 and any(k < 0 for k in ks):
        raise DomainError("negative moments need a > 0")
    return MomentSeq({k: weight * _power_moment(a, b, k) for k in ks}, support=(a, b))


def _check_pieces(pieces):
    pieces = sorted((float(a), float(b), float(w)) for a, b, w in pieces)
    for a, b, w in pieces:
        if not 0.0 <= a < b:
            raise DomainError(f"bad interval [{a}, {b}]")
        if not 0.0 <= w <= 1.0:
            raise DomainError(f"weight {w} not in [0, 1]")
    for (_, b0, _), (a1, _, _) in zip(pieces, pieces[1:]):
        if a1 < b0:
            raise DomainError("intervals overlap")
    return pieces


def step_moments(pieces, k_range):
    """Moments of a step density given as (a, b, weight) pieces on [0, inf)."""
    pieces = _check_pieces(pieces)
    ks = list(k_range)
    if pieces and pieces[0][0] == 0.0 and any(k < 0 for k in ks):
        raise DomainError("negative moments need support away from 0")
    s = {k: math.fsum(w * _power_moment(a, b, k) for a, b, w in pieces) for k in ks}
    support = (pieces[0][0], pieces[-1][1]) if pieces else None
    return MomentSeq(s, support=support)


def invert_pieces(pieces):
    """Pieces of rho(1/x) for a step density supported away from 0."""
    return [(1.0 / b, 1.0 / a, w) for a, b, w in _check_pieces(pieces)]


def exp_transform_moments(s, order):
    """Coefficients a_0..a_order of 1 - exp(-S(z)/L), S(z) = sum s_k z^-(k+1).

    Computed by the exact power-series recurrence for exp of a series in 1/z.
    """
    if not 0 <= order <= MAX_ORDER:
        raise DomainError(f"order must lie in [0, {MAX_ORDER}]")
    # c_j is the coefficient of z^-j in S/L (c_0 = 0)
    c = [0.0] + [s[k] / s.L for k in range(order + 1)]
    e = [1.0] + [0.0] * (order + 1)
    for m in range(1, order + 2):
        e[m] = -math.fsum(j * c[j] * e[m - j] for j in range(1, m + 1)) / m
    return [-e[k + 1] for k in range(order + 1)]


def _det_cofactor(mat):
    size = len(mat)
    if size == 1:
        return mat[0][0]
    if size == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = 0.0
    for j in range(size):
        if mat[0][j] == 0.0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        total += (-1) ** j * mat[0][j] * _det_cofactor(minor)
    return total


def hankel_determinants(a, m):
    """(Delta_m, Delta'_m) for the Hankel matrices (a_{i+j}) and (a_{i+j+1}), i, j <= m."""
    a = [float(x) for x in a]
    if m < 0:
        raise DomainError("m must be nonnegative")
    if len(a) < 2 * m + 2:
        raise InsufficientData(f"need {2 * m + 2} terms, got {len(a)}")
    h0 = [[a[i + j] for j in range(m + 1)] for i in range(m + 1)]
    h1 = [[a[i + j + 1] for j in range(m + 1)] for i in range(m + 1)]
    if m <= 4:
        return _det_cofactor(h0), _det_cofactor(h1)
    return float(np.linalg.det(np.array(h0))), float(np.linalg.det(np.array(h1)))


@dataclass(frozen=True)
class CriticalReport:
    """Slack (right side minus left side) of each evaluated inequality."""

    slacks: dict
    violations: tuple
    tolerance: float = TOLERANCE
    note: str = field(default=NORMALIZATION_NOTE, compare=False)

    @property
    def ok(self):
        return not self.violations


_REQUIRED = {"markov": (0, 1, 2), "tanh_critical": (0, 1, -1), "sinh_critical": (0, -1, -2)}


def _slack(name, s):
    if name == "markov":
        # Delta_1 >= 0 for the transform; homogeneous of degree 4
        return 12.0 * (s[0] * s[2] - s[1] * s[1]) - 4.0 * s[0] ** 4
    if name == "tanh_critical":
        return s[1] * math.tanh(s[-1]) - s[0] * s[0]
    return s[0] * s[-2] - math.sinh(s[-1]) ** 2


def check_critical_inequalities(s, which=None, tolerance=TOLERANCE):
    """Evaluate the Markov-type inequality and the two critical-exponent ones.

    * markov:        4 s_0^4 <= 12 (s_0 s_2 - s_1^2)
    * tanh_critical: s_0^2 <= s_1 tanh(s_-1)
    * sinh_critical: sinh^2(s_-1) <= s_0 s_-2

    Moments are scaled by 1/L first.  Without ``which`` every inequality whose
    moments are present is checked; MissingMoment is raised if none is.
    """
    names = list(which) if which is not None else [
        k for k, req in _REQUIRED.items() if all(i in s for i in req)
    ]
    if not names:
        raise MissingMoment("no inequality has all of its moments available")
    slacks = {}
    for name in names:
        if name not in _REQUIRED:
            raise KeyError(f"unknown inequality {name!r}")
        scaled = {i: s[i] / s.L for i in _REQUIRED[name]}
        slacks[name] = _slack(name, scaled)
    bad = tuple(k for k, v in slacks.items() if v < -tolerance)
    return CriticalReport(slacks, bad, tolerance)
