"""Gauss hypergeometric function and gamma constants on real arguments.

Only the argument ranges the reduced ball functions produce are supported:
``z <= 0`` (handled by a Pfaff transformation onto ``[0, 1)``) and
``0 <= z < 1``.  Close to ``z = 1`` the direct series is replaced by the
connection formula, or by tanh-sinh quadrature of the Euler integral when
``c - a - b`` sits too close to an integer for the connection formula.
"""
import math
from dataclasses import dataclass

from . import _kernels
from .errors import DomainError, InvalidParams, NonConvergent

__all__ = [
    "HyperParams",
    "gauss_2f1",
    "hyp2f1_neg",
    "limit_coefficient",
    "ln_gamma",
]


def _is_pole(x):
    return x <= 0 and x == math.floor(x)


@dataclass(frozen=True)
class HyperParams:
    """Parameters of 2F1(a, b; c; z) restricted to z <= 0 or 0 <= z < 1."""

    a: float
    b: float
    c: float
    z: float

    def __post_init__(self):
        for name in ("a", "b", "c", "z"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParams(f"{name} must be finite")
        if _is_pole(self.c):
            raise InvalidParams(f"c={self.c} is a nonpositive integer")
        if self.z >= 1.0:
            raise DomainError(f"z={self.z} outside the supported domain z < 1")


def _check(value, status, what):
    if status == _kernels.STATUS_OK and math.isfinite(value):
        return value
    raise NonConvergent(f"{what} did not reach tolerance")


def gauss_2f1(a, b=None, c=None, z=None, *, transform=True):
    """Evaluate 2F1(a, b; c; z) to about 1e-12 relative accuracy.

    Accepts either four numbers or a single :class:`HyperParams`.  With
    ``transform=False`` negative arguments are summed directly, which only
    converges for ``-1 < z < 0``; this exists for self-consistency checks.
    """
    p = a if isinstance(a, HyperParams) else HyperParams(a, b, c, z)
    a, b, c, z = float(p.a), float(p.b), float(p.c), float(p.z)
    if z == 0.0 or a == 0.0 or b == 0.0:
        return 1.0
    if z < 0.0:
        if transform:
            val, status = _kernels.hyp2f1_negw(a, b, c, -z)
            return _check(val, status, "2F1 (Pfaff branch)")
        if z <= -1.0:
            raise DomainError("direct series diverges for z <= -1")
        val, _, ok = _kernels.series_2f1(a, b, c, z, _kernels.MAX_TERMS)
        return _check(val, 0 if ok else 1, "2F1 series")
    val, status = _kernels.hyp2f1_unit(a, b, c, z, 1.0 - z)
    return _check(val, status, "2F1")


def hyp2f1_neg(a, b, c, w):
    """2F1(a, b; c; -w) for ``w >= 0`` without forming ``-w`` explicitly."""
    if _is_pole(c):
        raise InvalidParams(f"c={c} is a nonpositive integer")
    if not w >= 0.0:
        raise DomainError("w must be nonnegative")
    val, status = _kernels.hyp2f1_negw(float(a), float(b), float(c), float(w))
    return _check(val, status, "2F1 (Pfaff branch)")


def ln_gamma(x):
    """Natural logarithm of the gamma function for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _gamma(x):
    if _is_pole(x):
        raise DomainError(f"gamma pole at {x}")
    return math.gamma(x)


def limit_coefficient(a, b, c):
    """Coefficient of (1 - z)^(c-a-b) in 2F1(a, b; c; z) as z -> 1-.

    Returns Gamma(c) Gamma(a+b-c) / (Gamma(a) Gamma(b)); only meaningful for
    ``c < a + b``.
    """
    if not c < a + b:
        raise DomainError("limit coefficient needs c < a + b")
    if _is_pole(a) or _is_pole(b):
        raise DomainError("a or b is a gamma pole")
    num = _gamma(c) * _gamma(a + b - c)
    return num / (_gamma(a) * _gamma(b))
