"""Hot numeric kernels.

Leaf kernels (hypergeometric series, Euler-integral quadrature, Monte-Carlo
integrands) exist in two flavours, ``*_numba`` and ``*_numpy``, which are
always importable so they can be benchmarked against each other.  The
dispatch layer below them (``hyp2f1_unit``, ``log_f``, ...) is written once
in scalar form and compiled with numba only when the numba backend is
active; otherwise it runs as plain Python on top of the numpy leaves.

Every dispatch kernel returns ``(value, status)`` with the ``STATUS_*``
codes; the public wrappers turn a non-zero status into an exception.
"""
import math

import numpy as np

from ._backend import USE_NUMBA, njit, prange

STATUS_OK = 0
STATUS_NONCONVERGENT = 1
STATUS_INVALID = 2

SERIES_TOL = 1e-16
SWITCH_TERMS = 10_000
MAX_TERMS = 1_000_000
# distance of c-a-b from the nearest integer below which the connection
# formula loses too many digits
DEGENERATE_GAP = 0.05
TS_TOL = 1e-15
TS_MAX_LEVEL = 12


# ---------------------------------------------------------------------------
# power series of 2F1

@njit
def series_2f1_numba(a, b, c, x, max_terms):
    """Sum 2F1(a, b; c; x) term by term; returns (sum, terms, converged)."""
    term = 1.0
    total = 1.0
    for k in range(max_terms):
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
        term *= ratio
        total += term
        if term == 0.0:
            return total, k + 1, True
        r = abs(ratio)
        if r < 1.0 and abs(term) <= SERIES_TOL * abs(total) * (1.0 - r):
            return total, k + 1, True
    return total, max_terms, False


def series_2f1_numpy(a, b, c, x, max_terms, block=512):
    """Blocked numpy version of :func:`series_2f1_numba`."""
    term = 1.0
    total = 1.0
    done = 0
    while done < max_terms:
        k = np.arange(done, min(done + block, max_terms), dtype=np.float64)
        ratios = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
        terms = term * np.cumprod(ratios)
        total += float(terms.sum())
        done += k.size
        term = float(terms[-1])
        if term == 0.0:
            return total, done, True
        r = abs(float(ratios[-1]))
        if r < 1.0 and abs(term) <= SERIES_TOL * abs(total) * (1.0 - r):
            return total, done, True
    return total, max_terms, False


# ---------------------------------------------------------------------------
# Euler integral by tanh-sinh quadrature
#
#   2F1(p, q; c; x) = G(c)/(G(p)G(c-p)) int_0^1 s^(p-1) (1-s)^(c-p-1) (1-xs)^(-q) ds
#
# valid for 0 < p < c.  y = 1 - x is passed separately so that arguments
# within 1e-30 of the unit point keep full relative accuracy.

@njit
def _softplus(z):
    if z > 0.0:
        return z + math.log1p(math.exp(-z))
    return math.log1p(math.exp(z))


@njit
def _ts_node(u, p, q, r, y, logpref):
    phi = 0.5 * math.pi * math.sinh(u)
    ln_s = -_softplus(-2.0 * phi)
    ln_1ms = -_softplus(2.0 * phi)
    s = math.exp(ln_s)
    one_minus_xs = math.exp(ln_1ms) + y * s
    expo = logpref + p * ln_s + r * ln_1ms - q * math.log(one_minus_xs)
    return math.pi * math.cosh(u) * math.exp(expo)


@njit
def _ts_limits(p, q, r, y):
    grow = 0.0
    if q > 0.0:
        grow = -q * math.log(y)
    left = math.asinh(45.0 / (math.pi * p)) + 0.5
    right = math.asinh((45.0 + grow) / (math.pi * r)) + 0.5
    return left, right


@njit
def euler_2f1_numba(p, q, c, x, y):
    """Tanh-sinh evaluation of the Euler integral; returns (value, converged)."""
    r = c - p
    logpref = math.lgamma(c) - math.lgamma(p) - math.lgamma(r)
    left, right = _ts_limits(p, q, r, y)
    h = 0.25
    kl = int(math.ceil(left / h))
    kr = int(math.ceil(right / h))
    acc = 0.0
    for k in range(-kl, kr + 1):
        acc += _ts_node(k * h, p, q, r, y, logpref)
    estimate = h * acc
    for _level in range(TS_MAX_LEVEL):
        h *= 0.5
        kl = int(math.ceil(left / h))
        kr = int(math.ceil(right / h))
        extra = 0.0
        start = -kl if (-kl) % 2 != 0 else -kl + 1
        for k in range(start, kr + 1, 2):
            extra += _ts_node(k * h, p, q, r, y, logpref)
        acc += extra
        new = h * acc
        if abs(new - estimate) <= TS_TOL * abs(new):
            return new, True
        estimate = new
    return estimate, False


def _ts_nodes_numpy(u, p, q, r, y, logpref):
    phi = 0.5 * np.pi * np.sinh(u)
    ln_s = -np.logaddexp(0.0, -2.0 * phi)
    ln_1ms = -np.logaddexp(0.0, 2.0 * phi)
    one_minus_xs = np.exp(ln_1ms) + y * np.exp(ln_s)
    expo = logpref + p * ln_s + r * ln_1ms - q * np.log(one_minus_xs)
    return np.pi * np.cosh(u) * np.exp(expo)


def euler_2f1_numpy(p, q, c, x, y):
    """Vectorized numpy version of :func:`euler_2f1_numba`."""
    r = c - p
    logpref = math.lgamma(c) - math.lgamma(p) - math.lgamma(r)
    grow = -q * math.log(y) if q > 0.0 else 0.0
    left = math.asinh(45.0 / (math.pi * p)) + 0.5
    right = math.asinh((45.0 + grow) / (math.pi * r)) + 0.5
    h = 0.25
    k = np.arange(-math.ceil(left / h), math.ceil(right / h) + 1)
    acc = float(_ts_nodes_numpy(k * h, p, q, r, y, logpref).sum())
    estimate = h * acc
    for _level in range(TS_MAX_LEVEL):
        h *= 0.5
        kl = math.ceil(left / h)
        start = -kl if kl % 2 else -kl + 1
        k = np.arange(start, math.ceil(right / h) + 1, 2)
        acc += float(_ts_nodes_numpy(k * h, p, q, r, y, logpref).sum())
        new = h * acc
        if abs(new - estimate) <= TS_TOL * abs(new):
            return new, True
        estimate = new
    return estimate, False


# ---------------------------------------------------------------------------
# Monte-Carlo integrands for the three functionals u, v, H

@njit(parallel=True)
def mc_integrands_numba(points, alpha):
    """Per-sample values of |x|^(a-n), |x|^(a-2-n) and x1 |x|^(a-n-2)."""
    m, n = points.shape
    out = np.empty((3, m))
    for i in prange(m):
        r2 = 0.0
        for j in range(n):
            r2 += points[i, j] * points[i, j]
        lr = 0.5 * math.log(r2)
        out[0, i] = math.exp((alpha - n) * lr)
        g = math.exp((alpha - 2.0 - n) * lr)
        out[1, i] = g
        out[2, i] = points[i, 0] * g
    return out


def mc_integrands_numpy(points, alpha):
    """numpy version of :func:`mc_integrands_numba`."""
    n = points.shape[1]
    lr = 0.5 * np.log(np.einsum("ij,ij->i", points, points))
    g = np.exp((alpha - 2.0 - n) * lr)
    return np.stack([np.exp((alpha - n) * lr), g, points[:, 0] * g])


if USE_NUMBA:
    series_2f1 = series_2f1_numba
    euler_2f1 = euler_2f1_numba
    mc_integrands = mc_integrands_numba
    kernel = njit
else:
    series_2f1 = series_2f1_numpy
    euler_2f1 = euler_2f1_numpy
    mc_integrands = mc_integrands_numpy

    def kernel(f):
        return f


# ---------------------------------------------------------------------------
# dispatch layer

@kernel
def _rgamma(x):
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    return 1.0 / math.gamma(x)


@kernel
def connection_2f1(a, b, c, x, y):
    """Unit-point connection formula; c-a-b must not be an integer."""
    e = c - a - b
    s1, _, ok1 = series_2f1(a, b, 1.0 - e, y, MAX_TERMS)
    s2, _, ok2 = series_2f1(c - a, c - b, 1.0 + e, y, MAX_TERMS)
    gc = math.gamma(c)
    first = gc * math.gamma(e) * _rgamma(c - a) * _rgamma(c - b) * s1
    second = gc * math.gamma(-e) * _rgamma(a) * _rgamma(b) * math.pow(y, e) * s2
    return first + second, ok1 and ok2


@kernel
def hyp2f1_unit(a, b, c, x, y):
    """2F1(a, b; c; x) for 0 <= x < 1 with y = 1 - x supplied accurately."""
    if x == 0.0 or a == 0.0 or b == 0.0:
        return 1.0, STATUS_OK
    val, _, ok = series_2f1(a, b, c, x, SWITCH_TERMS)
    if ok:
        return val, STATUS_OK
    e = c - a - b
    if abs(e - math.floor(e + 0.5)) > DEGENERATE_GAP:
        val, ok = connection_2f1(a, b, c, x, y)
        if ok and math.isfinite(val):
            return val, STATUS_OK
    # near-integer c-a-b: Euler integral on whichever parameter fits 0 < p < c
    best = -1.0
    p = 0.0
    q = 0.0
    if 0.0 < a < c and min(a, c - a) > best:
        best = min(a, c - a)
        p = a
        q = b
    if 0.0 < b < c and min(b, c - b) > best:
        best = min(b, c - b)
        p = b
        q = a
    if best > 0.0:
        val, ok = euler_2f1(p, q, c, x, y)
        if ok:
            return val, STATUS_OK
    val, _, ok = series_2f1(a, b, c, x, MAX_TERMS)
    if ok:
        return val, STATUS_OK
    return val, STATUS_NONCONVERGENT


@kernel
def hyp2f1_negw(a, b, c, w):
    """2F1(a, b; c; -w) for w >= 0 through the Pfaff transformation."""
    if w == 0.0 or a == 0.0 or b == 0.0:
        return 1.0, STATUS_OK
    # transform on a terminating parameter if there is one, else on min(a, b)
    if a <= 0.0 and a == math.floor(a):
        p = a
        o = b
    elif b <= 0.0 and b == math.floor(b):
        p = b
        o = a
    elif a <= b:
        p = a
        o = b
    else:
        p = b
        o = a
    x = w / (1.0 + w)
    y = 1.0 / (1.0 + w)
    val, status = hyp2f1_unit(p, c - o, c, x, y)
    return math.exp(-p * math.log1p(w)) * val, status


@kernel
def _log_f_n1(a, w):
    xi = math.asinh(math.sqrt(w))
    if a == 0.0:
        return math.log(xi)
    z = a * xi
    if z < 20.0:
        return math.log(math.sinh(z) / a)
    return z - math.log(2.0 * a) + math.log1p(-math.exp(-2.0 * z))


@kernel
def log_f(n, alpha, t, w):
    """log f_alpha(t); w = t^2 - 1 must be supplied by the caller."""
    if w == 0.0:
        return -math.inf, STATUS_OK
    a = abs(alpha)
    lead = (2.0 - n) * math.log(t) + 0.5 * n * math.log(w)
    if n == 1:
        return _log_f_n1(a, w), STATUS_OK
    if a == 2.0:
        return lead, STATUS_OK
    val, status = hyp2f1_negw(0.5 * (2.0 - a), 0.5 * (2.0 + a), 0.5 * (n + 2.0), w)
    if not val > 0.0:
        return math.nan, STATUS_NONCONVERGENT
    return lead + math.log(val), status


@kernel
def log_h(n, alpha, t, w):
    """log h_alpha(t); w = t^2 - 1."""
    if w == 0.0:
        return -math.inf, STATUS_OK
    if n == 1:
        return log_f(1, alpha - 1.0, t, w)
    if alpha == 2.0 or alpha == 0.0:
        val, status = log_f(n, 2.0, t, w)
        return val - math.log(t), status
    val, status = hyp2f1_negw(0.5 * (2.0 - alpha), 0.5 * alpha, 0.5 * (n + 2.0), w)
    if not val > 0.0:
        return math.nan, STATUS_NONCONVERGENT
    return (1.0 - n) * math.log(t) + 0.5 * n * math.log(w) + math.log(val), status


@kernel
def d_f(n, alpha, t, w):
    """f_alpha'(t) from the derivative rule for 2F1; requires w > 0."""
    a = abs(alpha)
    if n == 1:
        xi = math.asinh(math.sqrt(w))
        return math.cosh(a * xi) / math.sqrt(w), STATUS_OK
    c = 0.5 * (n + 2.0)
    f0, st0 = hyp2f1_negw(0.5 * (2.0 - a), 0.5 * (2.0 + a), c, w)
    f1, st1 = hyp2f1_negw(0.5 * (4.0 - a), 0.5 * (4.0 + a), c + 1.0, w)
    abc = 0.25 * (2.0 - a) * (2.0 + a) / c
    pref = math.exp((1.0 - n) * math.log(t) + (0.5 * n - 1.0) * math.log(w))
    val = pref * (((2.0 - n) * w + n * t * t) * f0 - 2.0 * t * t * abc * w * f1)
    return val, max(st0, st1)


@kernel
def d_h(n, alpha, t, w):
    """h_alpha'(t) from the derivative rule for 2F1; requires w > 0."""
    if n == 1:
        return d_f(1, alpha - 1.0, t, w)
    a = 0.5 * (2.0 - alpha)
    b = 0.5 * alpha
    c = 0.5 * (n + 2.0)
    g0, st0 = hyp2f1_negw(a, b, c, w)
    g1, st1 = hyp2f1_negw(a + 1.0, b + 1.0, c + 1.0, w)
    pref = math.exp(-n * math.log(t) + (0.5 * n - 1.0) * math.log(w))
    val = pref * (((1.0 - n) * w + n * t * t) * g0 - 2.0 * t * t * (a * b / c) * w * g1)
    return val, max(st0, st1)
