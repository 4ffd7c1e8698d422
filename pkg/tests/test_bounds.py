import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from rieszgrad.bounds import (
    T_MAX,
    M_n,
    M_n_derivative,
    M_n_ode,
    N_alpha,
    Phi_n,
    Phi_n_derivatives,
    build_shape_table,
    gradient_bound,
    phi_asymptote_constant,
    phi_ode_residual,
    psi_shape,
    solve_t,
)
from rieszgrad.errors import ConvergenceError, DomainError, RangeError
from rieszgrad.potentials import BallSpec, ball_F, ball_H, density_functionals
from rieszgrad.reduced import f_alpha, h_alpha
from rieszgrad.verify.suites import random_density

dims = st.integers(1, 6)
orders = st.floats(0.02, 2.0)
positive = st.floats(1e-4, 1e4)


def test_solve_t_manufactured():
    u = f_alpha(3, 1.0, 2.0)
    assert solve_t(3, 1.0, u, u) == pytest.approx(2.0, rel=1e-12)


def test_solve_t_frozen_oracle():
    # 60-digit bisection on g(t) - u^(1/2) v^(3/2)
    t = solve_t(3, 1.5, 2.0, 0.7)
    assert t == pytest.approx(1.6254223385717061795, rel=1e-12)
    g = f_alpha(3, 1.5, t) ** 0.5 * f_alpha(3, -0.5, t) ** 1.5
    assert g == pytest.approx(2.0**0.5 * 0.7**1.5, rel=1e-12)


def test_solve_t_small_data_tends_to_tangency():
    ts = [solve_t(3, 1.2, x, x) for x in (1e-2, 1e-5, 1e-9)]
    assert ts[0] > ts[1] > ts[2] > 1.0
    assert ts[2] - 1.0 < 1e-6


def test_solve_t_errors():
    with pytest.raises(RangeError):
        solve_t(3, 2.5, 1.0, 1.0)
    with pytest.raises(RangeError):
        solve_t(3, 0.0, 1.0, 1.0)
    with pytest.raises(ConvergenceError):
        solve_t(3, 1.0, 1e200, 1e200)


def _g(n, a, t):
    return f_alpha(n, a, t) ** (2 - a) * f_alpha(n, a - 2, t) ** a


def _solve_or_justify(n, a, u, v):
    """N_alpha(n, a, u, v), or None after checking that the root lies past T_MAX."""
    try:
        return N_alpha(n, a, u, v)
    except ConvergenceError:
        log_target = (2 - a) * math.log(u) + a * math.log(v)
        assert math.log(_g(n, a, T_MAX)) < log_target
        assume(False)


@given(n=dims, a=orders, u=positive, v=positive)
def test_solve_t_brackets_root(n, a, u, v):
    # accuracy is stated on t: the target lies between g at t(1 -+ 4e-12)
    if _solve_or_justify(n, a, u, v) is None:
        return
    t = solve_t(n, a, u, v)
    assert t >= 1.0
    target = u ** (2 - a) * v**a
    lo, hi = max(1.0, t * (1 - 4e-12)), t * (1 + 4e-12)
    assert _g(n, a, lo) <= target * (1 + 1e-14) and target <= _g(n, a, hi) * (1 + 1e-14)


def test_bracketing_reaches_t_max():
    # n = 1 with small alpha grows like t^(2a(2-a)); this root lies in
    # (2^49, 1e15], just below the bracketing limit
    r = N_alpha(1, 0.0625, 500.0, 77.0)
    assert 2.0**49 < r.t0 <= T_MAX
    with pytest.raises(ConvergenceError):
        N_alpha(1, 0.0625, 5000.0, 77.0)
    assert math.log(_g(1, 0.0625, T_MAX)) < 1.9375 * math.log(5000.0) + 0.0625 * math.log(77.0)


def test_degenerate_pairs():
    for u, v in ((0.0, 1.0), (1.0, 0.0), (0.0, 0.0)):
        r = N_alpha(3, 1.3, u, v)
        assert r.value == 0.0 and r.witness is None
    assert gradient_bound(3, 1.3, 0.0, 2.0) == 0.0
    with pytest.raises(DomainError):
        N_alpha(3, 1.3, -1.0, 1.0)


@given(n=dims, a=orders, t=st.floats(1.01, 30.0), sigma=st.floats(0.1, 10.0))
def test_sharp_on_balls(n, a, t, sigma):
    b = BallSpec(sigma * t, sigma, n)
    r = N_alpha(n, a, ball_F(b, a), ball_F(b, a - 2.0))
    assert r.value == pytest.approx(ball_H(b, a) ** 2, rel=1e-9)
    assert r.t0 == pytest.approx(t, rel=1e-9)
    assert r.sigma0 == pytest.approx(sigma, rel=1e-9)


@given(n=dims, a=orders, u=positive, v=positive)
def test_witness_reproduces_data(n, a, u, v):
    _solve_or_justify(n, a, u, v)
    r = N_alpha(n, a, u, v)
    assert r.t0 >= 1.0 and r.sigma0 > 0.0
    assert r.value <= u * v * (1 + 1e-12)
    if r.witness is not None:
        assert ball_F(r.witness, a) == pytest.approx(u, rel=1e-9)
        assert ball_F(r.witness, a - 2.0) == pytest.approx(v, rel=1e-9)
        assert ball_H(r.witness, a) ** 2 == pytest.approx(r.value, rel=1e-9)


@given(seed=st.integers(0, 10_000), n=dims, a=orders)
def test_dominates_every_density(seed, n, a):
    fv = density_functionals(random_density(np.random.default_rng(seed), n), a)
    assert fv.H**2 <= N_alpha(n, a, fv.u, fv.v).value * (1 + 1e-10) + 1e-300


@pytest.mark.parametrize("n,a", [(1, 0.5), (3, 1.0), (3, 2.0), (5, 1.7)])
def test_monotone_in_each_argument(n, a):
    # kept inside the range where the defining root lies below T_MAX
    grid = np.geomspace(1e-3, 30.0, 50)
    vals = np.array([[N_alpha(n, a, u, v).value for v in grid] for u in grid])
    assert np.all(np.diff(vals, axis=0) >= 0.0)
    assert np.all(np.diff(vals, axis=1) >= 0.0)


@given(n=dims, u=positive, v=positive)
def test_alpha_one_depends_on_product(n, u, v):
    a = N_alpha(n, 1.0, u, v).value
    assert N_alpha(n, 1.0, v, u).value == pytest.approx(a, rel=1e-9)
    assert N_alpha(n, 1.0, u * v, 1.0).value == pytest.approx(a, rel=1e-9)
    assert a == pytest.approx(Phi_n(n, math.sqrt(u * v)) ** 2, rel=1e-9)


@given(n=dims, u=positive, v=st.floats(1e-4, 50.0))
def test_alpha_two_reduces_to_m(n, u, v):
    _solve_or_justify(n, 2.0, u, v)
    assert N_alpha(n, 2.0, u, v).value == pytest.approx(u * M_n(n, v), rel=1e-9)


def test_known_values():
    assert N_alpha(3, 2.0, 1.0, 1.0).value == pytest.approx(0.5479291951138313, rel=1e-12)
    assert N_alpha(2, 1.0, 4.0, 1.0).value == pytest.approx(1.8005690347906802, rel=1e-12)


@given(n=dims, a=orders, u=positive, v=positive)
def test_psi_factorization(n, a, u, v):
    _solve_or_justify(n, a, u, v)
    s = u ** (2 - a) * v**a
    if 0.0 < s < 1e300:
        assert u * v * psi_shape(n, a, s) == pytest.approx(N_alpha(n, a, u, v).value, rel=1e-9)


def test_psi_limits_and_strictness():
    assert psi_shape(3, 1.4, 0.0) == 1.0
    assert psi_shape(3, 1.4, 1e-12) == pytest.approx(1.0, abs=1e-3)
    for s in np.geomspace(1e-6, 1e6, 25):
        assert psi_shape(3, 1.4, s) < 1.0


def test_m_closed_forms():
    assert M_n(1, 0.5) == pytest.approx(math.tanh(0.5), rel=1e-12)
    assert M_n(1, 0.5) == pytest.approx(0.462117, abs=1e-6)
    assert M_n(2, 1.0) == pytest.approx(1 - math.exp(-1.0), rel=1e-12)
    assert M_n(2, 1.0) == pytest.approx(0.632121, abs=1e-6)
    assert M_n(4, 0.0) == 0.0
    assert M_n(3, 1e3) == 1.0


@given(n=dims, v=st.floats(1e-3, 30.0))
def test_m_paths_agree(n, v):
    assert M_n_ode(n, v) == pytest.approx(M_n(n, v), abs=1e-9)
    m = M_n(n, v)
    assert 0.0 <= m <= 1.0  # tanh(20) already rounds to 1
    assert M_n_derivative(n, v) == pytest.approx(1.0 - m ** (2.0 / n), rel=1e-7, abs=1e-12)


def test_m_ode_vectorized():
    vs = np.array([2.0, 0.0, 0.5])
    out = M_n_ode(2, vs)
    assert out == pytest.approx(1 - np.exp(-vs), abs=1e-10)


def test_phi_closed_forms():
    assert Phi_n(3, 0.0) == 0.0
    assert Phi_n_derivatives(3, 0.0)[1] == 1.0
    assert Phi_n(1, 1.0) == pytest.approx(math.asinh(1.0), rel=1e-12)
    assert Phi_n(1, 1.0) == pytest.approx(0.881374, abs=1e-6)


@pytest.mark.parametrize("z", [1e-3, 1e-2, 0.05])
def test_phi_two_taylor(z):
    series = z - z**2 / 4 + z**3 / 16 - 7 * z**4 / 512 + 5 * z**5 / 2048
    assert Phi_n(2, z) == pytest.approx(series, abs=2 * z**6)


@given(n=dims, s=st.floats(0.1, 100.0))
def test_phi_ode_residual(n, s):
    assert abs(phi_ode_residual(n, s)) <= 1e-7


@given(n=dims, s=st.floats(0.1, 100.0), c=st.floats(0.2, 5.0))
def test_phi_homothety(n, s, c):
    assert abs(phi_ode_residual(n, s, scale=c)) <= 1e-7


@given(n=dims, s=st.floats(1e-3, 100.0))
def test_phi_derivatives_against_finite_differences(n, s):
    h = 1e-4 * s
    p, d1, _ = Phi_n_derivatives(n, s)
    assert p == pytest.approx(Phi_n(n, s), rel=1e-14)
    fd = (Phi_n(n, s + h) - Phi_n(n, s - h)) / (2 * h)
    assert d1 == pytest.approx(fd, rel=1e-6)


def test_phi_asymptote_constant():
    assert phi_asymptote_constant(2) == pytest.approx(4 / math.pi, rel=1e-14)
    assert phi_asymptote_constant(1) == pytest.approx(1.0, rel=1e-14)
    # s Phi'(s) = s / t tends to c_n much faster than Phi/ln s does
    for n in (1, 2, 3, 5):
        s = 1e8
        assert s * Phi_n_derivatives(n, s)[1] == pytest.approx(phi_asymptote_constant(n), rel=1e-3)


def test_gradient_bound():
    assert gradient_bound(3, 2.0, 1.5, 0.8) ** 2 == pytest.approx(1.5 * M_n(3, 0.8), rel=1e-12)
    assert gradient_bound(4, 1.0, 2.0, 3.0) < 3.0 * math.sqrt(6.0)
    with pytest.raises(RangeError):
        gradient_bound(2, 2.0, 1.0, 1.0)
    with pytest.raises(RangeError):
        gradient_bound(3, 3.0, 1.0, 1.0)


def test_alpha_two_inequality_on_densities():
    rng = np.random.default_rng(7)
    for n in (3, 4):
        for _ in range(20):
            fv = density_functionals(random_density(rng, n), 2.0)
            assert fv.H**2 <= M_n(n, fv.v) * fv.u * (1 + 1e-10)


@pytest.mark.parametrize("kind", ["M_n", "Phi_n", "psi"])
def test_shape_tables(kind):
    tab = build_shape_table(kind, 3, 0.0, 20.0, alpha=1.3)
    xs, ys = tab.arguments, tab.values
    assert np.all(np.diff(xs) > 0)
    # M and Phi increase; psi decreases from its Cauchy value 1
    step = np.diff(ys)
    assert np.all(step < 0) if kind == "psi" else np.all(step > 0)
    if kind == "M_n":
        assert np.all((ys >= 0.0) & (ys < 1.0))
    probe = np.linspace(0.37, 19.1, 13)
    ref = np.array([tab.interpolate(x) for x in probe])
    fn = {"M_n": lambda x: M_n(3, x), "Phi_n": lambda x: Phi_n(3, x),
          "psi": lambda x: psi_shape(3, 1.3, x)}[kind]
    exact = np.array([fn(x) for x in probe])
    assert np.max(np.abs(ref - exact) / np.maximum(1.0, np.abs(exact))) < 1e-7


def test_shape_table_errors():
    with pytest.raises(DomainError):
        build_shape_table("M_n", 3, 2.0, 1.0)
    with pytest.raises(ValueError):
        build_shape_table("nope", 3, 0.0, 1.0)
