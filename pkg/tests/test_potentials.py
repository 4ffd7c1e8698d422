import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import ball_cartesian
from rieszgrad.errors import AdmissibilityError, DimensionError, SupportError
from rieszgrad.potentials import (
    BallSpec,
    Component,
    Density,
    ball_F,
    ball_H,
    ball_quadrature,
    density_functionals,
    exp_transform_point,
    invert_ball,
    newton_gradient,
    newton_potential,
    riesz_gradient,
    riesz_potential,
)
from rieszgrad.reduced import f_alpha, h_alpha
from rieszgrad.verify.suites import random_density

balls = st.builds(
    lambda n, t, s: BallSpec(s * t, s, n),
    st.integers(1, 6),
    st.floats(1e-3, 30.0).map(lambda d: 1.0 + d),
    st.floats(0.05, 20.0),
)
orders = st.floats(0.02, 2.0)


def test_ball_validation():
    with pytest.raises(AdmissibilityError):
        BallSpec(1.0, 1.0, 3)
    with pytest.raises(AdmissibilityError):
        BallSpec(1.0, 0.0, 3)
    with pytest.raises(AdmissibilityError):
        BallSpec(2.0, 1.0, 0)
    b = BallSpec(4.0, 2.0, 3)
    assert b.radius == pytest.approx(math.sqrt(12.0))
    near, far = b.axis_interval
    assert near == pytest.approx(4.0 - math.sqrt(12.0)) and far == pytest.approx(4.0 + math.sqrt(12.0))


def test_ball_scaling_examples():
    b = BallSpec(4.0, 2.0, 3)
    assert ball_F(b, 2.0) == pytest.approx(4 * 3 * math.sqrt(3) / 2, rel=1e-14)
    assert ball_H(b, 2.0) == pytest.approx(2 * 3 * math.sqrt(3) / 4, rel=1e-14)
    assert ball_F(BallSpec(1.7, 1.0, 4), 0.6) == pytest.approx(f_alpha(4, 0.6, 1.7), rel=1e-15)
    assert ball_H(BallSpec(1.7, 1.0, 4), 0.6) == pytest.approx(h_alpha(4, 0.6, 1.7), rel=1e-15)


def test_inversion_examples():
    assert invert_ball(BallSpec(2.0, 1.0, 3)) == BallSpec(2.0, 1.0, 3)
    assert invert_ball(BallSpec(4.0, 2.0, 3)) == BallSpec(1.0, 0.5, 3)
    b = BallSpec(3.0, 1.5, 2)
    assert ball_F(b, 1.0) == pytest.approx(ball_F(invert_ball(b), -1.0), rel=1e-13)


@given(b=balls, a=orders)
def test_inversion_covariance(b, a):
    inv = invert_ball(b)
    back = invert_ball(inv)
    assert back.tau == pytest.approx(b.tau, rel=1e-14)
    assert back.sigma == pytest.approx(b.sigma, rel=1e-14)
    assert ball_F(b, a) == pytest.approx(ball_F(inv, -a), rel=1e-12)
    assert ball_H(b, a) == pytest.approx(ball_H(inv, 2.0 - a), rel=1e-12)
    rho = Density.single(inv)
    fv = density_functionals(rho, -a)
    assert fv.u == pytest.approx(ball_F(b, a), rel=1e-12)


@given(b=balls, a=st.floats(-2.0, 2.0))
def test_quadrature_matches_closed_forms(b, a):
    fa, fv, ha = ball_quadrature(b, a)
    assert fa == pytest.approx(ball_F(b, a), rel=1e-10)
    assert fv == pytest.approx(ball_F(b, a - 2.0), rel=1e-10)
    assert ha == pytest.approx(ball_H(b, a), rel=1e-10)


def test_three_dimensional_cylindrical_oracle():
    b = BallSpec(3.0, 1.2, 3)
    a = 0.8
    direct = ball_cartesian(3, b.tau, b.sigma, lambda x, r: x * (x * x + r * r) ** ((a - 5) / 2))
    assert ball_H(b, a) == pytest.approx(direct, rel=1e-10)


def test_density_validation():
    b1 = BallSpec(2.0, 1.0, 3)
    b2 = BallSpec(2.5, 2.0, 3)  # overlaps b1 on the axis
    with pytest.raises(AdmissibilityError):
        Density(3, [Component(b1), Component(b2)])
    # the same balls on opposite sides are fine
    Density(3, [Component(b1), Component(b2, reflect=True)])
    with pytest.raises(AdmissibilityError):
        Density(3, [Component(b1, weight=1.5)])
    with pytest.raises(AdmissibilityError):
        Density(2, [Component(b1)])


def test_touching_balls_allowed():
    r1 = 0.5
    b1 = BallSpec(1.0, math.sqrt(1.0 - r1 * r1), 3)
    edge = 1.5
    r2 = 1.0
    b2 = BallSpec(edge + r2, math.sqrt(edge * (edge + 2 * r2)), 3)
    rho = Density(3, [Component(b1), Component(b2)])
    assert rho.min_distance == pytest.approx(0.5)


def test_single_ball_functionals():
    b = BallSpec(2.0, 1.3, 4)
    fv = density_functionals(Density.single(b), 1.1)
    assert (fv.u, fv.v, fv.H) == (ball_F(b, 1.1), ball_F(b, -0.9), ball_H(b, 1.1))


def test_linearity_in_weight():
    b = BallSpec(2.0, 1.3, 4)
    full = density_functionals(Density.single(b), 1.1)
    half = density_functionals(Density.single(b, weight=0.5), 1.1)
    assert (half.u, half.v, half.H) == (0.5 * full.u, 0.5 * full.v, 0.5 * full.H)


def test_mirror_pair_cancels_h():
    b = BallSpec(2.0, 1.3, 3)
    one = density_functionals(Density.single(b), 1.4)
    pair = density_functionals(Density(3, [Component(b), Component(b, reflect=True)]), 1.4)
    assert pair.H == 0.0
    assert pair.u == pytest.approx(2 * one.u) and pair.v == pytest.approx(2 * one.v)


@given(seed=st.integers(0, 10_000), n=st.integers(1, 5), a=orders)
def test_reflection_and_cauchy(seed, n, a):
    rho = random_density(np.random.default_rng(seed), n)
    fv = density_functionals(rho, a)
    fr = density_functionals(rho.reflected(), a)
    assert fr.H == pytest.approx(-fv.H, rel=1e-14, abs=1e-300)
    assert (fr.u, fr.v) == pytest.approx((fv.u, fv.v), rel=1e-14)
    assert fv.cauchy_slack >= -1e-12 * fv.u * fv.v


@given(seed=st.integers(0, 10_000), n=st.integers(1, 5), a=orders)
def test_quadrature_path_agrees(seed, n, a):
    rho = random_density(np.random.default_rng(seed), n)
    an = density_functionals(rho, a)
    qu = density_functionals(rho, a, "quadrature")
    assert qu.u == pytest.approx(an.u, rel=1e-4)
    assert qu.v == pytest.approx(an.v, rel=1e-4)
    assert qu.H == pytest.approx(an.H, rel=1e-4, abs=1e-4 * an.u)


def test_monte_carlo_within_three_standard_errors():
    rng = np.random.default_rng(11)
    for n in (2, 3, 4):
        rho = random_density(rng, n, reflect=True)
        an = density_functionals(rho, 1.2)
        mc = density_functionals(rho, 1.2, "montecarlo", samples=200_000, seed=5)
        for est, ref, err in zip((mc.u, mc.v, mc.H), (an.u, an.v, an.H), mc.stderr):
            assert abs(est - ref) <= 3 * err + 1e-12


def test_monte_carlo_reproducible():
    rho = Density.single(BallSpec(2.0, 1.0, 3))
    a = density_functionals(rho, 1.0, "montecarlo", samples=50_000, seed=3)
    b = density_functionals(rho, 1.0, "montecarlo", samples=50_000, seed=3)
    assert (a.u, a.v, a.H, a.stderr) == (b.u, b.v, b.H, b.stderr)


def test_exp_transform_examples():
    assert exp_transform_point(Density(3, ()), np.zeros(3)) == 1.0
    rho = Density.single(BallSpec(2.0, 1.0, 3))
    direct = ball_cartesian(3, 2.0, 1.0, lambda x, r: (x * x + r * r) ** -1.5)
    assert exp_transform_point(rho, np.zeros(3)) == pytest.approx(math.exp(-2 * direct), rel=1e-11)
    val = exp_transform_point(rho, [0.3, -0.4, 0.2])
    assert 0.0 < val < 1.0


def test_support_errors():
    rho = Density.single(BallSpec(2.0, 1.0, 3))
    with pytest.raises(SupportError):
        exp_transform_point(rho, [2.0, 0.0, 0.0])
    with pytest.raises(DimensionError):
        newton_potential(Density.single(BallSpec(2.0, 1.0, 2)), [0.0, 0.0])
    with pytest.raises(DimensionError):
        exp_transform_point(rho, [0.0, 0.0])


def test_newton_at_origin():
    b = BallSpec(2.5, 1.5, 3)
    rho = Density.single(b)
    assert newton_potential(rho, np.zeros(3)) == pytest.approx(ball_F(b, 2.0), rel=1e-14)
    g = newton_gradient(rho, np.zeros(3))
    assert np.linalg.norm(g) == pytest.approx(ball_H(b, 2.0), rel=1e-14)
    assert g[0] > 0.0  # points toward the mass
    empty = Density(3, ())
    assert newton_potential(empty, np.zeros(3)) == 0.0
    assert not newton_gradient(empty, np.zeros(3)).any()


@pytest.mark.parametrize("n", [3, 4])
def test_newton_gradient_finite_differences(n):
    rho = random_density(np.random.default_rng(2), n)
    y = np.zeros(n)
    y[0], y[1] = -0.4, 0.7
    g = newton_gradient(rho, y)
    step = 1e-4
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        fd = (newton_potential(rho, y + e) - newton_potential(rho, y - e)) / (2 * step)
        assert g[i] == pytest.approx(fd, abs=1e-6 * max(1.0, np.linalg.norm(g)))


def test_off_axis_quadrature_agrees():
    rho = random_density(np.random.default_rng(9), 3)
    y = np.array([-0.2, 0.9, 0.3])
    for alpha in (0.0, 0.7, 2.0):
        assert riesz_potential(rho, y, alpha, "quadrature") == pytest.approx(
            riesz_potential(rho, y, alpha), rel=1e-10
        )
    assert riesz_gradient(rho, y, 1.3, "quadrature") == pytest.approx(riesz_gradient(rho, y, 1.3), rel=1e-10)


def test_off_axis_monte_carlo_oracle():
    # uniform sampling of the translated ball, independent of the frame rotation
    b = BallSpec(2.0, 1.2, 3)
    rho = Density.single(b)
    y = np.array([0.1, 1.5, -0.4])
    rng = np.random.default_rng(4)
    g = rng.standard_normal((400_000, 3))
    g /= np.linalg.norm(g, axis=1)[:, None]
    pts = g * (b.radius * rng.random(400_000) ** (1 / 3))[:, None]
    pts[:, 0] += b.tau
    d = np.linalg.norm(pts - y, axis=1)
    vals = d ** (1.3 - 3)
    est, err = vals.mean() * b.radius**3, vals.std() * b.radius**3 / math.sqrt(vals.size)
    assert abs(riesz_potential(rho, y, 1.3) - est) < 4 * err
