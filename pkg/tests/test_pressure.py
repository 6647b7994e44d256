import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import cumulative_trapezoid

from radial_phasefield.analytic import (
    interface_state,
    transport_solution,
    transport_solution_deriv,
    transported_layer_jump,
    velocity,
)
from radial_phasefield.grid import deriv_r, make_grid
from radial_phasefield.physics import ModelParams
from radial_phasefield.pressure import (
    JumpMeasurement,
    decompose,
    jump,
    jump_extrapolate,
    pressure_gradient,
    velocity_pressure,
    velocity_pressure_gradient,
    velocity_pressure_alt_coefficient,
)


def _profile_fields(t, eps, prof, n=2, per_eps=40):
    p = ModelParams(n_dim=n, eps=eps)
    g = make_grid(1, 5, int(round(per_eps * 4 / eps)), n)
    c = g.field(transport_solution(g.r, t, p, prof))
    dc = g.field(transport_solution_deriv(g.r, t, p, prof))
    return p, g, c, dc


@pytest.mark.parametrize("n", [2, 3])
def test_constant_phase_leaves_only_velocity_part(n):
    p = ModelParams(n_dim=n, a=1.3, rho=0.7, nu=2.0)
    g = make_grid(1, 5, 200, n)
    c = g.field(np.full(g.size, 0.3))
    grad = pressure_gradient(c, p).values
    expected = p.rho * p.a**2 * (n - 1) * g.r ** (1 - 2 * n) + p.nu * p.a * (n - 1) * g.r ** (-n - 1)
    assert np.allclose(grad, expected, rtol=1e-13)
    dec = decompose(c, p)
    assert np.all(dec.p1.values == 0) and np.all(dec.p2.values == 0)


@pytest.mark.parametrize("n", [2, 3])
def test_velocity_gradient_against_finite_differences_of_u(n):
    p = ModelParams(n_dim=n, a=0.9, rho=1.4, nu=0.6)
    r = np.linspace(1.2, 4.8, 25)
    h = 1e-5
    u = lambda x: velocity(x, p)
    du = (u(r + h) - u(r - h)) / (2 * h)
    flux = lambda x: x ** (n - 1) * (u(x + h) - u(x - h)) / (2 * h)
    lap = r ** (1 - n) * (flux(r + h) - flux(r - h)) / (2 * h)
    assert np.allclose(velocity_pressure_gradient(r, p), -p.rho * u(r) * du + p.nu * lap, rtol=1e-5)


@pytest.mark.parametrize("n", [2, 3])
def test_velocity_pressure_closed_form_against_quadrature(n):
    p = ModelParams(n_dim=n, a=1.1, rho=0.8, nu=1.5)
    r = np.linspace(1, 5, 4001)
    q = cumulative_trapezoid(velocity_pressure_gradient(r, p), r, initial=0.0)
    closed = velocity_pressure(r, p) - velocity_pressure(r[0], p)
    assert np.max(np.abs(q - closed)) < 1e-5


def test_alt_velocity_coefficient_is_not_an_antiderivative():
    p = ModelParams(a=2.0, rho=1.0)
    r = np.linspace(1.5, 4.5, 13)
    h = 1e-6
    alt = (velocity_pressure_alt_coefficient(r + h, p) - velocity_pressure_alt_coefficient(r - h, p)) / (2 * h)
    derived = (velocity_pressure(r + h, p) - velocity_pressure(r - h, p)) / (2 * h)
    assert np.allclose(derived, velocity_pressure_gradient(r, p), rtol=1e-6)
    assert not np.allclose(alt, velocity_pressure_gradient(r, p), rtol=1e-2)


def test_capillary_terms_scale_linearly_in_eps():
    g = make_grid(1, 5, 400, 2)
    c = g.sample(lambda r: np.tanh(3 - r))
    base = ModelParams(eps=0.1)
    vel = velocity_pressure_gradient(g.r, base)
    cap = [pressure_gradient(c, base.replace(eps=e)).values - vel for e in (0.1, 0.05)]
    assert np.allclose(cap[1], 0.5 * cap[0], rtol=1e-12, atol=1e-14)


def test_capillary_support_is_the_layer(prof):
    t = 3.0
    p, g, c, dc = _profile_fields(t, 0.05, prof)
    cap = pressure_gradient(c, p, dc).values - velocity_pressure_gradient(g.r, p)
    R = interface_state(t, p).R
    lo = ((p.r0 - prof.delta * p.eps) ** 2 + 2 * t) ** 0.5
    hi = ((p.r0 + prof.delta * p.eps) ** 2 + 2 * t) ** 0.5
    outside = (g.r < lo - 2 * g.h) | (g.r > hi + 2 * g.h)
    assert np.all(cap[outside] == 0.0)
    assert np.any(cap[np.abs(g.r - R) < 0.5 * (hi - lo)] != 0.0)


def test_decomposition_invariants(prof):
    p, g, c, _ = _profile_fields(1.0, 0.1, prof, per_eps=20)
    dec = decompose(c, p)
    assert np.array_equal(dec.total.values, dec.p1.values + dec.p2.values + dec.p3.values)
    assert np.allclose(dec.p2.values, -p.eps * deriv_r(c).values ** 2, rtol=0, atol=0)
    assert dec.p1.values[-1] == 0.0 and dec.p3.values[-1] == 0.0
    flat = deriv_r(c).values == 0.0
    assert np.all(dec.p2.values[flat] == 0.0)


def test_p1_is_antiderivative_to_second_order(prof):
    errs = []
    for per_eps in (40, 80):
        p, g, c, dc = _profile_fields(1.0, 0.1, prof, per_eps=per_eps)
        dec = decompose(c, p, dc)
        target = -p.eps * (p.n_dim - 1) * dc.values**2 / g.r
        errs.append(np.max(np.abs(deriv_r(dec.p1).values - target)[1:-1]))
    assert errs[0] / errs[1] > 3.5


def test_total_gradient_self_consistent(prof):
    errs = []
    for cells in (200, 400, 800):
        p = ModelParams(eps=0.5, r0=3.0)
        g = make_grid(1, 5, cells, 2)
        c = g.sample(lambda r: np.tanh((3 - r) / 0.5))
        dec = decompose(c, p)
        diff = deriv_r(dec.total).values - pressure_gradient(c, p).values
        errs.append(np.max(np.abs(diff[2:-2])))
    assert errs[0] / errs[1] > 3.5 and errs[1] / errs[2] > 3.5


def test_jump_rejects_probes_outside_domain(prof):
    p, g, c, _ = _profile_fields(0.0, 0.1, prof, per_eps=10)
    dec = decompose(c, p)
    with pytest.raises(ValueError):
        jump(dec, 1.1, 0.25)
    with pytest.raises(ValueError):
        jump(dec, 4.9, 0.25)
    with pytest.raises(ValueError):
        jump(dec, 3.0, 0.0)


@pytest.mark.parametrize("eps", [0.05, 0.025, 0.0125])
@pytest.mark.parametrize("t", [1.0, 3.0])
def test_p2_jump_is_exactly_zero(eps, t, prof):
    p, g, c, dc = _profile_fields(t, eps, prof)
    for dec in (decompose(c, p, dc), decompose(c, p)):
        m = jump(dec, interface_state(t, p).R, 0.25, t)
        assert m.p2 == 0.0


def test_p3_jump_vanishes_with_probe_width(prof):
    p, g, c, _ = _profile_fields(1.0, 0.05, prof, per_eps=10)
    dec = decompose(c, p)
    R = interface_state(1.0, p).R
    widths = (0.2, 0.1, 0.05, 0.025)
    vals = [abs(jump(dec, R, d).p3) for d in widths]
    assert all(a / b > 1.9 for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-2


@settings(max_examples=40, deadline=None)
@given(R=st.floats(2.0, 3.5), d=st.floats(0.01, 0.9))
def test_jump_linearity(R, d):
    g = make_grid(1, 5, 300, 2)
    p = ModelParams(eps=0.3)
    c = g.sample(lambda r: np.tanh((2.7 - r) / 0.3))
    dec = decompose(c, p)
    m = jump(dec, R, d)
    assert m.value == m.p1 + m.p2 + m.p3
    direct = np.interp(R + d, g.r, dec.total.values) - np.interp(R - d, g.r, dec.total.values)
    assert m.value == pytest.approx(direct, abs=1e-12)


def test_p1_jump_is_insensitive_to_probe_width(prof):
    p, g, c, dc = _profile_fields(3.0, 0.025, prof)
    dec = decompose(c, p, dc)
    R = interface_state(3.0, p).R
    a, b = jump(dec, R, 0.25).p1, jump(dec, R, 0.125).p1
    assert a == pytest.approx(b, rel=1e-12)


@pytest.mark.parametrize("t", [1.0, 3.0])
def test_p1_jump_series_is_cauchy(t, prof):
    # The odd layer profile cancels the O(eps) term, so successive differences
    # shrink by about 4 once the grid error is below the eps error.
    eps = (0.05, 0.025, 0.0125)
    vals = []
    for e in eps:
        p, g, c, dc = _profile_fields(t, e, prof, per_eps=80)
        vals.append(jump(decompose(c, p, dc), interface_state(t, p).R, 0.25, t).p1)
    ratio = (vals[0] - vals[1]) / (vals[1] - vals[2])
    assert 3.5 <= ratio <= 4.5


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("t", [1.0, 3.0])
def test_p1_jump_limit_is_stretch_times_young_laplace(n, t, prof):
    eps = (0.05, 0.025, 0.0125)
    vals = []
    for e in eps:
        p, g, c, dc = _profile_fields(t, e, prof, n=n)
        vals.append(-jump(decompose(c, p, dc), interface_state(t, p).R, 0.25, t).p1)
    limit = jump_extrapolate(vals, eps).value
    assert limit == pytest.approx(transported_layer_jump(t, ModelParams(n_dim=n), prof), rel=1e-3)


class TestExtrapolation:
    def test_constant_series(self):
        ext = jump_extrapolate([1.25, 1.25, 1.25], [0.1, 0.05, 0.025])
        assert ext.value == pytest.approx(1.25, abs=1e-15)
        assert ext.monotone

    def test_linear_model_eliminated(self):
        eps = [0.08, 0.04, 0.02]
        ext = jump_extrapolate([3.0 + 7.0 * e for e in eps], eps)
        assert abs(ext.value - 3.0) < 1e-10

    def test_quadratic_model_eliminated_with_three_points(self):
        eps = [0.08, 0.04, 0.02]
        ext = jump_extrapolate([3.0 - 2.0 * e + 5.0 * e * e for e in eps], eps)
        assert abs(ext.value - 3.0) < 1e-10

    def test_accepts_measurements_and_flags_non_monotone(self):
        ms = [JumpMeasurement(1.0, 2.0, 0.25, v, v, 0.0, 0.0) for v in (1.0, 1.5, 1.2)]
        ext = jump_extrapolate(ms, [0.1, 0.05, 0.025])
        assert not ext.monotone
        assert math.isfinite(ext.value)

    def test_errors(self):
        with pytest.raises(ValueError):
            jump_extrapolate([1.0, 2.0], [0.1, 0.05])
        with pytest.raises(ValueError):
            jump_extrapolate([1.0, 2.0, 3.0], [0.1, 0.2, 0.05])
        with pytest.raises(ValueError):
            jump_extrapolate([1.0, 2.0, 3.0], [0.1, 0.05])
