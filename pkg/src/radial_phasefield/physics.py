"""Model parameters, double-well potential and the transition profile."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import integrate as sp_integrate
from scipy.interpolate import BPoly

from .grid import Field, RadialGrid


@dataclass(frozen=True)
class ModelParams:
    n_dim: int = 2
    a: float = 1.0
    r0: float = 2.0
    M: float = 5.0
    nu: float = 1.0
    rho: float = 1.0
    m_tilde: float = 1.0
    alpha: float = math.inf
    eps: float = 0.1

    def __post_init__(self) -> None:
        if self.n_dim not in (2, 3):
            raise ValueError(f"n_dim must be 2 or 3, got {self.n_dim}")
        if not 1.0 < self.r0 < self.M:
            raise ValueError(f"need 1 < r0 < M, got r0={self.r0}, M={self.M}")
        # a = 0 is admitted for the pure gradient-flow runs
        if self.a < 0:
            raise ValueError("inflow speed a must be >= 0")
        if not 0.0 < self.eps <= 1.0:
            raise ValueError(f"eps must lie in (0, 1], got {self.eps}")
        if self.nu <= 0 or self.rho <= 0:
            raise ValueError("nu and rho must be positive")
        if self.m_tilde < 0:
            raise ValueError("m_tilde must be >= 0")
        if math.isnan(self.alpha) or self.alpha < 0:
            raise ValueError("alpha must be >= 0 or infinity")
        if not math.isfinite(self.mobility):
            raise ValueError("mobility m_tilde * eps**alpha is not finite")

    @property
    def mobility(self) -> float:
        """m_tilde * eps**alpha; identically zero for alpha = infinity."""
        if math.isinf(self.alpha) or self.m_tilde == 0.0:
            return 0.0
        return self.m_tilde * self.eps**self.alpha

    def replace(self, **changes) -> "ModelParams":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class QuarticPotential:
    """f(c) = scale * (1 - c^2)^2 / 8."""

    scale: float = 1.0
    growth: int = 4

    def f(self, c):
        c = np.asarray(c, dtype=float)
        return self.scale * 0.125 * (1.0 - c * c) ** 2

    def df(self, c):
        c = np.asarray(c, dtype=float)
        return self.scale * 0.5 * c * (c * c - 1.0)

    def d2f(self, c):
        c = np.asarray(c, dtype=float)
        return self.scale * 0.5 * (3.0 * c * c - 1.0)

    def f_truncated(self, c):
        """min(f(c), 1 + c^2)."""
        c = np.asarray(c, dtype=float)
        return np.minimum(self.f(c), 1.0 + c * c)

    def max_curvature(self, bound: float) -> float:
        """max of f'' over |c| <= bound."""
        return float(max(self.d2f(bound), self.d2f(0.0)))


QUARTIC = QuarticPotential()


def potential_eval(pot, c: float) -> tuple[float, float, float]:
    return float(pot.f(c)), float(pot.df(c)), float(pot.d2f(c))


def canonical_sigma(pot=QUARTIC) -> float:
    """Integral of sqrt(f/2) over [-1, 1]."""
    value, _ = sp_integrate.quad(
        lambda s: math.sqrt(max(float(pot.f(s)), 0.0) / 2.0),
        -1.0, 1.0, epsabs=1e-14, epsrel=1e-12,
    )
    return value


def w_of_c(pot, c: float) -> float:
    """W(c): integral of sqrt(2 f~) from -1 to c (negative for c < -1)."""
    integrand = lambda s: math.sqrt(2.0 * max(float(pot.f_truncated(s)), 0.0))
    points = [p for p in (-1.0, 1.0) if min(-1.0, c) < p < max(-1.0, c)]
    value, _ = sp_integrate.quad(
        integrand, -1.0, float(c), points=points or None, epsabs=1e-14, epsrel=1e-12
    )
    return value


def _bump(s, delta):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < delta
    si = s[inside]
    out[inside] = np.exp(-(delta * delta) / (delta * delta - si * si))
    return out


def _bump_slope(s, delta):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < delta
    si = s[inside]
    gap = delta * delta - si * si
    out[inside] = np.exp(-(delta * delta) / gap) * (-2.0 * delta * delta * si / gap**2)
    return out


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


@dataclass(frozen=True)
class Profile:
    """Smooth step theta: 1 for s <= -delta, -1 for s >= delta, odd about 0.

    theta(s) = 1 - 2 Phi(s)/Phi(delta) with Phi the running integral of the
    bump exp(-delta^2/(delta^2 - s^2)). theta is tabulated on [-delta, delta]
    and interpolated by quintic Hermite pieces using the exact first and
    second derivatives; theta' itself is evaluated in closed form.
    """

    delta: float = 0.5
    table_points: int = 2001
    pot: QuarticPotential = field(default=QUARTIC, compare=True)

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.table_points < 16:
            raise ValueError("table_points must be >= 16")

    @cached_property
    def _normaliser(self) -> float:
        d = self.delta
        value, _ = sp_integrate.quad(
            lambda s: float(_bump(s, d)), -d, d, epsabs=1e-14, epsrel=1e-12
        )
        return value

    @cached_property
    def _table(self) -> BPoly:
        d = self.delta
        s = np.linspace(-d, d, self.table_points)
        lo, hi = s[:-1], s[1:]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        panel = half * (_bump(nodes, d) @ _GL_WEIGHTS)
        phi = np.concatenate(([0.0], np.cumsum(panel)))
        z = self._normaliser
        theta = 1.0 - 2.0 * phi / z
        theta[0], theta[-1] = 1.0, -1.0
        if self.table_points % 2 == 1:
            theta[self.table_points // 2] = 0.0
        dtheta = -2.0 * _bump(s, d) / z
        d2theta = -2.0 * _bump_slope(s, d) / z
        derivs = np.stack([theta, dtheta, d2theta], axis=1)
        return BPoly.from_derivatives(s, derivs)

    def theta(self, s):
        s = np.asarray(s, dtype=float)
        d = self.delta
        out = np.where(s <= -d, 1.0, -1.0)
        inside = np.abs(s) < d
        if np.any(inside):
            out = np.array(out, dtype=float)
            out[inside] = np.clip(self._table(s[inside]), -1.0, 1.0)
        return out if out.ndim else float(out)

    def dtheta(self, s):
        value = -2.0 * _bump(s, self.delta) / self._normaliser
        return value if value.ndim else float(value)

    @cached_property
    def sigma_profile(self) -> float:
        """Integral of |theta'|^2 over the real line."""
        d, z = self.delta, self._normaliser
        value, _ = sp_integrate.quad(
            lambda s: float(_bump(s, d)) ** 2, -d, d, epsabs=1e-14, epsrel=1e-12
        )
        return 4.0 * value / z**2

    @cached_property
    def sigma_tilde(self) -> float:
        """Integral of f(theta) over the real line."""
        d = self.delta
        value, _ = sp_integrate.quad(
            lambda s: float(self.pot.f(self.theta(s))), -d, d,
            epsabs=1e-14, epsrel=1e-12, limit=200,
        )
        return value


def profile_eval(prof: Profile, s):
    return prof.theta(s)


def profile_deriv(prof: Profile, s):
    return prof.dtheta(s)


def check_layer_interior(params: ModelParams, prof: Profile) -> None:
    width = prof.delta * params.eps
    if not width < min(params.r0 - 1.0, params.M - params.r0):
        raise ValueError(
            f"transition layer of half-width {width:g} touches a boundary "
            f"(r0={params.r0}, M={params.M})"
        )


def initial_condition(grid: RadialGrid, params: ModelParams, prof: Profile) -> Field:
    """theta((r - r0)/eps) sampled on the grid."""
    check_layer_interior(params, prof)
    return grid.field(prof.theta((grid.r - params.r0) / params.eps))
