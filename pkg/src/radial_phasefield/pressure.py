"""Radial pressure reconstruction, decomposition and jump extraction.

With u = a r^(1-n) prescribed, the radial momentum balance fixes the
pressure gradient,

    d_r p = -eps (n-1)/r |d_r c|^2 - eps d_r |d_r c|^2 - rho u d_r u + nu Lap(u),

which splits into p1 (d_r p1 = -eps (n-1)/r |d_r c|^2), p2 = -eps |d_r c|^2 and
the eps-independent velocity part

    p3 = -rho a^2 r^(2-2n) / 2 - nu a (n-1) r^(-n) / n.

Gauge: p1(M) = p3(M) = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .grid import Field, deriv_r
from .physics import ModelParams


@dataclass(frozen=True, eq=False)
class PressureDecomposition:
    p1: Field
    p2: Field
    p3: Field
    total: Field
    p3_alt_coefficient: Field
    gauge: str = "p1(M) = p3(M) = 0"


@dataclass(frozen=True)
class JumpMeasurement:
    t: float
    R_probe: float
    delta_probe: float
    value: float
    p1: float
    p2: float
    p3: float


@dataclass(frozen=True)
class Extrapolation:
    value: float
    monotone: bool
    table: tuple


def velocity_pressure(r, params: ModelParams):
    """p3 up to a constant (not gauged)."""
    n, a = params.n_dim, params.a
    r = np.asarray(r, dtype=float)
    return -0.5 * params.rho * a * a * r ** (2 - 2 * n) - params.nu * a * (n - 1) * r ** (-n) / n


def velocity_pressure_alt_coefficient(r, params: ModelParams):
    """Velocity part with the coefficient a(n-1)/(2n+2) in the inertial term.

    Kept only for comparison: its r-derivative does not equal -rho u d_r u.
    """
    n, a = params.n_dim, params.a
    r = np.asarray(r, dtype=float)
    return a * (n - 1) / (2 * n + 2) * r ** (2 - 2 * n) - params.nu * a * (n - 1) * r ** (-n) / n


def velocity_pressure_gradient(r, params: ModelParams):
    """-rho u d_r u + nu r^(1-n) d_r(r^(n-1) d_r u) for u = a r^(1-n)."""
    n, a = params.n_dim, params.a
    r = np.asarray(r, dtype=float)
    return params.rho * a * a * (n - 1) * r ** (1 - 2 * n) + params.nu * a * (n - 1) * r ** (-n - 1)


def _slope(c: Field, dc: Field | None) -> np.ndarray:
    return (deriv_r(c) if dc is None else dc).values


def pressure_gradient(c: Field, params: ModelParams, dc: Field | None = None) -> Field:
    """Nodewise d_r p; ``dc`` may supply d_r c exactly."""
    r = c.grid.r
    eps, n = params.eps, params.n_dim
    sq = _slope(c, dc) ** 2
    capillary = -eps * (n - 1) / r * sq - eps * np.gradient(sq, c.grid.h, edge_order=2)
    return c.with_values(capillary + velocity_pressure_gradient(r, params))


def decompose(c: Field, params: ModelParams, dc: Field | None = None) -> PressureDecomposition:
    g = c.grid
    r = g.r
    eps, n = params.eps, params.n_dim
    sq = _slope(c, dc) ** 2
    dp1 = -eps * (n - 1) / r * sq
    # integrate inward from r = M: p1(r) = -int_r^M dp1
    p1 = -cumulative_trapezoid(dp1[::-1], -r[::-1], initial=0.0)[::-1]
    p2 = -eps * sq
    p3 = velocity_pressure(r, params) - float(velocity_pressure(g.r_max, params))
    p3p = velocity_pressure_alt_coefficient(r, params) - float(velocity_pressure_alt_coefficient(g.r_max, params))
    return PressureDecomposition(
        p1=g.field(p1),
        p2=g.field(p2),
        p3=g.field(p3),
        total=g.field(p1 + p2 + p3),
        p3_alt_coefficient=g.field(p3p),
    )


def _probe(f: Field, x: float) -> float:
    return float(np.interp(x, f.grid.r, f.values))


def jump(dec: PressureDecomposition, R: float, delta_probe: float, t: float = math.nan) -> JumpMeasurement:
    """p(R + delta) - p(R - delta) for each part, by linear interpolation."""
    g = dec.total.grid
    lo, hi = R - delta_probe, R + delta_probe
    if not (delta_probe > 0 and g.r_min < lo and hi < g.r_max):
        raise ValueError(
            f"probe points {lo:g}, {hi:g} are not inside ({g.r_min:g}, {g.r_max:g})"
        )
    parts = [_probe(p, hi) - _probe(p, lo) for p in (dec.p1, dec.p2, dec.p3)]
    return JumpMeasurement(
        t=float(t),
        R_probe=float(R),
        delta_probe=float(delta_probe),
        value=parts[0] + parts[1] + parts[2],
        p1=parts[0],
        p2=parts[1],
        p3=parts[2],
    )


def jump_extrapolate(values, eps) -> Extrapolation:
    """Richardson extrapolation to eps -> 0 of a series measured at decreasing eps.

    Uses Neville's scheme for the polynomial in eps through all points, so a
    series J + C eps (or with an eps^2 term and three points) is reproduced
    exactly. ``values`` may hold numbers or JumpMeasurement objects.
    """
    y = np.array([v.value if isinstance(v, JumpMeasurement) else v for v in values], dtype=float)
    x = np.asarray(eps, dtype=float)
    if y.size < 3 or x.size != y.size:
        raise ValueError("need at least three measurements with matching eps values")
    if np.any(np.diff(x) >= 0) or np.any(x <= 0):
        raise ValueError("eps values must be positive and strictly decreasing")
    diffs = np.diff(y)
    monotone = bool(np.all(diffs >= 0) or np.all(diffs <= 0))
    table = [y.copy()]
    cur = y.copy()
    for level in range(1, y.size):
        nxt = (x[level:] * cur[:-1] - x[:-level] * cur[1:]) / (x[level:] - x[:-level])
        table.append(nxt)
        cur = nxt
    return Extrapolation(
        value=float(cur[-1]),
        monotone=monotone,
        table=tuple(tuple(row.tolist()) for row in table),
    )
