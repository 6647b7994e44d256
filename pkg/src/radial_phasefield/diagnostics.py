"""Functionals evaluated on phase fields.

The gradient part of the free energy lives on half-nodes,
eps/2 * sum_j r_{j+1/2}^(n-1) h |(c_{j+1} - c_j)/h|^2, and the potential part
on nodes with the dual-cell weights. This is the Lyapunov functional of the
time stepper, and the BV seminorm below is discretised on the same cells so
that the Young inequality bv <= energy holds exactly on the grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analytic import SPHERE_AREA
from .grid import Field, deriv_r, face_gradient, integrate
from .physics import QUARTIC, ModelParams


class InterfaceError(ValueError):
    def __init__(self, count: int):
        super().__init__(f"expected exactly one sign change, found {count}")
        self.count = count


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    energy: float
    discrepancy_pos: float
    bv_seminorm: float
    interface_radius: float
    mass: float
    linf_c: float
    discrepancy_pairing: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class ScalingFit:
    abscissae: tuple
    ordinates: tuple
    slope: float
    intercept: float
    residual: float

    def predict(self, x):
        return math.exp(self.intercept) * np.asarray(x, dtype=float) ** self.slope


def energy(c: Field, params: ModelParams, pot=QUARTIC) -> float:
    g = c.grid
    eps = params.eps
    grad = face_gradient(c)
    gradient_part = 0.5 * eps * g.h * float(np.dot(g.face_measure, grad * grad))
    potential_part = integrate(c.with_values(pot.f(c.values))) / eps
    return gradient_part + potential_part


def energy_density(c: Field, params: ModelParams, pot=QUARTIC) -> Field:
    """Nodal e_eps = eps |d_r c|^2 / 2 + f(c)/eps."""
    dc = deriv_r(c).values
    return c.with_values(0.5 * params.eps * dc * dc + pot.f(c.values) / params.eps)


def discrepancy(c: Field, params: ModelParams, pot=QUARTIC, dc: Field | None = None) -> Field:
    """Nodal xi = eps |d_r c|^2 / 2 - f(c)/eps."""
    slope = (deriv_r(c) if dc is None else dc).values
    return c.with_values(0.5 * params.eps * slope * slope - pot.f(c.values) / params.eps)


def discrepancy_positive_part(c: Field, params: ModelParams, pot=QUARTIC, dc=None) -> float:
    xi = discrepancy(c, params, pot, dc)
    return integrate(xi.with_values(np.maximum(xi.values, 0.0)))


def discrepancy_pairing(c: Field, params: ModelParams, phi, pot=QUARTIC, dc=None) -> float:
    """Full-space pairing of xi with the radial test function phi(r).

    Includes the sphere area factor, i.e. omega_(n-1) * int xi phi r^(n-1) dr.
    """
    xi = discrepancy(c, params, pot, dc)
    weight = np.asarray(phi(c.grid.r), dtype=float)
    return SPHERE_AREA[c.grid.n_dim] * integrate(xi.with_values(xi.values * weight))


def bv_seminorm(c: Field, params: ModelParams | None = None, pot=QUARTIC) -> float:
    """Weighted total variation of W(c), sum over cells of sqrt(2 f~) |d_r c|."""
    g = c.grid
    left, right = g.half_cell_measures
    ft = pot.f_truncated(c.values)
    mean_ft = (left * ft[:-1] + right * ft[1:]) / (g.face_measure * g.h)
    jumps = np.abs(np.diff(c.values))
    return float(np.dot(g.face_measure * jumps, np.sqrt(2.0 * mean_ft)))


def locate_interface(c: Field) -> float:
    """Zero crossing of c by linear interpolation; exactly one is required."""
    v = c.values
    r = c.grid.r
    nz = np.flatnonzero(v != 0.0)
    if nz.size == 0:
        raise InterfaceError(0)
    signs = np.sign(v[nz])
    changes = np.flatnonzero(signs[:-1] != signs[1:])
    if changes.size != 1:
        raise InterfaceError(int(changes.size))
    i, j = nz[changes[0]], nz[changes[0] + 1]
    if j > i + 1:
        return float(r[i + 1])
    return float(r[i] - v[i] * (r[j] - r[i]) / (v[j] - v[i]))


def deviation(c_solver: Field, c_oracle: Field, params: ModelParams) -> tuple[float, float]:
    """(L2 norm of d, eps * ||d_r d||^2) with d = c_solver - c_oracle."""
    if c_solver.grid != c_oracle.grid:
        raise ValueError("fields live on different grids")
    d = c_solver.with_values(c_solver.values - c_oracle.values)
    l2 = math.sqrt(max(integrate(d.with_values(d.values**2)), 0.0))
    g = d.grid
    slope = face_gradient(d)
    h1w = params.eps * g.h * float(np.dot(g.face_measure, slope * slope))
    return l2, h1w


def scaling_fit(pairs) -> ScalingFit:
    """Least-squares power law value = C eps^slope in log-log coordinates."""
    pairs = list(pairs)
    if len(pairs) < 3:
        raise ValueError("need at least three (eps, value) pairs")
    x = np.array([p[0] for p in pairs], dtype=float)
    y = np.array([p[1] for p in pairs], dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("scaling fit needs strictly positive abscissae and values")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return ScalingFit(
        abscissae=tuple(x.tolist()),
        ordinates=tuple(y.tolist()),
        slope=float(slope),
        intercept=float(intercept),
        residual=float(np.sqrt(np.mean(resid**2))),
    )


def holder_seminorm(trajectory, exponent: float) -> float:
    """max over snapshot pairs of ||c(t) - c(s)||_L2 / |t - s|^exponent."""
    snaps = [(float(s.t), s.c) for s in trajectory]
    if len(snaps) < 3:
        raise ValueError("need at least three snapshots")
    best = 0.0
    for i, (t, ci) in enumerate(snaps):
        for s, cj in snaps[i + 1:]:
            if s == t:
                continue
            diff = ci.values - cj.values
            dist = math.sqrt(integrate(ci.with_values(diff * diff)))
            best = max(best, dist / abs(t - s) ** exponent)
    return best


def record(t: float, c: Field, params: ModelParams, pot=QUARTIC, tests=None) -> DiagnosticsRecord:
    try:
        radius = locate_interface(c)
    except InterfaceError:
        radius = math.nan
    pairings = ()
    if tests:
        pairings = tuple(
            (name, discrepancy_pairing(c, params, phi, pot)) for name, phi in tests.items()
        )
    return DiagnosticsRecord(
        t=float(t),
        energy=energy(c, params, pot),
        discrepancy_pos=discrepancy_positive_part(c, params, pot),
        bv_seminorm=bv_seminorm(c, params, pot),
        interface_radius=radius,
        mass=integrate(c),
        linf_c=float(np.max(np.abs(c.values))),
        discrepancy_pairing=pairings,
    )
