"""Closed-form objects of the radially symmetric problem.

With vanishing mobility the phase field is transported by u = a r^(1-n),
whose characteristics conserve r^n - n a t. The zero level set therefore
sits at R(t) = (r0^n + n a t)^(1/n).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .physics import ModelParams, Profile

SPHERE_AREA = {2: 2.0 * math.pi, 3: 4.0 * math.pi}


@dataclass(frozen=True)
class InterfaceState:
    t: float
    R: float
    H: float
    kappa: float


def velocity(r, params: ModelParams):
    r = np.asarray(r, dtype=float)
    return params.a * r ** (1 - params.n_dim)


def interface_radius(t, params: ModelParams):
    n = params.n_dim
    return (params.r0**n + n * params.a * np.asarray(t, dtype=float)) ** (1.0 / n)


def interface_state(t: float, params: ModelParams) -> InterfaceState:
    if t < 0:
        raise ValueError("t must be >= 0")
    n = params.n_dim
    R = float(interface_radius(t, params))
    return InterfaceState(
        t=float(t), R=R, H=(n - 1) / R, kappa=(R / params.r0) ** (2 * n - 2)
    )


def _characteristic_foot(r, t, params: ModelParams):
    n = params.n_dim
    r = np.asarray(r, dtype=float)
    arg = r**n - n * params.a * t
    first = arg >= 0.0
    foot = np.where(first, np.maximum(arg, 0.0), 0.0) ** (1.0 / n)
    return foot, arg, first


def transport_solution(r, t: float, params: ModelParams, prof: Profile):
    """Method-of-characteristics solution with inflow value 1 at r = 1."""
    foot, _, first = _characteristic_foot(r, t, params)
    value = np.where(first, prof.theta((foot - params.r0) / params.eps), 1.0)
    return value if value.ndim else float(value)


def transport_solution_deriv(r, t: float, params: ModelParams, prof: Profile):
    """d/dr of the transport solution; zero on the inflow branch.

    Chain rule: theta'(s) r^(n-1) (r^n - n a t)^(1/n - 1) / eps, which is <= 0
    because theta is non-increasing.
    """
    n = params.n_dim
    r = np.asarray(r, dtype=float)
    foot, arg, first = _characteristic_foot(r, t, params)
    strict = arg > 0.0
    safe = np.where(strict, arg, 1.0)
    stretch = r ** (n - 1) * safe ** (1.0 / n - 1.0)
    slope = prof.dtheta((foot - params.r0) / params.eps)
    value = np.where(strict & first, slope * stretch / params.eps, 0.0)
    return value if value.ndim else float(value)


def young_laplace_jump(t: float, params: ModelParams, sigma: float) -> float:
    """Classical law: sigma (n - 1) / R(t)."""
    st = interface_state(t, params)
    return sigma * st.H


def limit_jump(t: float, params: ModelParams, prof: Profile) -> float:
    """Amplified law sigma kappa(t) (n - 1)/R(t) with kappa = (R/r0)^(2n-2)."""
    st = interface_state(t, params)
    return prof.sigma_profile * st.kappa * st.H


def xi_limit_amplitude(t: float, params: ModelParams, prof: Profile) -> float:
    """sigma kappa(t) - sigma_tilde."""
    st = interface_state(t, params)
    return prof.sigma_profile * st.kappa - prof.sigma_tilde


def layer_stretch(t: float, params: ModelParams) -> float:
    """Steepening of the transported layer at R(t): (R/r0)^(n-1).

    The layer thickness scales like r0^(n-1)/R^(n-1) because the flow is
    volume preserving, so gradients at the interface grow by this factor.
    """
    st = interface_state(t, params)
    return (st.R / params.r0) ** (params.n_dim - 1)


def transported_layer_jump(t: float, params: ModelParams, prof: Profile) -> float:
    """eps -> 0 limit of p(R - d) - p(R + d) for the transported layer.

    Substituting s = (foot - r0)/eps in the capillary integral gives
    sigma * stretch * (n - 1)/R: one factor of the stretch comes from
    |d_r c|^2 = stretch^2 theta'^2 / eps^2, the other is removed by
    dr = eps ds / stretch.
    """
    st = interface_state(t, params)
    return prof.sigma_profile * layer_stretch(t, params) * st.H


def transported_layer_xi_amplitude(t: float, params: ModelParams, prof: Profile) -> float:
    """eps -> 0 weight of the discrepancy concentrated on the sphere R(t).

    Same substitution as above: sigma * stretch / 2 - sigma_tilde / stretch.
    """
    g = layer_stretch(t, params)
    return 0.5 * prof.sigma_profile * g - prof.sigma_tilde / g


def sphere_area(R: float, n_dim: int) -> float:
    return SPHERE_AREA[n_dim] * R ** (n_dim - 1)
