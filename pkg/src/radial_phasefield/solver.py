"""Time stepper for the radial convective Cahn-Hilliard system.

    d_t c + u d_r c = m Lap(mu),   mu = -eps Lap(c) + f'(c)/eps,   u = a r^(1-n)

on (1, M), with c = 1 at r = 1, c = -1 at r = M and zero flux for mu.

Each step is a Lie splitting:

1. transport: semi-Lagrangian update along the exact characteristics of
   u (they conserve r^n - n a t), with degree-k spline interpolation; the
   inflow value 1 is used where a characteristic starts on r = 1;
2. Cahn-Hilliard: linear implicit step with explicit f' and stabilisation
   beta (c_new - c_old)/eps in mu. With beta >= max f''/2 the discrete free
   energy cannot increase (a = 0).

After eliminating mu the implicit system for the interior values is
pentadiagonal and is solved with a banded LU.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.interpolate import make_interp_spline
from scipy.linalg import solve_banded

from .analytic import interface_radius
from .diagnostics import energy
from .grid import Field, RadialGrid, face_gradient, radial_laplacian
from .physics import QUARTIC, ModelParams, Profile, initial_condition

MIN_CELLS_PER_EPS = 8.0


class SolverAbort(RuntimeError):
    """Raised when a run cannot continue (singular solve, blow-up)."""


@dataclass(frozen=True)
class StepConfig:
    dt: float
    stabilization: float | None = None
    cfl_safety: float = 1.0
    interp_degree: int = 9
    linf_bound: float = 1.5

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not 0.0 < self.cfl_safety <= 1.0:
            raise ValueError("cfl_safety must lie in (0, 1]")
        if self.stabilization is not None and self.stabilization < 0:
            raise ValueError("stabilization must be >= 0")
        if self.interp_degree not in (1, 3, 5, 7, 9):
            raise ValueError("interp_degree must be odd and <= 9")
        if not self.linf_bound > 1.0:
            raise ValueError("linf_bound must exceed 1")

    def beta(self, pot=QUARTIC) -> float:
        if self.stabilization is not None:
            return self.stabilization
        return 0.5 * pot.max_curvature(self.linf_bound)


@dataclass(frozen=True, eq=False)
class SolverState:
    t: float
    c: Field
    mu: Field
    params: ModelParams
    step_count: int = 0


def check_resolution(grid: RadialGrid, params: ModelParams) -> None:
    if params.eps / grid.h < MIN_CELLS_PER_EPS - 1e-9:
        raise ValueError(
            f"resolution rule violated: eps/h = {params.eps / grid.h:.3g} < "
            f"{MIN_CELLS_PER_EPS:g}"
        )


def check_cfl(grid: RadialGrid, params: ModelParams, dt: float, cfl_safety: float) -> None:
    umax = params.a * grid.r_min ** (1 - params.n_dim)
    if umax > 0 and dt > cfl_safety * grid.h / umax * (1 + 1e-12):
        raise ValueError(
            f"CFL guard violated: dt = {dt:g} > {cfl_safety:g} * h / max|u| = "
            f"{cfl_safety * grid.h / umax:g}"
        )


def chemical_potential(c: Field, params: ModelParams, pot=QUARTIC) -> Field:
    lap = radial_laplacian(c, closure="one-sided").values
    return c.with_values(-params.eps * lap + pot.df(c.values) / params.eps)


def _state_mu(c: Field, params: ModelParams, pot) -> Field:
    """Chemical potential with the wall values copied inward.

    This makes the half-node flux of mu vanish at both walls, matching the
    zero-flux faces used by the implicit solve.
    """
    mu = np.array(chemical_potential(c, params, pot).values)
    mu[0], mu[-1] = mu[1], mu[-2]
    return c.with_values(mu)


def _interior_operators(grid: RadialGrid):
    """Dirichlet and zero-flux Laplacians on the interior nodes 1..N-1."""
    h = grid.h
    k = grid.face_measure / h  # conductance of each cell
    w = grid.weights[1:-1]
    left, right = k[:-1], k[1:]  # faces i-1/2, i+1/2 of interior node i
    dirichlet = sp.diags(
        [left[1:] / w[1:], -(left + right) / w, right[:-1] / w[:-1]], [-1, 0, 1]
    )
    left_n = left.copy()
    right_n = right.copy()
    left_n[0] = 0.0
    right_n[-1] = 0.0
    neumann = sp.diags(
        [left_n[1:] / w[1:], -(left_n + right_n) / w, right_n[:-1] / w[:-1]], [-1, 0, 1]
    )
    boundary = np.zeros(grid.size - 2)
    boundary[0] = left[0] / w[0]
    boundary[-1] = right[-1] / w[-1]
    return dirichlet.tocsr(), neumann.tocsr(), boundary


@lru_cache(maxsize=32)
def _implicit_system(grid: RadialGrid, eps: float, mobility: float, dt: float, beta: float):
    lap_d, lap_n, boundary = _interior_operators(grid)
    size = grid.size - 2
    eye = sp.identity(size, format="csr")
    matrix = (eye + dt * mobility * eps * (lap_n @ lap_d) - dt * mobility * beta / eps * lap_n).todia()
    bands = np.zeros((5, size))
    for offset, diag in zip(matrix.offsets, matrix.data):
        if abs(offset) > 2:
            continue
        # dia and LAPACK band storage are both indexed by column
        bands[2 - offset] = diag
    return bands, lap_n, boundary


@lru_cache(maxsize=32)
def _characteristic_feet(grid: RadialGrid, a: float, dt: float):
    n = grid.n_dim
    arg = grid.r**n - n * a * dt
    inflow = arg < grid.r_min**n
    feet = np.where(inflow, grid.r_min, np.maximum(arg, grid.r_min**n) ** (1.0 / n))
    return feet, inflow


_GHOSTS = 24


def _transport(values: np.ndarray, grid: RadialGrid, a: float, dt: float, degree: int) -> np.ndarray:
    feet, inflow = _characteristic_feet(grid, a, dt)
    # constant ghost layers keep the spline end conditions away from the data
    pad = grid.h * np.arange(1, _GHOSTS + 1)
    r_ext = np.concatenate((grid.r_min - pad[::-1], grid.r, grid.r_max + pad))
    v_ext = np.concatenate((np.full(_GHOSTS, values[0]), values, np.full(_GHOSTS, values[-1])))
    spline = make_interp_spline(r_ext, v_ext, k=degree)
    out = spline(feet)
    out[inflow] = 1.0
    return out


def _cahn_hilliard(values, grid, params, dt, beta, pot):
    eps, mob = params.eps, params.mobility
    bands, lap_n, boundary = _implicit_system(grid, eps, mob, dt, beta)
    c_star = values[1:-1]
    bc_term = np.zeros_like(c_star)
    bc_term[0] = boundary[0] * values[0]
    bc_term[-1] = boundary[-1] * values[-1]
    explicit = -eps * bc_term + (pot.df(c_star) - beta * c_star) / eps
    rhs = c_star + dt * mob * (lap_n @ explicit)
    try:
        interior = solve_banded((2, 2), bands, rhs, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SolverAbort(f"implicit solve failed: {exc}") from exc
    # the exact scheme conserves sum(w c); remove the round-off drift
    w = grid.weights[1:-1]
    interior += (np.dot(w, c_star) - np.dot(w, interior)) / w.sum()
    out = values.copy()
    out[1:-1] = interior
    return out


def step(state: SolverState, cfg: StepConfig, pot=QUARTIC, dt: float | None = None) -> SolverState:
    """Advance one step of size ``dt`` (default ``cfg.dt``)."""
    params = state.params
    grid = state.c.grid
    dt = cfg.dt if dt is None else dt
    check_cfl(grid, params, dt, cfg.cfl_safety)

    values = np.array(state.c.values)
    values[0], values[-1] = 1.0, -1.0
    if params.a > 0:
        values = _transport(values, grid, params.a, dt, cfg.interp_degree)
        values[0], values[-1] = 1.0, -1.0
    if params.mobility > 0:
        values = _cahn_hilliard(values, grid, params, dt, cfg.beta(pot), pot)
        values[0], values[-1] = 1.0, -1.0

    if not np.all(np.isfinite(values)):
        raise SolverAbort(f"non-finite phase field at t = {state.t + dt:g}")
    peak = float(np.max(np.abs(values)))
    if peak > cfg.linf_bound:
        raise SolverAbort(
            f"|c| reached {peak:.4g} > bound {cfg.linf_bound:g} at t = {state.t + dt:g}"
        )
    c = grid.field(values)
    return SolverState(
        t=state.t + dt,
        c=c,
        mu=_state_mu(c, params, pot),
        params=params,
        step_count=state.step_count + 1,
    )


def initial_state(grid: RadialGrid, params: ModelParams, prof: Profile, pot=QUARTIC) -> SolverState:
    values = np.array(initial_condition(grid, params, prof).values)
    values[0], values[-1] = 1.0, -1.0
    c = grid.field(values)
    return SolverState(t=0.0, c=c, mu=_state_mu(c, params, pot), params=params)


def simulate(
    params: ModelParams,
    prof: Profile,
    grid: RadialGrid,
    cfg: StepConfig,
    t_end: float,
    probe_times=None,
    pot=QUARTIC,
    observer=None,
) -> list[SolverState]:
    """Run to ``t_end`` and return snapshots at the probe times.

    Probe times default to (0, t_end). Steps are shortened where needed so
    that every probe time is hit exactly. ``observer``, if given, is called
    with the initial state and with the state after every step.
    """
    if t_end < 0:
        raise ValueError("t_end must be >= 0")
    check_resolution(grid, params)
    if float(interface_radius(t_end, params)) >= params.M - prof.delta:
        raise ValueError(
            f"layer exits domain: R(t_end) = {float(interface_radius(t_end, params)):.4g} "
            f">= M - delta = {params.M - prof.delta:g}"
        )
    check_cfl(grid, params, cfg.dt, cfg.cfl_safety)
    if probe_times is None:
        probe_times = [0.0, t_end]
    probes = sorted({float(t) for t in probe_times})
    if probes and (probes[0] < 0 or probes[-1] > t_end + 1e-12):
        raise ValueError("probe times must lie in [0, t_end]")

    state = initial_state(grid, params, prof, pot)
    if observer is not None:
        observer(state)
    snapshots = []
    for target in probes:
        span = target - state.t
        if span > 1e-14:
            nsteps = max(1, math.ceil(span / cfg.dt - 1e-9))
            dt = span / nsteps
            for k in range(nsteps):
                state = step(state, cfg, pot, dt=dt)
                if k == nsteps - 1:
                    state = SolverState(target, state.c, state.mu, params, state.step_count)
                if observer is not None:
                    observer(state)
        snapshots.append(state)
    return snapshots


@dataclass(frozen=True)
class PowerBalance:
    t: np.ndarray
    energy_rate: np.ndarray
    dissipation: np.ndarray
    convective_work: np.ndarray
    residual: np.ndarray
    residual_without_convection: np.ndarray


def dissipation_rate(mu: Field, params: ModelParams) -> float:
    """m * ||d_r mu||^2 over the interior faces (zero flux at the walls)."""
    g = mu.grid
    slope = face_gradient(mu)[1:-1]
    return params.mobility * g.h * float(np.dot(g.face_measure[1:-1], slope * slope))


def convective_work(c: Field, mu: Field, params: ModelParams) -> float:
    """a * int mu d_r c dr (no radial weight: r^(n-1) u = a)."""
    g = c.grid
    slope = face_gradient(c)
    mu_face = 0.5 * (mu.values[:-1] + mu.values[1:])
    return params.a * g.h * float(np.dot(mu_face, slope))


def power_balance(trajectory, pot=QUARTIC) -> PowerBalance:
    """Residual of dE/dt + m||d_r mu||^2 + a int mu d_r c dr per interval.

    Rates at the interval ends are averaged (trapezoidal in time).
    """
    snaps = list(trajectory)
    if len(snaps) < 2:
        raise ValueError("need at least two snapshots")
    times = np.array([s.t for s in snaps])
    gaps = np.diff(times)
    if np.any(gaps <= 0) or not np.allclose(gaps, gaps[0], rtol=1e-8, atol=0.0):
        raise ValueError("snapshots must be uniformly spaced in time")
    params = snaps[0].params
    energies = np.array([energy(s.c, params, pot) for s in snaps])
    diss = np.array([dissipation_rate(s.mu, params) for s in snaps])
    work = np.array([convective_work(s.c, s.mu, params) for s in snaps])
    rate = np.diff(energies) / gaps
    diss_mid = 0.5 * (diss[:-1] + diss[1:])
    work_mid = 0.5 * (work[:-1] + work[1:])
    return PowerBalance(
        t=0.5 * (times[:-1] + times[1:]),
        energy_rate=rate,
        dissipation=diss_mid,
        convective_work=work_mid,
        residual=rate + diss_mid + work_mid,
        residual_without_convection=rate + diss_mid,
    )
