"""Single runs and (eps, alpha) sweeps.

A run simulates the configured case, then at every probe time records the
diagnostics, the pressure jump across the analytic interface radius and the
deviation from the transported profile. Time integrals of the deviation and
of the positive discrepancy are accumulated at every step (trapezoid rule).
"""
from __future__ import annotations

import math
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import __version__
from ..analytic import interface_state, transport_solution, young_laplace_jump
from ..diagnostics import (
    DiagnosticsRecord,
    deviation,
    discrepancy_positive_part,
    record,
    scaling_fit,
)
from ..pressure import JumpMeasurement, decompose, jump, jump_extrapolate
from ..solver import SolverAbort, simulate
from .config import ExperimentConfig, default_workers

SCHEME = {
    "transport": "semi-Lagrangian, exact characteristics, degree-9 spline",
    "cahn_hilliard": "linear implicit, stabilised, banded LU",
    "splitting": "Lie (transport then Cahn-Hilliard)",
    "quadrature": "dual-cell measures",
}


def versions() -> dict:
    import scipy

    return {
        "radial_phasefield": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


@dataclass
class RunReport:
    config: dict
    eps: float
    alpha: float
    records: list = field(default_factory=list)
    jumps: list = field(default_factory=list)
    deviations: list = field(default_factory=list)
    integrals: dict = field(default_factory=dict)
    step_count: int = 0
    wall_clock: float = 0.0
    scheme: dict = field(default_factory=lambda: dict(SCHEME))
    failure: dict | None = None
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failure is None


class _StepIntegrals:
    """Trapezoid accumulation of eps |d_r d|^2 and (xi)^+ over every step."""

    def __init__(self, params, prof, pot):
        self.params, self.prof, self.pot = params, prof, pot
        self.last = None
        self.h1w = 0.0
        self.xi_pos = 0.0

    def __call__(self, state) -> None:
        c = state.c
        oracle = c.with_values(transport_solution(c.grid.r, state.t, self.params, self.prof))
        _, h1w = deviation(c, oracle, self.params)
        xi = discrepancy_positive_part(c, self.params, self.pot)
        if self.last is not None:
            t0, h0, x0 = self.last
            dt = state.t - t0
            self.h1w += 0.5 * dt * (h0 + h1w)
            self.xi_pos += 0.5 * dt * (x0 + xi)
        self.last = (state.t, h1w, xi)


def _probe_row(cfg: ExperimentConfig, params, prof, state, rec: DiagnosticsRecord,
               jm: JumpMeasurement | None, dev) -> dict:
    st = interface_state(state.t, params)
    nan = math.nan
    return {
        "eps": params.eps,
        "alpha": params.alpha,
        "t_probe": state.t,
        "R_analytic": st.R,
        "R_measured": rec.interface_radius,
        "jump_total": jm.value if jm else nan,
        "jump_p1": jm.p1 if jm else nan,
        "jump_p2": jm.p2 if jm else nan,
        "jump_p3": jm.p3 if jm else nan,
        "jump_young_laplace": young_laplace_jump(state.t, params, prof.sigma_profile),
        "kappa_target": st.kappa,
        "energy": rec.energy,
        "discrepancy_pos": rec.discrepancy_pos,
        "bv_seminorm": rec.bv_seminorm,
        "mass": rec.mass,
        "d_eps_l2": dev[0],
        "d_eps_h1w": dev[1],
    }


def run_single(cfg: ExperimentConfig) -> RunReport:
    """Simulate one (eps, alpha) case and collect its report.

    Solver aborts and invalid-argument errors are caught and stored in
    ``report.failure`` together with the stage at which they occurred.
    """
    params = cfg.params
    report = RunReport(config=cfg.to_dict(), eps=params.eps, alpha=params.alpha)
    start = time.perf_counter()
    stage = "setup"
    try:
        prof = cfg.profile()
        grid = cfg.make_grid()
        step_cfg = cfg.step_config(grid)
        acc = _StepIntegrals(params, prof, _pot())
        stage = "simulate"
        snaps = simulate(params, prof, grid, step_cfg, cfg.t_end, cfg.probes(), observer=acc)
        report.step_count = snaps[-1].step_count if snaps else 0
        report.integrals = {"d_eps_h1w": acc.h1w, "discrepancy_pos": acc.xi_pos}
        for state in snaps:
            stage = "diagnostics"
            rec = record(state.t, state.c, params)
            oracle = state.c.with_values(transport_solution(grid.r, state.t, params, prof))
            dev = deviation(state.c, oracle, params)
            stage = "pressure"
            R = interface_state(state.t, params).R
            try:
                jm = jump(decompose(state.c, params), R, cfg.delta_jump, state.t)
            except ValueError:
                jm = None
            report.records.append(rec)
            report.jumps.append(jm)
            report.deviations.append((state.t, dev[0], dev[1]))
            report.rows.append(_probe_row(cfg, params, prof, state, rec, jm, dev))
    except (SolverAbort, ValueError, FloatingPointError) as exc:
        report.failure = {"stage": stage, "error": type(exc).__name__, "message": str(exc)}
    report.wall_clock = time.perf_counter() - start
    return report


def _pot():
    from ..physics import QUARTIC

    return QUARTIC


@dataclass
class SweepResult:
    config: dict
    runs: list
    rows: list
    fits: list
    wall_clock: float

    @property
    def failures(self) -> list:
        return [
            {"eps": r.eps, "alpha": r.alpha, **r.failure} for r in self.runs if r.failure
        ]


def _fits_for_alpha(alpha: float, runs: list) -> list:
    """Scaling fits and jump extrapolations over the eps axis of one alpha."""
    good = [r for r in runs if r.ok]
    good.sort(key=lambda r: -r.eps)
    out = []
    if len(good) < 3:
        return [{"alpha": alpha, "kind": "skipped", "reason": f"{len(good)} successful runs"}]
    eps = [r.eps for r in good]
    n_dim = good[0].config["params"]["n_dim"]
    for key in ("d_eps_h1w", "discrepancy_pos"):
        vals = [r.integrals[key] for r in good]
        entry = {"alpha": alpha, "kind": f"scaling:{key}_time_integral", "eps": eps, "values": vals}
        if key == "discrepancy_pos":
            # mobility decays slower than eps^(1/(n-1)): |xi| itself should vanish
            entry["full_discrepancy_regime"] = alpha < 1.0 / (n_dim - 1)
        try:
            fit = scaling_fit(zip(eps, vals))
            entry.update(slope=fit.slope, intercept=fit.intercept, residual=fit.residual)
        except ValueError as exc:
            entry.update(slope=math.nan, error=str(exc))
        out.append(entry)
    probes = [row["t_probe"] for row in good[0].rows]
    for k, t in enumerate(probes):
        jumps = [r.jumps[k] if k < len(r.jumps) else None for r in good]
        if any(j is None for j in jumps) or t <= 0:
            continue
        ext = jump_extrapolate([-j.value for j in jumps], eps)
        yl = good[0].rows[k]["jump_young_laplace"]
        out.append({
            "alpha": alpha,
            "kind": "jump_extrapolation",
            "t_probe": t,
            "eps": eps,
            "values": [-j.value for j in jumps],
            "extrapolated": ext.value,
            "monotone": ext.monotone,
            "ratio_to_young_laplace": ext.value / yl,
            "kappa_target": good[0].rows[k]["kappa_target"],
        })
    return out


def run_sweep(cfg: ExperimentConfig, workers: int | None = None) -> SweepResult:
    """Run every (eps, alpha) case, possibly in parallel, in a fixed order."""
    if cfg.sweep is None or not cfg.sweep.alpha or not cfg.sweep.eps:
        raise ValueError("sweep axes must be non-empty")
    start = time.perf_counter()
    cases = [cfg.with_case(e, a) for e, a in cfg.cases()]
    workers = workers or cfg.workers or default_workers()
    workers = min(workers, len(cases))
    if workers <= 1:
        runs = [run_single(c) for c in cases]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run_single, cases))
    rows = [row for r in runs for row in r.rows]
    fits = []
    for alpha in cfg.sweep.alpha:
        fits.extend(_fits_for_alpha(alpha, [r for r in runs if r.alpha == alpha]))
    return SweepResult(
        config=cfg.to_dict(), runs=runs, rows=rows, fits=fits,
        wall_clock=time.perf_counter() - start,
    )


DEFAULT_JUMP_EPS = (0.05, 0.025, 0.0125)

JUMP_COLUMNS = (
    "eps", "t_probe", "delta_probe", "R_analytic", "jump_total", "jump_p1", "jump_p2",
    "jump_p3", "jump_young_laplace", "kappa_target", "ratio_to_young_laplace",
)


def jump_sweep(cfg: ExperimentConfig) -> SweepResult:
    """Pressure jumps of the exact transported profile, no time stepping.

    Uses the sweep eps list when present (0.05, 0.025, 0.0125 otherwise) and
    every positive probe time. The layer slope is taken from the closed-form
    derivative so only the pressure quadrature is exercised.
    """
    from ..analytic import transport_solution_deriv

    start = time.perf_counter()
    eps_list = cfg.sweep.eps if cfg.sweep is not None and cfg.sweep.eps else DEFAULT_JUMP_EPS
    prof = cfg.profile()
    times = [t for t in cfg.probes() if t > 0]
    rows = []
    by_time = {t: [] for t in times}
    for eps in eps_list:
        params = cfg.params.replace(eps=eps)
        grid = cfg.make_grid(eps)
        for t in times:
            c = grid.field(transport_solution(grid.r, t, params, prof))
            dc = grid.field(transport_solution_deriv(grid.r, t, params, prof))
            st = interface_state(t, params)
            jm = jump(decompose(c, params, dc), st.R, cfg.delta_jump, t)
            yl = young_laplace_jump(t, params, prof.sigma_profile)
            by_time[t].append(jm)
            rows.append({
                "eps": eps, "t_probe": t, "delta_probe": cfg.delta_jump, "R_analytic": st.R,
                "jump_total": jm.value, "jump_p1": jm.p1, "jump_p2": jm.p2, "jump_p3": jm.p3,
                "jump_young_laplace": yl, "kappa_target": st.kappa,
                "ratio_to_young_laplace": -jm.value / yl,
            })
    fits = []
    if len(eps_list) >= 3:
        for t in times:
            st = interface_state(t, cfg.params)
            yl = young_laplace_jump(t, cfg.params, prof.sigma_profile)
            for part in ("value", "p1"):
                vals = [-getattr(j, part) for j in by_time[t]]
                ext = jump_extrapolate(vals, eps_list)
                fits.append({
                    "kind": "jump_extrapolation" if part == "value" else "jump_extrapolation:p1",
                    "t_probe": t, "eps": list(eps_list), "values": vals,
                    "extrapolated": ext.value, "monotone": ext.monotone,
                    "ratio_to_young_laplace": ext.value / yl, "kappa_target": st.kappa,
                })
    return SweepResult(
        config=cfg.to_dict(), runs=[], rows=rows, fits=fits,
        wall_clock=time.perf_counter() - start,
    )


TRANSPORT_COLUMNS = (
    "level", "eps", "cells", "dt", "t_probe", "R_analytic", "R_measured", "d_eps_l2",
    "d_eps_h1w", "l2_reduction",
)


def validate_transport(cfg: ExperimentConfig, levels: int = 2) -> SweepResult:
    """Zero-mobility runs against the characteristic solution under (h, dt) halving."""
    from dataclasses import replace

    start = time.perf_counter()
    base = replace(cfg, params=cfg.params.replace(alpha=math.inf), sweep=None)
    rows, runs = [], []
    previous = None
    for level in range(levels):
        case = base
        if level:
            grid0 = base.make_grid()
            case = replace(base, grid=replace(base.grid, cells=grid0.cells * 2**level))
            if base.stepping.dt is not None:
                case = replace(case, stepping=replace(base.stepping, dt=base.stepping.dt / 2**level))
        rep = run_single(case)
        runs.append(rep)
        if not rep.ok:
            break
        grid = case.make_grid()
        step_cfg = case.step_config(grid)
        final = rep.rows[-1]
        rows.append({
            "level": level, "eps": case.params.eps, "cells": grid.cells, "dt": step_cfg.dt,
            "t_probe": final["t_probe"], "R_analytic": final["R_analytic"],
            "R_measured": final["R_measured"], "d_eps_l2": final["d_eps_l2"],
            "d_eps_h1w": final["d_eps_h1w"],
            "l2_reduction": math.nan if previous is None else previous / final["d_eps_l2"],
        })
        previous = final["d_eps_l2"]
    return SweepResult(
        config=base.to_dict(), runs=runs, rows=rows, fits=[],
        wall_clock=time.perf_counter() - start,
    )
