"""Experiment configuration: JSON ingestion, default filling and validation.

A config file is a JSON object. Every key is optional; missing keys take the
defaults below. ``alpha`` accepts a number, ``"inf"`` or ``null`` (both mean
zero mobility).

    {
      "params":   {"n_dim": 2, "a": 1.0, "r0": 2.0, "M": 5.0, "nu": 1.0,
                   "rho": 1.0, "m_tilde": 1.0, "alpha": "inf", "eps": 0.1},
      "profile":  {"delta": 0.5, "table_points": 2001},
      "grid":     {"cells": null, "cells_per_eps": 10},
      "stepping": {"dt": null, "cfl": 1.0, "stabilization": null,
                   "interp_degree": 9},
      "t_end": 1.0,
      "probe_times": null,
      "sweep":    {"eps": [], "alpha": []},
      "delta_jump": 0.25,
      "out": "results",
      "workers": null
    }

With ``grid.cells = null`` the cell count is chosen per eps so that
eps/h >= cells_per_eps. With ``stepping.dt = null`` the step is
cfl * h / max|u| (cfl * h when a = 0).
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from ..analytic import interface_radius
from ..grid import RadialGrid, make_grid
from ..physics import ModelParams, Profile
from ..solver import MIN_CELLS_PER_EPS, StepConfig


class ConfigError(ValueError):
    """Invalid or unreadable experiment configuration."""


@dataclass(frozen=True)
class GridRule:
    cells: int | None = None
    cells_per_eps: float = 10.0


@dataclass(frozen=True)
class SteppingRule:
    dt: float | None = None
    cfl: float = 1.0
    stabilization: float | None = None
    interp_degree: int = 9


@dataclass(frozen=True)
class SweepAxes:
    eps: tuple = ()
    alpha: tuple = ()


@dataclass(frozen=True)
class ExperimentConfig:
    params: ModelParams = field(default_factory=ModelParams)
    delta: float = 0.5
    table_points: int = 2001
    grid: GridRule = field(default_factory=GridRule)
    stepping: SteppingRule = field(default_factory=SteppingRule)
    t_end: float = 1.0
    probe_times: tuple = ()
    sweep: SweepAxes | None = None
    delta_jump: float = 0.25
    out: str = "results"
    workers: int | None = None

    # derived objects -------------------------------------------------------

    def profile(self) -> Profile:
        return Profile(delta=self.delta, table_points=self.table_points)

    def make_grid(self, eps: float | None = None) -> RadialGrid:
        p = self.params
        eps = p.eps if eps is None else eps
        length = p.M - 1.0
        if self.grid.cells is not None:
            cells = int(self.grid.cells)
        else:
            cells = math.ceil(self.grid.cells_per_eps * length / eps - 1e-9)
        return make_grid(1.0, p.M, cells, p.n_dim)

    def step_config(self, grid: RadialGrid, params: ModelParams | None = None) -> StepConfig:
        p = self.params if params is None else params
        s = self.stepping
        if s.dt is not None:
            dt = float(s.dt)
        else:
            umax = p.a * grid.r_min ** (1 - p.n_dim)
            dt = s.cfl * grid.h / umax if umax > 0 else s.cfl * grid.h
        return StepConfig(
            dt=dt,
            stabilization=s.stabilization,
            interp_degree=s.interp_degree,
        )

    def probes(self) -> tuple:
        return tuple(self.probe_times) if self.probe_times else (0.0, float(self.t_end))

    def cases(self) -> list[tuple[float, float]]:
        """(eps, alpha) pairs of the sweep in a fixed order; the single run otherwise."""
        if self.sweep is None:
            return [(self.params.eps, self.params.alpha)]
        return [(e, a) for a in self.sweep.alpha for e in self.sweep.eps]

    def with_case(self, eps: float, alpha: float) -> "ExperimentConfig":
        from dataclasses import replace

        return replace(self, params=self.params.replace(eps=eps, alpha=alpha), sweep=None)

    # serialisation ---------------------------------------------------------

    def to_dict(self) -> dict:
        params = asdict(self.params)
        params["alpha"] = _alpha_out(params["alpha"])
        out = {
            "params": params,
            "profile": {"delta": self.delta, "table_points": self.table_points},
            "grid": asdict(self.grid),
            "stepping": asdict(self.stepping),
            "t_end": self.t_end,
            "probe_times": list(self.probes()),
            "sweep": None,
            "delta_jump": self.delta_jump,
            "out": self.out,
            "workers": self.workers,
        }
        if self.sweep is not None:
            out["sweep"] = {
                "eps": list(self.sweep.eps),
                "alpha": [_alpha_out(a) for a in self.sweep.alpha],
            }
        return out


def _alpha_in(value) -> float:
    if value is None:
        return math.inf
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "+inf"):
            return math.inf
        try:
            return float(value)
        except ValueError as exc:
            raise ConfigError(f"alpha: cannot parse {value!r}") from exc
    return float(value)


def _alpha_out(value: float):
    return "inf" if math.isinf(value) else value


def _take(section: dict, cls, name: str) -> dict:
    if section is None:
        return {}
    if not isinstance(section, dict):
        raise ConfigError(f"{name}: expected an object")
    known = {f.name for f in fields(cls)}
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"{name}: unknown keys {sorted(unknown)}")
    return dict(section)


_TOP_KEYS = {
    "params", "profile", "grid", "stepping", "t_end", "probe_times",
    "sweep", "delta_jump", "out", "workers",
}


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Build and validate a config from a parsed JSON object."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level keys {sorted(unknown)}")

    pdict = _take(raw.get("params"), ModelParams, "params")
    if "alpha" in pdict:
        pdict["alpha"] = _alpha_in(pdict["alpha"])
    try:
        params = ModelParams(**pdict)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"params: {exc}") from exc

    prof = raw.get("profile") or {}
    if not isinstance(prof, dict) or set(prof) - {"delta", "table_points"}:
        raise ConfigError("profile: expected keys delta, table_points")

    try:
        grid = GridRule(**_take(raw.get("grid"), GridRule, "grid"))
        stepping = SteppingRule(**_take(raw.get("stepping"), SteppingRule, "stepping"))
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc

    sweep = None
    if raw.get("sweep") is not None:
        sw = _take(raw["sweep"], SweepAxes, "sweep")
        sweep = SweepAxes(
            eps=tuple(float(e) for e in sw.get("eps", ())),
            alpha=tuple(_alpha_in(a) for a in sw.get("alpha", ())),
        )

    t_end = float(raw.get("t_end", 1.0))
    probes = raw.get("probe_times")
    cfg = ExperimentConfig(
        params=params,
        delta=float(prof.get("delta", 0.5)),
        table_points=int(prof.get("table_points", 2001)),
        grid=grid,
        stepping=stepping,
        t_end=t_end,
        probe_times=tuple(sorted({float(t) for t in probes})) if probes else (0.0, t_end),
        sweep=sweep,
        delta_jump=float(raw.get("delta_jump", 0.25)),
        out=str(raw.get("out", "results")),
        workers=None if raw.get("workers") is None else int(raw["workers"]),
    )
    validate(cfg)
    return cfg


def validate(cfg: ExperimentConfig) -> None:
    """Check every invariant; raises ConfigError naming the violated rule."""
    p = cfg.params
    if not cfg.delta > 0:
        raise ConfigError("profile.delta must be positive")
    if cfg.t_end < 0:
        raise ConfigError("t_end must be >= 0")
    probes = cfg.probes()
    if min(probes) < 0 or max(probes) > cfg.t_end:
        raise ConfigError("probe_times must lie in [0, t_end]")
    if not cfg.delta_jump > 0:
        raise ConfigError("delta_jump must be positive")
    if cfg.workers is not None and cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    if cfg.grid.cells is None and not cfg.grid.cells_per_eps >= MIN_CELLS_PER_EPS:
        raise ConfigError(
            f"resolution rule: cells_per_eps = {cfg.grid.cells_per_eps:g} < {MIN_CELLS_PER_EPS:g}"
        )
    s = cfg.stepping
    if s.dt is not None and not s.dt > 0:
        raise ConfigError("stepping.dt must be positive")
    if s.dt is None and not 0 < s.cfl <= 1:
        raise ConfigError("stepping.cfl must lie in (0, 1]")

    R_end = float(interface_radius(cfg.t_end, p))
    if R_end >= p.M - cfg.delta:
        raise ConfigError(
            f"layer exits domain: R(t_end) = {R_end:.6g} >= M - delta = {p.M - cfg.delta:g}"
        )

    if cfg.sweep is not None:
        if not cfg.sweep.alpha:
            raise ConfigError("sweep.alpha is empty")
        if not cfg.sweep.eps:
            raise ConfigError("sweep.eps is empty")
        eps = cfg.sweep.eps
        if any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])):
            raise ConfigError("sweep.eps must be strictly decreasing")
        if len(eps) > 2:
            ratios = [e1 / e2 for e1, e2 in zip(eps, eps[1:])]
            if max(ratios) - min(ratios) > 1e-9 * max(ratios):
                raise ConfigError(f"sweep.eps must be geometric, got ratios {ratios}")
        eps_list, alphas = eps, cfg.sweep.alpha
    else:
        eps_list, alphas = (p.eps,), (p.alpha,)

    for alpha in alphas:
        try:
            p.replace(alpha=alpha)
        except ValueError as exc:
            raise ConfigError(f"sweep.alpha: {exc}") from exc
    for eps in eps_list:
        try:
            pe = p.replace(eps=eps)
        except ValueError as exc:
            raise ConfigError(f"sweep.eps: {exc}") from exc
        try:
            grid = cfg.make_grid(eps)
        except ValueError as exc:
            raise ConfigError(f"grid: {exc}") from exc
        if eps / grid.h < MIN_CELLS_PER_EPS - 1e-9:
            raise ConfigError(
                f"resolution rule: eps/h = {eps / grid.h:.3g} < {MIN_CELLS_PER_EPS:g} at eps = {eps:g}"
            )
        if s.dt is not None and p.a > 0:
            limit = grid.h / (p.a * grid.r_min ** (1 - p.n_dim))
            if s.dt > limit * (1 + 1e-12):
                raise ConfigError(f"CFL rule: dt = {s.dt:g} > h / max|u| = {limit:g} at eps = {eps:g}")
        width = cfg.delta * eps
        if not width < min(pe.r0 - 1.0, pe.M - pe.r0):
            raise ConfigError(f"initial layer of half-width {width:g} touches a boundary")


def load_config(path) -> ExperimentConfig:
    """Read a JSON config file, fill defaults and validate."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"parse error in {path}: {exc}") from exc
    return config_from_dict(raw)


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)
