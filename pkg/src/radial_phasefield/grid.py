"""Uniform radial mesh on [r_min, r_max] with the measure r^(n-1) dr.

Nodes include both endpoints. Every node owns a dual cell bounded by the
neighbouring half-nodes (clipped to the domain); the quadrature weight of a
node is the exact measure of its dual cell, so constants integrate exactly
for any dimension.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class RadialGrid:
    r_min: float
    r_max: float
    cells: int
    n_dim: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.r_min) and np.isfinite(self.r_max)):
            raise ValueError("grid bounds must be finite")
        if self.r_min < 1.0:
            raise ValueError(f"r_min must be >= 1, got {self.r_min}")
        if self.r_max <= self.r_min:
            raise ValueError("r_max must be greater than r_min")
        if int(self.cells) != self.cells or self.cells < 8:
            raise ValueError(f"cells must be an integer >= 8, got {self.cells}")
        object.__setattr__(self, "cells", int(self.cells))
        if self.n_dim not in (2, 3):
            raise ValueError(f"n_dim must be 2 or 3, got {self.n_dim}")

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / self.cells

    @property
    def size(self) -> int:
        return self.cells + 1

    @cached_property
    def r(self) -> np.ndarray:
        r = self.r_min + self.h * np.arange(self.cells + 1)
        r[-1] = self.r_max
        return r

    @cached_property
    def faces(self) -> np.ndarray:
        """Half-node radii r_{i+1/2}, one per cell."""
        return 0.5 * (self.r[:-1] + self.r[1:])

    @cached_property
    def face_measure(self) -> np.ndarray:
        """r^(n-1) at the half-nodes."""
        return self.faces ** (self.n_dim - 1)

    @cached_property
    def weights(self) -> np.ndarray:
        n = self.n_dim
        edges = np.concatenate(([self.r_min], self.faces, [self.r_max]))
        w = np.diff(edges**n) / n
        w.setflags(write=False)
        return w

    @cached_property
    def half_cell_measures(self) -> tuple[np.ndarray, np.ndarray]:
        """Measure of the left and right halves of every cell [r_j, r_{j+1}]."""
        n = self.n_dim
        left = (self.faces**n - self.r[:-1] ** n) / n
        right = (self.r[1:] ** n - self.faces**n) / n
        return left, right

    @property
    def total_measure(self) -> float:
        return (self.r_max**self.n_dim - self.r_min**self.n_dim) / self.n_dim

    def field(self, values) -> "Field":
        return Field(self, np.asarray(values, dtype=float))

    def sample(self, func) -> "Field":
        return Field(self, np.asarray(func(self.r), dtype=float))


@dataclass(frozen=True, eq=False)
class Field:
    """Nodal samples on a RadialGrid."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.size,):
            raise ValueError(
                f"field has shape {values.shape}, grid has {self.grid.size} nodes"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("field contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def with_values(self, values) -> "Field":
        return Field(self.grid, values)


def make_grid(r_min: float, r_max: float, cells: int, n_dim: int) -> RadialGrid:
    return RadialGrid(float(r_min), float(r_max), cells, n_dim)


def integrate(f: Field) -> float:
    """Approximate the integral of f(r) r^(n-1) dr over the grid (second order)."""
    return float(np.dot(f.grid.weights, f.values))


def deriv_r(f: Field) -> Field:
    """Central differences inside, second-order one-sided at the endpoints."""
    return f.with_values(np.gradient(f.values, f.grid.h, edge_order=2))


def face_gradient(f: Field) -> np.ndarray:
    """Difference quotients (f_{j+1} - f_j)/h at the half-nodes."""
    return np.diff(f.values) / f.grid.h


def radial_laplacian(f: Field, closure="one-sided") -> Field:
    """Conservative discretisation of r^(1-n) d/dr (r^(n-1) df/dr).

    Interior node i: (F_{i+1/2} - F_{i-1/2}) / w_i with half-node fluxes
    F = r^(n-1) (f_{i+1} - f_i)/h and w_i the dual-cell measure, which is
    exact for constants and r^2 in any dimension.

    ``closure`` selects the endpoint values:

    * ``"one-sided"``: f'' + (n-1) f'/r with second-order one-sided stencils;
    * ``"zero-flux"``: the boundary face carries no flux (Neumann);
    * ``(left, right)``: ghost values one spacing outside each endpoint.
    """
    g = f.grid
    h = g.h
    v = f.values
    flux = g.face_measure * np.diff(v) / h
    out = np.empty_like(v)
    out[1:-1] = (flux[1:] - flux[:-1]) / g.weights[1:-1]

    if isinstance(closure, str):
        if closure == "one-sided":
            n = g.n_dim
            d2_left = (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / h**2
            d2_right = (2 * v[-1] - 5 * v[-2] + 4 * v[-3] - v[-4]) / h**2
            d1_left = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
            d1_right = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
            out[0] = d2_left + (n - 1) * d1_left / g.r[0]
            out[-1] = d2_right + (n - 1) * d1_right / g.r[-1]
        elif closure == "zero-flux":
            out[0] = flux[0] / g.weights[0]
            out[-1] = -flux[-1] / g.weights[-1]
        else:
            raise ValueError(f"unknown closure {closure!r}")
    else:
        left, right = closure
        n = g.n_dim
        outer_left = (g.r[0] - 0.5 * h) ** (n - 1) * (v[0] - left) / h
        outer_right = (g.r[-1] + 0.5 * h) ** (n - 1) * (right - v[-1]) / h
        vol_left = ((g.r[0] + 0.5 * h) ** n - (g.r[0] - 0.5 * h) ** n) / (n * h)
        vol_right = ((g.r[-1] + 0.5 * h) ** n - (g.r[-1] - 0.5 * h) ** n) / (n * h)
        out[0] = (flux[0] - outer_left) / (h * vol_left)
        out[-1] = (outer_right - flux[-1]) / (h * vol_right)
    return f.with_values(out)
