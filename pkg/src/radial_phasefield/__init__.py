"""Radially symmetric convective Cahn-Hilliard model: solver, oracles and diagnostics."""
from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .analytic import (
    InterfaceState,
    interface_radius,
    interface_state,
    limit_jump,
    transport_solution,
    transport_solution_deriv,
    transported_layer_jump,
    transported_layer_xi_amplitude,
    velocity,
    xi_limit_amplitude,
    young_laplace_jump,
)
from .diagnostics import (
    DiagnosticsRecord,
    InterfaceError,
    ScalingFit,
    bv_seminorm,
    deviation,
    discrepancy,
    discrepancy_pairing,
    discrepancy_positive_part,
    energy,
    holder_seminorm,
    locate_interface,
    scaling_fit,
)
from .grid import Field, RadialGrid, deriv_r, integrate, make_grid, radial_laplacian
from .physics import (
    QUARTIC,
    ModelParams,
    Profile,
    QuarticPotential,
    canonical_sigma,
    initial_condition,
    potential_eval,
    profile_deriv,
    profile_eval,
    w_of_c,
)
from .pressure import (
    JumpMeasurement,
    PressureDecomposition,
    decompose,
    jump,
    jump_extrapolate,
    pressure_gradient,
)
from .solver import (
    SolverAbort,
    SolverState,
    StepConfig,
    chemical_potential,
    power_balance,
    simulate,
    step,
)

__all__ = [
    "__version__",
    "InterfaceState",
    "interface_radius",
    "interface_state",
    "limit_jump",
    "transport_solution",
    "transport_solution_deriv",
    "transported_layer_jump",
    "transported_layer_xi_amplitude",
    "velocity",
    "xi_limit_amplitude",
    "young_laplace_jump",
    "DiagnosticsRecord",
    "InterfaceError",
    "ScalingFit",
    "bv_seminorm",
    "deviation",
    "discrepancy",
    "discrepancy_pairing",
    "discrepancy_positive_part",
    "energy",
    "holder_seminorm",
    "locate_interface",
    "scaling_fit",
    "Field",
    "RadialGrid",
    "deriv_r",
    "integrate",
    "make_grid",
    "radial_laplacian",
    "QUARTIC",
    "ModelParams",
    "Profile",
    "QuarticPotential",
    "canonical_sigma",
    "initial_condition",
    "potential_eval",
    "profile_deriv",
    "profile_eval",
    "w_of_c",
    "JumpMeasurement",
    "PressureDecomposition",
    "decompose",
    "jump",
    "jump_extrapolate",
    "pressure_gradient",
    "SolverAbort",
    "SolverState",
    "StepConfig",
    "chemical_potential",
    "power_balance",
    "simulate",
    "step",
]
