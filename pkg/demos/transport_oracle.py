"""Zero-mobility runs against the characteristic solution.

Prints the interface radius and L2 error at a few times, then repeats the
final-time comparison with h and dt halved twice.
"""
from radial_phasefield import ModelParams, Profile, deviation, interface_state, locate_interface
from radial_phasefield import make_grid, simulate, transport_solution
from radial_phasefield.solver import StepConfig

params = ModelParams(eps=0.1)
prof = Profile()
times = [0.0, 1.0, 2.0, 3.0]

print(f"{'cells':>6} {'t':>4} {'R exact':>9} {'R found':>9} {'L2 error':>10}")
for cells in (400, 800, 1600):
    grid = make_grid(1.0, params.M, cells, params.n_dim)
    snaps = simulate(params, prof, grid, StepConfig(dt=grid.h), times[-1], times)
    for s in snaps if cells == 400 else snaps[-1:]:
        oracle = grid.field(transport_solution(grid.r, s.t, params, prof))
        l2, _ = deviation(s.c, oracle, params)
        print(f"{cells:6d} {s.t:4.1f} {interface_state(s.t, params).R:9.5f} "
              f"{locate_interface(s.c):9.5f} {l2:10.3e}")
