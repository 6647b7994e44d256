"""Pressure jump across a transported, unrelaxed layer.

For each time the jump is measured on exact transported profiles at three
eps values and extrapolated to eps -> 0. Its ratio to sigma (n-1)/R is set
against kappa = (R/r0)^(2n-2) and against the layer stretch (R/r0)^(n-1).
"""
from radial_phasefield import ModelParams, Profile, decompose, interface_state, jump
from radial_phasefield import jump_extrapolate, make_grid, transport_solution
from radial_phasefield import transport_solution_deriv, young_laplace_jump
from radial_phasefield.analytic import layer_stretch

prof = Profile()
base = ModelParams()
eps_list = (0.05, 0.025, 0.0125)

print(f"{'t':>4} {'p1 ratio':>9} {'total ratio':>12} {'stretch':>8} {'kappa':>6}")
for t in (0.0, 1.0, 2.0, 3.0):
    p1, total = [], []
    for eps in eps_list:
        p = base.replace(eps=eps)
        g = make_grid(1.0, p.M, int(round(40 * (p.M - 1) / eps)), p.n_dim)
        c = g.field(transport_solution(g.r, t, p, prof))
        dc = g.field(transport_solution_deriv(g.r, t, p, prof))
        m = jump(decompose(c, p, dc), interface_state(t, p).R, 0.25, t)
        p1.append(-m.p1)
        total.append(-m.value)
    yl = young_laplace_jump(t, base, prof.sigma_profile)
    st = interface_state(t, base)
    print(f"{t:4.1f} {jump_extrapolate(p1, eps_list).value / yl:9.4f} "
          f"{jump_extrapolate(total, eps_list).value / yl:12.4f} "
          f"{layer_stretch(t, base):8.4f} {st.kappa:6.3f}")
