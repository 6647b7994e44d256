"""Deviation from pure transport as the mobility exponent varies.

Runs the sweep in configs/mobility_sweep.json and prints, per alpha, the
fitted eps-exponents of the time-integrated weighted H1 deviation and of
the positive discrepancy.
"""
from pathlib import Path

from radial_phasefield.harness import load_config, run_sweep

cfg = load_config(Path(__file__).parent / "configs" / "mobility_sweep.json")
result = run_sweep(cfg)
for fail in result.failures:
    print("failed:", fail)
for fit in result.fits:
    if fit["kind"].startswith("scaling:"):
        vals = ", ".join(f"{v:.3e}" for v in fit["values"])
        print(f"alpha={fit['alpha']:<4} {fit['kind'][8:]:<36} slope {fit['slope']:7.3f}  [{vals}]")
print(f"{len(result.runs)} runs in {result.wall_clock:.1f} s")
