"""Water-filling design walkthrough.

Builds the clutter-notch scene, designs the optimal transmit ESD for a
few energy budgets, and prints how the allocation spreads as the budget
grows. The notch in the clutter PSD at DC is where the design piles
energy first; only with larger budgets do the noisier band edges fill in.
"""

import numpy as np

from miwave import (
    Scenario,
    build_parametric_psd,
    design_mi,
    detection_metric,
    integrate,
    make_grid,
)

grid = make_grid(band_width=20.0, duration=1.0)
noise = build_parametric_psd("noise_valley", {"n_min": 0.05, "n_max": 1.0}, grid)
clutter = build_parametric_psd(
    "clutter_notch", {"level": 1.0, "notch_depth": 0.9, "notch_width": 3.0}, grid
)

print(f"grid: {grid.num_bins} bins at {grid.spacing:.3f} Hz spacing")
print(f"{'E':>6} {'lambda':>10} {'active bins':>12} {'d^2':>8}")
for energy in (0.5, 2.0, 4.0, 8.0):
    scenario = Scenario(noise, clutter, 1.0, energy)
    design = design_mi(scenario)
    d2 = detection_metric(design.esd, scenario)
    print(
        f"{energy:6.1f} {design.lagrange_lambda:10.4f} "
        f"{design.active_set.size:12d} {d2:8.4f}"
    )
    assert abs(integrate(design.esd) - energy) <= 1e-6 * energy

print("\nESD profile at E = 2 (normalized to its peak):")
scenario = Scenario(noise, clutter, 1.0, 2.0)
esd = design_mi(scenario).esd
peak = esd.values.max()
for f, v in zip(grid.bin_freqs, esd.values):
    bar = "#" * int(round(40 * v / peak))
    print(f"{f:+6.1f} Hz |{bar}")
