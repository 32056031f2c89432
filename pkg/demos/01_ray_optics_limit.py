"""How ray optics falls out of wave optics when the wavelength shrinks.

A scalar wave marching through a gradient-index slab (n = 1 + 0.1 x) is
compared against the ray-optics answer: the optical path Lambda(x), the
integral of n along the ray.  At finite wavelength the complex logarithm of
the marched field deviates from Lambda; the deviation shrinks linearly with
the reduced wavelength, which is the whole content of the ray limit.
"""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wavemech.grids import Grid1D
from wavemech.optics import (
    RefractiveProfile,
    eikonal_integrate,
    eikonal_limit_study,
    helmholtz_solve,
    optical_path_from_field,
)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

# --- the medium and the ray answer -------------------------------------
profile = RefractiveProfile.linear(1.0, 0.1)
grid = Grid1D(0.0, 1.0, 8193)
ray = eikonal_integrate(profile, grid)
print("ray optical path at the far wall:", ray.path[-1])
print("  (for n = 1 + 0.1 x this is exactly 1 + 0.05 = 1.05)")

# --- march the wave at a few wavelengths -------------------------------
# The launch is a right-going wave: u(0) = 1, u'(0) = i n(0)/lambda_bar.
lambda_bars = np.array([0.1, 0.05, 0.025, 0.0125])
study = eikonal_limit_study(profile, lambda_bars, grid)

print("\nlambda_bar   max |wave path - ray path|")
for lb, err in zip(study.lambda_bars, study.max_phase_errors):
    print(f"  {lb:8.4f}   {err:.6e}")
order = np.polyfit(np.log(study.lambda_bars), np.log(study.max_phase_errors), 1)[0]
print(f"fitted convergence order: {order:.3f}  (expect ~1: the error is the")
print("neglected wave term, proportional to the wavelength)")

# --- pictures ----------------------------------------------------------
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))

u = helmholtz_solve(profile, 0.05, grid, 1.0, 1j * profile(grid.x)[0] / 0.05)
wave_path = optical_path_from_field(u, 0.05)
ax1.plot(grid.x, u.values.real, lw=0.6, label="Re u (lambda_bar = 0.05)")
ax1.plot(grid.x, np.abs(u.values), "k--", lw=1.0, label="|u|")
ax1.set_xlabel("x")
ax1.legend(loc="lower left", fontsize=8)
ax1.set_title("the marched wave")

ax2.loglog(study.lambda_bars, study.max_phase_errors, "o-")
ax2.set_xlabel("reduced wavelength")
ax2.set_ylabel("max path error")
ax2.set_title(f"ray limit, order {order:.2f}")

fig.tight_layout()
fig.savefig(OUT / "ray_optics_limit.png", dpi=120)
print(f"\nwrote {OUT / 'ray_optics_limit.png'}")
print("wave path real part at far wall:", wave_path.real[-1].round(6))
