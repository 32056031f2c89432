"""Two-component spinor dynamics: Larmor precession and Rabi flopping.

A uniform spinor polarized along +x precesses about a z-directed magnetic
field at the rate g e B / (2 m c) — note there is no hbar in that rate: the
moment carries one factor and the phase evolution divides it out again.
Tipping the field into the x direction instead makes the z-polarized
populations flop at the same rate (resonant Rabi oscillation).
"""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wavemech.grids import Grid1D
from wavemech.pauli import (
    EMFieldConfig,
    pauli_propagate,
    spin_magnetic_moment,
    uniform_spinor,
)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

hbar = mass = 1.0
grid = Grid1D(0.0, 1.0, 32, boundary="periodic")
moment = spin_magnetic_moment(2.0, 1.0, hbar, 1.0, 1.0)
rate = 2 * moment / hbar  # g e B / (2 m c) for B = 1
period = 2 * np.pi / rate
print(f"magnetic moment: {moment}, precession rate: {rate}")

# --- Larmor: B along z, spin along +x ----------------------------------
z_field = EMFieldConfig(np.array([0.0, 0.0, 1.0]), moment, g_factor=2.0)
spinor = uniform_spinor(grid, 1.0, 1.0)
_, larmor = pauli_propagate(spinor, z_field, hbar, mass, period / 256, 512)
sx_err = np.abs(larmor.sx - np.cos(rate * larmor.times)).max()
print(f"Larmor: worst |<sigma_x> - cos(rate t)| over two periods: {sx_err:.2e}")
print(f"        worst norm deviation: {np.abs(larmor.norms - 1).max():.2e}")

# --- Rabi: B along x, spin along +z ------------------------------------
x_field = EMFieldConfig(np.array([1.0, 0.0, 0.0]), moment, g_factor=2.0)
up = uniform_spinor(grid, 1.0, 0.0)
_, rabi = pauli_propagate(up, x_field, hbar, mass, period / 256, 512)
flop_err = np.abs(rabi.pop_minus - np.sin(rate * rabi.times / 2) ** 2).max()
print(f"Rabi:   worst |pop_down - sin^2(rate t / 2)|: {flop_err:.2e}")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
ax1.plot(larmor.times, larmor.sx, label="<sigma_x>")
ax1.plot(larmor.times, larmor.sy, label="<sigma_y>")
ax1.plot(larmor.times, larmor.sz, label="<sigma_z>")
ax1.set_xlabel("t")
ax1.set_title("Larmor precession about z")
ax1.legend(fontsize=8)

ax2.plot(rabi.times, rabi.pop_plus, label="population up")
ax2.plot(rabi.times, rabi.pop_minus, label="population down")
ax2.set_xlabel("t")
ax2.set_title("Rabi flopping, resonant drive")
ax2.legend(fontsize=8)

fig.tight_layout()
fig.savefig(OUT / "spin_precession.png", dpi=120)
print(f"wrote {OUT / 'spin_precession.png'}")
