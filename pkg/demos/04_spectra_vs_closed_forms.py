"""Discrete spectra of the particle-in-a-box and the oscillator.

The three-point Hamiltonian on ~2000 nodes reproduces the closed-form
levels n^2 pi^2 hbar^2 / (2 m L^2) and (n + 1/2) hbar w to a few parts in
1e5, and the eigenfunctions carry the expected node counts.  The error per
level grows like (k dx)^2 — visible in the table's last column.
"""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wavemech.io import write_csv
from wavemech.quantum import PotentialSpec, build_hamiltonian, eigensolve, harmonic_grid
from wavemech.grids import Grid1D

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

hbar = mass = 1.0

# --- box ---------------------------------------------------------------
box_grid = Grid1D(0.0, 1.0, 2048)
box = eigensolve(build_hamiltonian(PotentialSpec("box", box_grid), hbar, mass), 10)
n = np.arange(1, 11)
exact_box = n**2 * np.pi**2 / 2.0

print("box of unit width")
print(" n    E (grid)       E (exact)      rel. error")
for j in range(10):
    rel = box.eigenvalues[j] / exact_box[j] - 1
    print(f"{n[j]:2d}   {box.eigenvalues[j]:12.6f}   {exact_box[j]:12.6f}   {rel:+.2e}")

# --- oscillator --------------------------------------------------------
osc_grid = harmonic_grid(n_points=2048)
osc = eigensolve(build_hamiltonian(PotentialSpec("harmonic", osc_grid), hbar, mass), 10)
exact_osc = np.arange(10) + 0.5

print("\nharmonic oscillator")
print(" n    E (grid)       E (exact)      rel. error")
for j in range(10):
    rel = osc.eigenvalues[j] / exact_osc[j] - 1
    print(f"{j:2d}   {osc.eigenvalues[j]:12.6f}   {exact_osc[j]:12.6f}   {rel:+.2e}")

write_csv(
    OUT / "box_spectrum.csv",
    ("n", "energy_grid", "energy_exact"),
    [(int(n[j]), box.eigenvalues[j], exact_box[j]) for j in range(10)],
)
write_csv(
    OUT / "oscillator_spectrum.csv",
    ("n", "energy_grid", "energy_exact"),
    [(j, osc.eigenvalues[j], exact_osc[j]) for j in range(10)],
)

fig, ax = plt.subplots(figsize=(7, 4))
for j in range(4):
    f = osc.eigenfunctions[j]
    ax.plot(osc_grid.x, f.values.real + j, lw=0.8, label=f"n = {j} (+offset)")
ax.set_xlim(-6, 6)
ax.set_xlabel("x")
ax.set_title("lowest oscillator eigenfunctions, offset by level")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(OUT / "spectra.png", dpi=120)
print(f"\nwrote {OUT / 'box_spectrum.csv'}, {OUT / 'oscillator_spectrum.csv'},")
print(f"and {OUT / 'spectra.png'}")
