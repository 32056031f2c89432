"""The classical phase wave exp(iS/hbar) and what it can(not) solve.

Writing the Hamilton principal function S = -Et + W(q) of a single-energy
motion into a unimodular wave X = exp(iS/hbar) gives an exact solution of a
*nonlinear* wave equation.  Two things are demonstrated:

 1. the defect of that equation on a grid is pure discretization error —
    in particular it does not move when hbar changes;
 2. a superposition of two such waves (different energies) is *not* a
    solution: the nonlinearity punishes it by orders of magnitude.
"""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wavemech.classical import (
    ActionFunction,
    analytic_time_derivative,
    classical_wave_residual,
    classical_wavefunction,
)
from wavemech.grids import ComplexField, Grid1D

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

grid = Grid1D(-0.75, 0.75, 2048)
potential = 0.5 * grid.x**2

# --- a single-energy phase wave ----------------------------------------
action = ActionFunction.harmonic_oscillator(energy=0.5)
print("oscillator action, E = 0.5: turning points at +/-", action.amplitude)

residuals = {}
for hbar in (0.5, 1.0, 2.0):
    x_wave = classical_wavefunction(action, grid, 0.0, hbar)
    dx_dt = analytic_time_derivative(action, grid, 0.0, hbar)
    residuals[hbar] = classical_wave_residual(x_wave, potential, hbar, 1.0, dx_dt)
    print(f"  hbar = {hbar}: peak residual {np.nanmax(residuals[hbar]):.3e}")
print("the three peaks coincide to within the grid error itself:")
print("hbar never entered the classical mechanics, only the bookkeeping.")

# --- a superposition of two energies -----------------------------------
other = ActionFunction.harmonic_oscillator(energy=1.5)
x1 = classical_wavefunction(action, grid, 0.0, 1.0)
x2 = classical_wavefunction(other, grid, 0.0, 1.0)
d1 = analytic_time_derivative(action, grid, 0.0, 1.0)
d2 = analytic_time_derivative(other, grid, 0.0, 1.0)
s = 1 / np.sqrt(2)
x_sum = ComplexField(grid, s * (x1.values + x2.values), time=0.0)
d_sum = ComplexField(grid, s * (d1.values + d2.values), time=0.0)
r_sum = classical_wave_residual(x_sum, potential, 1.0, 1.0, d_sum)

single_peak = np.nanmax(residuals[1.0])
print(f"\nsuperposition peak residual: {np.nanmax(r_sum):.3e}")
print(f"ratio to the single-energy defect: {np.nanmax(r_sum) / single_peak:.1e}")
print("the equation admits single energies only — no superposition principle.")

# --- picture -----------------------------------------------------------
fig, ax = plt.subplots(figsize=(7, 4))
ax.semilogy(grid.x, residuals[1.0], lw=0.7, label="single energy (grid error)")
ax.semilogy(grid.x, r_sum, lw=0.7, label="two-energy superposition")
ax.set_xlabel("q")
ax.set_ylabel("|residual|")
ax.set_title("nonlinear wave equation defect")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(OUT / "classical_phase_wave.png", dpi=120)
print(f"\nwrote {OUT / 'classical_phase_wave.png'}")
