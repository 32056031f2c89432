"""Operator hygiene and basis expansions.

Three things every observable must survive:

 1. a Hermiticity audit against random trial states (with a deliberately
    non-Hermitian control, the bare gradient, to prove the audit can fail);
 2. expansion of a state over an orthonormal eigenbasis, with coefficients
    matching the closed-form Fourier integrals for a Gaussian;
 3. a completeness check: the truncated reproducing kernel converges to a
    delta as the basis grows, and the reproduction error falls monotonically.
"""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wavemech.grids import ComplexField, Grid1D, make_state, norm, normalize
from wavemech.operators import (
    centered_subset,
    expand,
    gradient_operator,
    hamiltonian_operator,
    hermiticity_check,
    kernel_apply,
    momentum_basis,
    momentum_operator,
    position_operator,
)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

# --- 1. Hermiticity audit ----------------------------------------------
grid = Grid1D(0.0, 1.0, 257)
table = [
    ("momentum", momentum_operator(grid)),
    ("energy", hamiltonian_operator(grid, grid.x**2)),
    ("position", position_operator(grid)),
    ("gradient (control)", gradient_operator(grid)),
]
print("Hermiticity defect over 50 random trial pairs")
for name, op in table:
    print(f"  {name:20s} {hermiticity_check(op, 50, 0):.3e}")
print("the control sits ~16 orders above the real observables.\n")

# --- 2. Gaussian over plane waves --------------------------------------
ring = Grid1D(0.0, 2 * np.pi, 512, boundary="periodic")
basis = momentum_basis(ring, 24)
sigma, center = 0.35, np.pi
psi = make_state(ring, np.exp(-0.5 * ((ring.x - center) / sigma) ** 2))
coeffs = expand(psi, basis)

# closed form: the Fourier coefficient of a narrow Gaussian on the ring
k = np.array(basis.eigenvalues)
length = ring.length
analytic = (
    (4 * np.pi * sigma**2) ** 0.25
    / np.sqrt(length)
    * np.exp(-(k**2) * sigma**2 / 2)
    * np.exp(-1j * k * center)
)
worst = np.abs(coeffs.values - analytic).max()
print(f"Gaussian expansion: worst |c_k - closed form| = {worst:.2e}")
print(f"total probability captured: {coeffs.total_probability:.12f}\n")

# --- 3. completeness by truncation -------------------------------------
target_values = np.exp(np.sin(ring.x)) + 0.1 / (1.2 - np.cos(ring.x))
target = normalize(ComplexField(ring, target_values.astype(complex)))
sizes = (5, 9, 17, 33)
errors = []
for size in sizes:
    reproduced = kernel_apply(centered_subset(basis, size), target)
    errors.append(norm(ComplexField(ring, target.values - reproduced.values)))
print("kernel truncation:  N     ||f - K_N f||")
for size, err in zip(sizes, errors):
    print(f"                   {size:3d}    {err:.3e}")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
ax1.stem(k, coeffs.abs2, basefmt=" ", markerfmt=".")
ax1.plot(k, np.abs(analytic) ** 2, "k--", lw=0.8, label="closed form")
ax1.set_xlabel("momentum label")
ax1.set_ylabel("|c_k|^2")
ax1.set_title("Gaussian momentum content")
ax1.legend(fontsize=8)

ax2.semilogy(sizes, errors, "o-")
ax2.set_xlabel("basis size N")
ax2.set_ylabel("reproduction error")
ax2.set_title("completeness, one subset at a time")

fig.tight_layout()
fig.savefig(OUT / "operators_and_expansions.png", dpi=120)
print(f"\nwrote {OUT / 'operators_and_expansions.png'}")
