"""Born-rule statistics, collapse, and the two expectation routes.

A state weighted 30/70 over the two lowest oscillator levels is measured
100000 times: the counts land inside the binomial 3-sigma band.  One
projective measurement collapses the state onto the observed eigenspace —
after which every re-measurement returns the same outcome.  Along the way
the expectation value of the energy is computed twice: as a matrix element
and as the eigenvalue field integrated against the Born density; the two
routes agree to rounding.
"""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wavemech.grids import ComplexField, normalize
from wavemech.measurement import (
    eigenvalue_probabilities,
    expectation_field,
    expectation_operator,
    measure_and_collapse,
    observable_field,
    sample_outcomes,
)
from wavemech.operators import hamiltonian_operator
from wavemech.quantum import PotentialSpec, build_hamiltonian, eigensolve, harmonic_grid

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

grid = harmonic_grid(n_points=1024)
pot = PotentialSpec("harmonic", grid)
dec = eigensolve(build_hamiltonian(pot, 1.0, 1.0), 2)
psi = normalize(
    ComplexField(
        grid,
        np.sqrt(0.3) * dec.eigenfunctions[0].values
        + np.sqrt(0.7) * dec.eigenfunctions[1].values,
    )
)

# --- two routes to one number ------------------------------------------
energy_op = hamiltonian_operator(grid, pot.samples(1.0))
via_operator = expectation_operator(psi, energy_op)
via_field = expectation_field(psi, observable_field(psi, energy_op, floor=1e-6))
print(f"<H> as a matrix element:      {via_operator.real:.12f}")
print(f"<H> as field x Born density:  {via_field.value.real:.12f}")
print(f"probability left on masked nodes: {via_field.masked_probability:.1e}")
print("  (0.3 * 0.5 + 0.7 * 1.5 = 1.2, up to the grid's level shifts)\n")

# --- sampling ----------------------------------------------------------
n_trials = 100_000
table, counts = sample_outcomes(psi, dec, n_trials, 42)
print("outcome   probability   count     3-sigma band")
for outcome, p, count in zip(table.outcomes, table.probabilities, counts):
    sigma = np.sqrt(n_trials * p * (1 - p))
    lo, hi = n_trials * p - 3 * sigma, n_trials * p + 3 * sigma
    print(f"{outcome:7.4f}   {p:11.6f}   {count:6d}    [{lo:8.1f}, {hi:8.1f}]")

# --- collapse ----------------------------------------------------------
first = measure_and_collapse(psi, dec, 7)
print(f"\nfirst measurement (seed 7): outcome {first.outcome:.6f}")
post = eigenvalue_probabilities(first.post_state, dec)
print(f"post-state probability on that outcome: {post.probabilities[first.outcome_index]:.12f}")
repeats = [measure_and_collapse(first.post_state, dec, s).outcome_index for s in range(30)]
print(f"re-measurements agreeing over 30 fresh seeds: {repeats.count(first.outcome_index)}/30")

fig, ax = plt.subplots(figsize=(6, 4))
ax.bar(table.outcomes, counts / n_trials, width=0.25, label="sampled frequency")
ax.plot(table.outcomes, table.probabilities, "k_", markersize=30, label="Born weight")
ax.set_xlabel("energy outcome")
ax.set_ylabel("frequency")
ax.set_title(f"{n_trials} measurements of a 30/70 state")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(OUT / "measurement_statistics.png", dpi=120)
print(f"\nwrote {OUT / 'measurement_statistics.png'}")
