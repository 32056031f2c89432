"""Probability densities, observable fields, expectation values by two
routes, eigenvalue probability tables, and projective measurement sampling.

The two expectation routes — quadrature of psi* (A psi), and quadrature of
the pointwise ratio field (A psi)/psi against |psi|^2 — agree identically at
unmasked nodes, so their difference is exactly the probability carried by the
masked nodes.  `expectation_field` therefore reports that masked probability
alongside the value, and flags heavy masks instead of silently renormalizing.

Sampling uses one numpy PCG64 stream per call, fully determined by the seed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .grids import ComplexField, NumericalError, norm, trapezoid_weights
from .operators import (
    DEGENERACY_THRESHOLD,
    LinearOperatorSpec,
    degenerate_groups,
    expand,
)
from .quantum import SpectralDecomposition

__all__ = [
    "FIELD_FLOOR",
    "HEAVY_MASK_PROBABILITY",
    "ObservableField",
    "ProbabilityTable",
    "FieldExpectation",
    "MeasurementResult",
    "born_density",
    "observable_field",
    "expectation_operator",
    "expectation_field",
    "eigenvalue_probabilities",
    "measure_and_collapse",
    "sample_outcomes",
    "continuous_probability_density",
]

FIELD_FLOOR = 1e-6  # default amplitude floor for observable-field ratios
HEAVY_MASK_PROBABILITY = 1e-6


def _require_normalized(psi: ComplexField, tol: float = 1e-6) -> None:
    if abs(norm(psi) - 1.0) > tol:
        raise ValueError("state must be normalized")


def born_density(psi: ComplexField) -> np.ndarray:
    """Position probability density |psi|^2 of a normalized state."""
    _require_normalized(psi)
    return np.abs(psi.values) ** 2


@dataclass(frozen=True)
class ObservableField:
    """Pointwise value of an observable on a state: (A psi)/psi.

    ``masked`` marks nodes where |psi| fell below the amplitude floor and the
    ratio was not evaluated (values hold NaN there).  On an eigenstate the
    unmasked values are constant, equal to the eigenvalue.
    """

    grid: object
    values: np.ndarray
    masked: np.ndarray
    tag: str = ""

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=complex)
        masked = np.asarray(self.masked, dtype=bool)
        if values.shape != masked.shape or values.shape != (self.grid.n_points,):
            raise ValueError("field/mask shape does not match the grid")
        if not np.all(np.isfinite(values[~masked])):
            raise NumericalError("unmasked field values are not finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "masked", masked)


def observable_field(
    psi: ComplexField, op: LinearOperatorSpec, floor: float = FIELD_FLOOR
) -> ObservableField:
    """The ratio (A psi)/psi where |psi| >= floor * max|psi|; NaN elsewhere.

    The floor trades coverage against ratio conditioning: near-nodes of psi
    amplify the absolute error of A psi by 1/|psi|.  The default suits
    expectation work; pointwise eigenvalue checks want a larger floor.
    """
    if psi.grid != op.grid:
        raise ValueError("state and operator live on different grids")
    if floor <= 0:
        raise ValueError("floor must be positive")
    amp = np.abs(psi.values)
    keep = amp >= floor * amp.max()
    if not keep.any():
        raise ValueError("every node fell below the amplitude floor")
    applied = op.apply(psi.values)
    values = np.full(psi.grid.n_points, np.nan, dtype=complex)
    values[keep] = applied[keep] / psi.values[keep]
    return ObservableField(psi.grid, values, ~keep, tag=op.tag)


def expectation_operator(psi: ComplexField, op: LinearOperatorSpec) -> complex:
    """Quadrature of psi* (A psi); imaginary part is rounding for Hermitian A."""
    _require_normalized(psi)
    w = trapezoid_weights(psi.grid)
    return complex(np.sum(w * np.conj(psi.values) * op.apply(psi.values)))


class FieldExpectation(NamedTuple):
    value: complex
    masked_probability: float
    status: str  # "ok" or "heavy_mask"


def expectation_field(psi: ComplexField, field: ObservableField) -> FieldExpectation:
    """Quadrature of the observable field against the Born density, over the
    unmasked nodes, with the probability left on masked nodes reported."""
    _require_normalized(psi)
    if psi.grid != field.grid:
        raise ValueError("state and field live on different grids")
    w = trapezoid_weights(psi.grid)
    density = w * np.abs(psi.values) ** 2
    keep = ~field.masked
    value = complex(np.sum(field.values[keep] * density[keep]))
    masked_probability = float(density[~keep].sum())
    status = "ok" if masked_probability <= HEAVY_MASK_PROBABILITY else "heavy_mask"
    return FieldExpectation(value, masked_probability, status)


@dataclass(frozen=True)
class ProbabilityTable:
    """Outcome eigenvalues with probabilities, degeneracy-grouped.

    Discrete tables must sum to 1 within 1e-8.  With ``continuous`` set the
    probabilities are density samples on the outcome grid and must integrate
    to 1 within 1e-6 instead.
    """

    outcomes: np.ndarray
    probabilities: np.ndarray
    degeneracies: np.ndarray
    time: float | None = None
    continuous: bool = False

    def __post_init__(self) -> None:
        outcomes = np.asarray(self.outcomes, dtype=float)
        probabilities = np.asarray(self.probabilities, dtype=float)
        degeneracies = np.asarray(self.degeneracies, dtype=int)
        if not outcomes.shape == probabilities.shape == degeneracies.shape:
            raise ValueError("table columns must have matching shapes")
        if np.any(probabilities < -1e-12):
            raise ValueError("probabilities must be nonnegative")
        probabilities = np.clip(probabilities, 0.0, None)
        if self.continuous:
            total = float(np.trapezoid(probabilities, outcomes))
            if abs(total - 1.0) > 1e-6:
                raise NumericalError("probability density does not integrate to 1")
        else:
            total = float(probabilities.sum())
            if abs(total - 1.0) > 1e-8:
                raise NumericalError("probabilities do not sum to 1")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "probabilities", probabilities)
        object.__setattr__(self, "degeneracies", degeneracies)

    def __len__(self) -> int:
        return len(self.outcomes)

    def to_rows(self) -> list[tuple]:
        return [
            (o, p, int(g))
            for o, p, g in zip(self.outcomes, self.probabilities, self.degeneracies)
        ]


def eigenvalue_probabilities(
    psi: ComplexField,
    basis: SpectralDecomposition,
    threshold: float = DEGENERACY_THRESHOLD,
) -> ProbabilityTable:
    """Born probabilities |c_i|^2 of the basis eigenvalues, with eigenvalues
    closer than threshold * span merged into one degenerate outcome."""
    _require_normalized(psi, tol=1e-8)
    coeffs = expand(psi, basis)
    missing = 1.0 - coeffs.total_probability
    if missing > 1e-8:
        raise NumericalError(
            f"basis does not span the state ({missing:.3e} probability missing)"
        )
    groups = degenerate_groups(coeffs.labels, threshold)
    outcomes = np.array([coeffs.labels[g].mean() for g in groups])
    probabilities = np.array([coeffs.abs2[g].sum() for g in groups])
    degeneracies = np.array([len(g) for g in groups])
    return ProbabilityTable(outcomes, probabilities, degeneracies, time=psi.time)


def _group_cdf(table: ProbabilityTable) -> np.ndarray:
    cdf = np.cumsum(table.probabilities)
    cdf[-1] = 1.0  # guard the float tail so every draw lands in range
    return cdf


@dataclass(frozen=True)
class MeasurementResult:
    outcome: float
    post_state: ComplexField
    outcome_index: int


def measure_and_collapse(
    psi: ComplexField, basis: SpectralDecomposition, rng_seed: int
) -> MeasurementResult:
    """One projective measurement: sample an outcome from the Born table and
    project the state onto the outcome's full eigenspace (not an arbitrary
    member of it), renormalized.  Deterministic given the seed."""
    table = eigenvalue_probabilities(psi, basis)
    coeffs = expand(psi, basis)
    groups = degenerate_groups(coeffs.labels)
    rng = np.random.default_rng(rng_seed)
    draw = rng.random()
    index = int(np.searchsorted(_group_cdf(table), draw, side="right"))
    group = groups[index]
    projected = np.zeros(psi.grid.n_points, dtype=complex)
    for j in group:
        projected += coeffs.values[j] * basis.eigenfunctions[j].values
    post = ComplexField(psi.grid, projected, time=psi.time)
    amplitude = norm(post)
    if amplitude < 1e-12:
        raise NumericalError("collapse onto a zero-probability eigenspace")
    post = (1.0 / amplitude) * post
    return MeasurementResult(float(table.outcomes[index]), post, index)


def sample_outcomes(
    psi: ComplexField, basis: SpectralDecomposition, n_trials: int, rng_seed: int
) -> tuple[ProbabilityTable, np.ndarray]:
    """Counts of n_trials independent measurements drawn from one seeded
    stream by inverse-CDF lookup; returns (table, counts aligned to it)."""
    if n_trials < 1:
        raise ValueError("n_trials must be positive")
    table = eigenvalue_probabilities(psi, basis)
    rng = np.random.default_rng(rng_seed)
    draws = rng.random(n_trials)
    indices = np.searchsorted(_group_cdf(table), draws, side="right")
    counts = np.bincount(indices, minlength=len(table))
    return table, counts


def continuous_probability_density(
    psi: ComplexField, p_grid: np.ndarray, hbar: float = 1.0
) -> ProbabilityTable:
    """Momentum-outcome probability density rho(p) = |c(p)|^2 on p_grid."""
    from .operators import continuum_momentum_density

    _require_normalized(psi)
    coeffs = continuum_momentum_density(psi, p_grid, hbar)
    rho = coeffs.abs2
    return ProbabilityTable(
        coeffs.labels,
        rho,
        np.ones(len(coeffs), dtype=int),
        time=psi.time,
        continuous=True,
    )
