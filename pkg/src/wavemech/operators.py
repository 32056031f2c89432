"""Linear operators on grid fields: momentum/position/Hamiltonian actions,
Hermiticity testing with seeded trial functions, Gram-Schmidt, basis
expansions with degeneracy grouping, completeness kernels, discrete position
eigenfunctions, and the continuum momentum amplitude.

Discrete Hermiticity here is exact in the quadrature inner product, not just
small: the centered first difference is anti-symmetric on trials vanishing at
dirichlet walls, the spectral derivative is skew-Hermitian on periodic grids,
and the Hamiltonian stencil is symmetric.  The deliberately non-Hermitian
control (plain d/dx without the -i*hbar factor) is provided as a negative
control for the same test harness.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grids import (
    ComplexField,
    Grid1D,
    NumericalError,
    derivative,
    inner_product,
    norm,
    trapezoid_weights,
)
from .quantum import Hamiltonian1D, SpectralDecomposition

__all__ = [
    "LinearOperatorSpec",
    "ExpansionCoefficients",
    "momentum_operator",
    "position_operator",
    "hamiltonian_operator",
    "gradient_operator",
    "matrix_operator",
    "momentum_eigenfunction_box",
    "momentum_basis",
    "centered_subset",
    "hermiticity_check",
    "hermiticity_residuals",
    "gram_schmidt",
    "expand",
    "reconstruct",
    "completeness_kernel",
    "kernel_apply",
    "position_eigenfunction",
    "continuum_momentum_density",
    "degenerate_groups",
    "DEGENERACY_THRESHOLD",
]

DEGENERACY_THRESHOLD = 1e-6  # relative to the eigenvalue span


@dataclass(frozen=True)
class LinearOperatorSpec:
    """An operator acting on grid samples.

    Kinds: ``momentum`` (-i hbar d/dx), ``position`` (multiply by x),
    ``hamiltonian`` (3-point kinetic + potential), ``custom_matrix``
    (explicit square matrix), and ``gradient`` (plain d/dx; intentionally
    not Hermitian, kept as the negative control for hermiticity tests).
    """

    kind: str
    grid: Grid1D
    hbar: float = 1.0
    mass: float = 1.0
    potential: np.ndarray | None = None
    matrix: np.ndarray | None = None
    scheme: str | None = None

    def __post_init__(self) -> None:
        kinds = ("momentum", "hamiltonian", "position", "custom_matrix", "gradient")
        if self.kind not in kinds:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.hbar <= 0 or self.mass <= 0:
            raise ValueError("hbar and mass must be positive")
        if self.kind == "hamiltonian":
            if self.potential is None:
                raise ValueError("hamiltonian operator needs potential samples")
            potential = np.asarray(self.potential, dtype=float)
            if potential.shape != (self.grid.n_points,):
                raise ValueError("potential sample count does not match the grid")
            object.__setattr__(self, "potential", potential)
        if self.kind == "custom_matrix":
            if self.matrix is None:
                raise ValueError("custom_matrix operator needs a matrix")
            matrix = np.asarray(self.matrix, dtype=complex)
            n = self.grid.n_points
            if matrix.shape != (n, n):
                raise ValueError("custom matrix must be square of size n_points")
            object.__setattr__(self, "matrix", matrix)
        if self.scheme is None:
            auto = "spectral" if self.grid.boundary == "periodic" else "central_fd"
            object.__setattr__(self, "scheme", auto)

    @property
    def tag(self) -> str:
        return self.kind

    def apply(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=complex)
        if self.kind == "position":
            return self.grid.x * values
        if self.kind in ("momentum", "gradient"):
            grad = derivative(ComplexField(self.grid, values), 1, scheme=self.scheme).values
            if self.kind == "gradient":
                return grad
            return -1j * self.hbar * grad
        if self.kind == "hamiltonian":
            h = Hamiltonian1D(self.grid, self.potential, self.hbar, self.mass)
            return h.apply(values)
        return self.matrix @ values

    def apply_field(self, f: ComplexField) -> ComplexField:
        if f.grid != self.grid:
            raise ValueError("field lives on a different grid")
        return ComplexField(self.grid, self.apply(f.values), f.time)


def momentum_operator(grid: Grid1D, hbar: float = 1.0, scheme: str | None = None) -> LinearOperatorSpec:
    return LinearOperatorSpec("momentum", grid, hbar=hbar, scheme=scheme)


def position_operator(grid: Grid1D) -> LinearOperatorSpec:
    return LinearOperatorSpec("position", grid)


def hamiltonian_operator(
    grid: Grid1D, potential: np.ndarray, hbar: float = 1.0, mass: float = 1.0
) -> LinearOperatorSpec:
    return LinearOperatorSpec("hamiltonian", grid, hbar=hbar, mass=mass, potential=potential)


def gradient_operator(grid: Grid1D, scheme: str | None = None) -> LinearOperatorSpec:
    return LinearOperatorSpec("gradient", grid, scheme=scheme)


def matrix_operator(grid: Grid1D, matrix: np.ndarray) -> LinearOperatorSpec:
    return LinearOperatorSpec("custom_matrix", grid, matrix=matrix)


def momentum_eigenfunction_box(i: int, length: float, grid: Grid1D, hbar: float = 1.0) -> ComplexField:
    """Normalized plane wave exp(i p_i x / hbar)/sqrt(L) with p_i = 2 pi hbar i / L."""
    if grid.boundary != "periodic":
        raise ValueError("plane-wave eigenfunctions need a periodic grid")
    if abs(grid.length - length) > 1e-12 * max(1.0, abs(length)):
        raise ValueError("grid length does not match the requested box length")
    phase = 2 * np.pi * i * grid.x / length
    values = np.exp(1j * phase) / np.sqrt(length)
    return ComplexField(grid, values)


def momentum_labels(i_max: int, length: float, hbar: float = 1.0) -> np.ndarray:
    indices = np.arange(-i_max, i_max + 1)
    return 2 * np.pi * hbar * indices / length


def momentum_basis(grid: Grid1D, i_max: int, hbar: float = 1.0) -> SpectralDecomposition:
    """Plane waves for indices -i_max..i_max, labeled by momentum, ascending."""
    if i_max < 0:
        raise ValueError("i_max must be >= 0")
    if 2 * i_max + 1 > grid.n_points // 2:
        raise ValueError("too many modes for this grid (aliasing)")
    length = grid.length
    fields = tuple(
        momentum_eigenfunction_box(i, length, grid, hbar)
        for i in range(-i_max, i_max + 1)
    )
    return SpectralDecomposition(momentum_labels(i_max, length, hbar), fields, "periodic")


def centered_subset(basis: SpectralDecomposition, n: int) -> SpectralDecomposition:
    """The n members with the smallest |eigenvalue| (deterministic tie-break
    toward the negative label), re-sorted ascending.  Subsets for growing n
    are nested, which is what makes truncation-error comparisons monotone."""
    if n < 1 or n > len(basis):
        raise ValueError("subset size out of range")
    order = sorted(range(len(basis)), key=lambda j: (abs(basis.eigenvalues[j]), basis.eigenvalues[j]))
    keep = sorted(order[:n], key=lambda j: basis.eigenvalues[j])
    return SpectralDecomposition(
        basis.eigenvalues[keep],
        tuple(basis.eigenfunctions[j] for j in keep),
        basis.boundary,
    )


def _random_trial(grid: Grid1D, rng: np.random.Generator) -> ComplexField:
    """Smooth band-limited trial respecting the boundary class: a seeded
    combination of the 10 lowest sine modes (vanishing at dirichlet walls)
    or of plane waves |k| <= 5 (periodic).  Degenerate draws are redrawn."""
    x = grid.x
    while True:
        if grid.boundary == "dirichlet":
            span = grid.x_max - grid.x_min
            coeff = rng.standard_normal(10) + 1j * rng.standard_normal(10)
            modes = np.sin(np.outer(np.arange(1, 11), np.pi * (x - grid.x_min) / span))
            values = coeff @ modes
        else:
            ks = np.arange(-5, 6)
            coeff = rng.standard_normal(ks.size) + 1j * rng.standard_normal(ks.size)
            modes = np.exp(2j * np.pi * np.outer(ks, x) / grid.length)
            values = coeff @ modes
        f = ComplexField(grid, values)
        if norm(f) > 1e-12:
            return f


def hermiticity_residuals(
    op: LinearOperatorSpec, n_trials: int, rng_seed: int
) -> np.ndarray:
    """Normalized Hermiticity defect |<f, Lg> - <Lf, g>| / (|f| |g| |L|_est)
    for each seeded trial pair; the operator scale |L|_est is estimated from
    the trials themselves so results are comparable across operators."""
    if n_trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(rng_seed)
    grid = op.grid
    out = np.empty(n_trials)
    for t in range(n_trials):
        f = _random_trial(grid, rng)
        g = _random_trial(grid, rng)
        lf = op.apply_field(f)
        lg = op.apply_field(g)
        scale = max(norm(lf) / norm(f), norm(lg) / norm(g), 1e-300)
        defect = abs(inner_product(f, lg) - inner_product(lf, g))
        out[t] = defect / (norm(f) * norm(g) * scale)
    return out


def hermiticity_check(op: LinearOperatorSpec, n_trials: int, rng_seed: int) -> float:
    """Max normalized Hermiticity defect over the seeded trials."""
    return float(hermiticity_residuals(op, n_trials, rng_seed).max())


def gram_schmidt(fields: Sequence[ComplexField], rank_tol: float = 1e-10) -> list[ComplexField]:
    """Two-pass modified Gram-Schmidt in the quadrature inner product."""
    if not fields:
        return []
    grid = fields[0].grid
    out: list[ComplexField] = []
    for index, f in enumerate(fields):
        if f.grid != grid:
            raise ValueError("all fields must share one grid")
        original = norm(f)
        if original == 0:
            raise ValueError(f"field {index} is zero")
        current = f
        for _ in range(2):  # second pass scrubs rounding left by the first
            for q in out:
                current = current - inner_product(q, current) * q
        remaining = norm(current)
        if remaining < rank_tol * original:
            raise ValueError(f"field {index} is linearly dependent on its predecessors")
        out.append((1.0 / remaining) * current)
    return out


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Coefficients c_i against labeled basis members, or density samples
    c(label) when ``continuous`` is set (then labels are quadrature nodes)."""

    labels: np.ndarray
    values: np.ndarray
    continuous: bool = False

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if labels.shape != values.shape or labels.ndim != 1:
            raise ValueError("labels and values must be matching 1-D arrays")
        if not (np.all(np.isfinite(labels)) and np.all(np.isfinite(values))):
            raise NumericalError("expansion coefficients are not finite")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def abs2(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    @property
    def total_probability(self) -> float:
        """Sum of |c|^2 (discrete) or its trapezoid integral (continuous)."""
        if self.continuous:
            return float(np.trapezoid(self.abs2, self.labels))
        return float(self.abs2.sum())

    def groups(self, threshold: float = DEGENERACY_THRESHOLD) -> tuple[np.ndarray, ...]:
        return degenerate_groups(self.labels, threshold)

    def to_rows(self) -> list[tuple]:
        return [
            (label, c.real, c.imag, abs(c) ** 2)
            for label, c in zip(self.labels, self.values)
        ]


def degenerate_groups(labels: np.ndarray, threshold: float = DEGENERACY_THRESHOLD) -> tuple[np.ndarray, ...]:
    """Indices of labels grouped as one degenerate level: ascending labels
    whose gaps are below threshold * (label span) merge."""
    labels = np.asarray(labels, dtype=float)
    if labels.ndim != 1 or labels.size == 0:
        raise ValueError("labels must be a non-empty 1-D array")
    if np.any(np.diff(labels) < 0):
        raise ValueError("labels must be ascending")
    span = float(labels[-1] - labels[0])
    if span == 0:
        return (np.arange(labels.size),)
    cut = np.flatnonzero(np.diff(labels) > threshold * span) + 1
    return tuple(np.split(np.arange(labels.size), cut))


def _basis_fields(basis) -> tuple[np.ndarray, tuple[ComplexField, ...]]:
    if isinstance(basis, SpectralDecomposition):
        return basis.eigenvalues, basis.eigenfunctions
    fields = tuple(basis)
    if not fields:
        raise ValueError("basis is empty")
    return np.arange(len(fields), dtype=float), fields


def _stack(fields: tuple[ComplexField, ...], grid: Grid1D) -> np.ndarray:
    for f in fields:
        if f.grid != grid:
            raise ValueError("basis fields live on a different grid")
    return np.stack([f.values for f in fields])


def expand(state: ComplexField, basis, check_orthonormal: bool = True) -> ExpansionCoefficients:
    """Quadrature coefficients c_i = <y_i, state> against an orthonormal basis.

    With ``check_orthonormal`` the Gram matrix is verified against the
    identity to 1e-8 first (skip for very large bases where the state test
    itself establishes orthonormality, e.g. the full position basis).
    """
    labels, fields = _basis_fields(basis)
    grid = state.grid
    stacked = _stack(fields, grid)
    w = trapezoid_weights(grid)
    weighted = stacked * w
    if check_orthonormal:
        gram = weighted @ stacked.conj().T
        if np.abs(gram - np.eye(len(fields))).max() > 1e-8:
            raise ValueError("basis is not orthonormal at the grid scale")
    coeffs = weighted.conj() @ state.values
    result = ExpansionCoefficients(labels, coeffs)
    if abs(norm(state) - 1.0) < 1e-6 and result.total_probability > 1.0 + 1e-8:
        raise NumericalError("coefficient power exceeds the state norm")
    return result


def reconstruct(coeffs: ExpansionCoefficients, basis) -> ComplexField:
    """Sum c_i y_i back into a field on the basis grid."""
    labels, fields = _basis_fields(basis)
    if len(labels) != len(coeffs):
        raise ValueError("coefficient/basis size mismatch")
    grid = fields[0].grid
    stacked = _stack(fields, grid)
    return ComplexField(grid, coeffs.values @ stacked)


def completeness_kernel(basis, x_prime: float) -> ComplexField:
    """Partial closure sum K_N(x, x') = sum_i y_i(x) y_i*(x') at a node x'."""
    _, fields = _basis_fields(basis)
    grid = fields[0].grid
    j = grid.index_of(x_prime)
    stacked = _stack(fields, grid)
    values = np.einsum("ix,i->x", stacked, stacked[:, j].conj())
    return ComplexField(grid, values)


def kernel_apply(basis, f: ComplexField) -> ComplexField:
    """Quadrature of the kernel against f: the projection sum_i y_i <y_i, f>."""
    coeffs = expand(f, basis, check_orthonormal=False)
    return reconstruct(coeffs, basis)


def position_eigenfunction(x_prime: float, grid: Grid1D) -> ComplexField:
    """Discrete delta: 1/dx at the node x', zero elsewhere.

    Restricted to interior nodes on dirichlet grids: the half trapezoid
    weight at a wall would break the sifting identity <w_x', f> = f(x').
    """
    j = grid.index_of(x_prime)
    if grid.boundary == "dirichlet" and j in (0, grid.n_points - 1):
        raise ValueError("position eigenfunction must sit on an interior node")
    values = np.zeros(grid.n_points, dtype=complex)
    values[j] = 1.0 / grid.dx
    return ComplexField(grid, values)


def continuum_momentum_density(
    state: ComplexField, p_grid: np.ndarray, hbar: float = 1.0
) -> ExpansionCoefficients:
    """Momentum amplitude c(p) = (2 pi hbar)^(-1/2) * integral of
    psi(x) exp(-i p x / hbar) dx, sampled on p_grid by quadrature."""
    p_grid = np.asarray(p_grid, dtype=float)
    if p_grid.ndim != 1 or p_grid.size < 2:
        raise ValueError("p_grid must be a 1-D array of at least two samples")
    if np.any(np.diff(p_grid) <= 0):
        raise ValueError("p_grid must be strictly increasing")
    values = state.values
    edge = max(abs(values[0]), abs(values[-1]))
    if edge > 1e-10 * (1.0 + np.abs(values).max()):
        raise ValueError("state does not decay at the grid edges (aliasing hazard)")
    w = trapezoid_weights(state.grid)
    kernel = np.exp(-1j * np.outer(p_grid, state.grid.x) / hbar)
    c = (kernel @ (w * values)) / np.sqrt(2 * np.pi * hbar)
    return ExpansionCoefficients(p_grid, c, continuous=True)
