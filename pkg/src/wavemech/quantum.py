"""Discretized Hamiltonians, eigenproblems, unitary propagation, and the
action form of the wave function.

The Hamiltonian is the 3-point finite-difference operator
    H = -(hbar^2/2m) D2 + V(x),
real symmetric by construction.  Eigenpairs come from the LAPACK symmetric
tridiagonal path (dirichlet) or a dense symmetric solve (periodic), both
deterministic.  Time stepping is Crank-Nicolson, whose Cayley form is exactly
unitary in the discrete inner product.  The complex action
S = -i hbar log(psi) turns the linear equation into a Hamilton-Jacobi-like
form whose extra term (i hbar/2m) lap S is the quantum correction; residuals
of that form, and of the nonlinear classical wave equation on the same field,
are compared by `linearization_demo`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.sparse import diags, identity
from scipy.sparse.linalg import splu

from .classical import classical_wave_residual_signed
from .grids import (
    ComplexField,
    Grid1D,
    NumericalError,
    derivative,
    inner_product,
    norm,
    trapezoid_weights,
)

__all__ = [
    "PotentialSpec",
    "Hamiltonian1D",
    "SpectralDecomposition",
    "build_hamiltonian",
    "eigensolve",
    "propagate",
    "propagate_recorded",
    "PropagationRecord",
    "quantum_action",
    "quantum_hj_residual",
    "quantum_hj_residual_terms",
    "schrodinger_residual_signed",
    "linearization_demo",
    "LinearizationResult",
    "harmonic_grid",
    "AMPLITUDE_FLOOR",
]

AMPLITUDE_FLOOR = 1e-8  # nodes with |psi| below floor*max|psi| are masked


@dataclass(frozen=True)
class PotentialSpec:
    """Potential samples on a grid: zero/box, harmonic, or tabulated.

    `box` is the hard-wall well: V = 0 with the walls supplied by the
    dirichlet grid itself.  `offset` adds a constant to any kind.
    """

    kind: str
    grid: Grid1D
    omega: float = 1.0
    values: np.ndarray | None = None
    offset: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("zero", "box", "harmonic", "tabulated"):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == "harmonic" and self.omega <= 0:
            raise ValueError("harmonic potential needs omega > 0")
        if self.kind == "tabulated":
            if self.values is None:
                raise ValueError("tabulated potential needs samples")
            values = np.asarray(self.values, dtype=float)
            if values.shape != (self.grid.n_points,):
                raise ValueError("potential sample count does not match the grid")
            if not np.all(np.isfinite(values)):
                raise NumericalError("potential samples are not finite")
            object.__setattr__(self, "values", values)

    def samples(self, mass: float = 1.0) -> np.ndarray:
        if self.kind in ("zero", "box"):
            v = np.zeros(self.grid.n_points)
        elif self.kind == "harmonic":
            v = 0.5 * mass * self.omega**2 * self.grid.x**2
        else:
            v = self.values.copy()
        return v + self.offset


def harmonic_grid(
    hbar: float = 1.0, mass: float = 1.0, omega: float = 1.0, n_points: int = 2048,
    half_width: float = 12.0,
) -> Grid1D:
    """Dirichlet box [-12, 12] in oscillator lengths sqrt(hbar/m w): wide
    enough that wall truncation sits below the eigenvalue tolerances."""
    ell = np.sqrt(hbar / (mass * omega))
    return Grid1D(-half_width * ell, half_width * ell, n_points)


class Hamiltonian1D:
    """Real symmetric 3-point discretization of -(hbar^2/2m) d2/dx2 + V."""

    def __init__(self, grid: Grid1D, potential: np.ndarray, hbar: float, mass: float):
        if hbar <= 0 or mass <= 0:
            raise ValueError("hbar and mass must be positive")
        self.grid = grid
        self.potential = np.asarray(potential, dtype=float)
        if self.potential.shape != (grid.n_points,):
            raise ValueError("potential sample count does not match the grid")
        self.hbar = hbar
        self.mass = mass
        self.kinetic_scale = hbar**2 / (2 * mass * grid.dx**2)

    @property
    def boundary(self) -> str:
        return self.grid.boundary

    def apply(self, values: np.ndarray) -> np.ndarray:
        """H acting on full-grid samples; dirichlet wall rows return 0
        (states in the domain vanish there)."""
        values = np.asarray(values, dtype=complex)
        t = self.kinetic_scale
        if self.boundary == "periodic":
            lap = np.roll(values, -1) - 2 * values + np.roll(values, 1)
            return -t * lap + self.potential * values
        out = np.zeros_like(values)
        out[1:-1] = (
            -t * (values[2:] - 2 * values[1:-1] + values[:-2])
            + self.potential[1:-1] * values[1:-1]
        )
        return out

    def apply_field(self, f: ComplexField) -> ComplexField:
        if f.grid != self.grid:
            raise ValueError("field lives on a different grid")
        return ComplexField(self.grid, self.apply(f.values), f.time)

    def tridiagonal(self) -> tuple[np.ndarray, np.ndarray]:
        """(diagonal, off-diagonal) of the interior dirichlet matrix."""
        if self.boundary != "dirichlet":
            raise ValueError("tridiagonal form is the dirichlet interior matrix")
        n_in = self.grid.n_points - 2
        d = 2 * self.kinetic_scale + self.potential[1:-1]
        e = np.full(n_in - 1, -self.kinetic_scale)
        return d, e

    def dense(self) -> np.ndarray:
        """Dense matrix on the operator's natural index set (interior nodes
        for dirichlet, all nodes for periodic); exactly symmetric."""
        t = self.kinetic_scale
        if self.boundary == "dirichlet":
            d, e = self.tridiagonal()
            mat = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
            return mat
        n = self.grid.n_points
        mat = np.diag(2 * t + self.potential)
        idx = np.arange(n)
        mat[idx, (idx + 1) % n] = -t
        mat[idx, (idx - 1) % n] = -t
        return mat


def build_hamiltonian(potential: PotentialSpec, hbar: float, mass: float) -> Hamiltonian1D:
    return Hamiltonian1D(potential.grid, potential.samples(mass), hbar, mass)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues with quadrature-orthonormal eigenfunctions."""

    eigenvalues: np.ndarray
    eigenfunctions: tuple[ComplexField, ...]
    boundary: str

    def __post_init__(self) -> None:
        eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        if np.any(np.diff(eigenvalues) < 0):
            raise ValueError("eigenvalues must be ascending")
        if len(eigenvalues) != len(self.eigenfunctions):
            raise ValueError("eigenvalue/eigenfunction count mismatch")
        object.__setattr__(self, "eigenvalues", eigenvalues)
        object.__setattr__(self, "eigenfunctions", tuple(self.eigenfunctions))

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def grid(self) -> Grid1D:
        return self.eigenfunctions[0].grid


def eigensolve(hamiltonian: Hamiltonian1D, k: int) -> SpectralDecomposition:
    """Lowest k eigenpairs, quadrature-normalized, deterministic solvers."""
    grid = hamiltonian.grid
    if k < 1 or k > grid.n_points // 4:
        raise ValueError("need 1 <= k <= n_points/4 for resolved eigenpairs")
    if hamiltonian.boundary == "dirichlet":
        d, e = hamiltonian.tridiagonal()
        try:
            vals, vecs = eigh_tridiagonal(d, e, select="i", select_range=(0, k - 1))
        except Exception as exc:  # pragma: no cover - LAPACK failure path
            raise NumericalError(f"tridiagonal eigensolve failed: {exc}") from exc
        full = np.zeros((grid.n_points, k))
        full[1:-1, :] = vecs
    else:
        vals_all, vecs_all = np.linalg.eigh(hamiltonian.dense())
        vals, full = vals_all[:k], vecs_all[:, :k]
    fields = []
    w = trapezoid_weights(grid)
    for j in range(k):
        column = full[:, j].astype(complex)
        column /= np.sqrt(np.sum(w * np.abs(column) ** 2))
        # fix the arbitrary solver sign: make the first sizeable entry positive
        anchor = column[np.argmax(np.abs(column))]
        if anchor.real < 0:
            column = -column
        fields.append(ComplexField(grid, column))
    residual_scale = max(np.abs(vals).max(), 1.0)
    for j, f in enumerate(fields):
        r = hamiltonian.apply(f.values) - vals[j] * f.values
        if np.sqrt(np.sum(w * np.abs(r) ** 2)) > 1e-8 * residual_scale:
            raise NumericalError(f"eigenpair {j} residual above tolerance")
    return SpectralDecomposition(vals, tuple(fields), hamiltonian.boundary)


class CrankNicolson:
    """Pre-factorized Cayley stepper (I + i dt H/2hbar) psi' = (I - i dt H/2hbar) psi.

    The Hamiltonian is kept sparse (tridiagonal, plus the periodic corner
    couplings) so both the right-hand-side product and the factored solve
    stay O(n) per step.
    """

    def __init__(self, hamiltonian: Hamiltonian1D, dt: float):
        if dt <= 0:
            raise ValueError("dt must be positive")
        self.h = hamiltonian
        self.dt = dt
        t = hamiltonian.kinetic_scale
        if hamiltonian.boundary == "dirichlet":
            d, e = hamiltonian.tridiagonal()
            matrix = diags([e, d, e], [-1, 0, 1], format="csr", dtype=complex)
        else:
            n = hamiltonian.grid.n_points
            d = 2 * t + hamiltonian.potential
            e = np.full(n - 1, -t)
            matrix = diags([e, d, e], [-1, 0, 1], format="lil", dtype=complex)
            matrix[0, n - 1] = -t
            matrix[n - 1, 0] = -t
            matrix = matrix.tocsr()
        z = 1j * dt / (2 * hamiltonian.hbar)
        lhs = (identity(matrix.shape[0], dtype=complex, format="csr") + z * matrix).tocsc()
        self._z = z
        self._matrix = matrix
        try:
            self._solver = splu(lhs)
        except Exception as exc:  # pragma: no cover
            raise NumericalError(f"Crank-Nicolson factorization failed: {exc}") from exc

    def step_values(self, values: np.ndarray) -> np.ndarray:
        interior = self.h.boundary == "dirichlet"
        vec = values[1:-1] if interior else values
        rhs = vec - self._z * (self._matrix @ vec)
        new = self._solver.solve(rhs)
        if not np.all(np.isfinite(new)):
            raise NumericalError("Crank-Nicolson solve produced non-finite values")
        if interior:
            out = np.zeros_like(values)
            out[1:-1] = new
            return out
        return new


def default_dt(hamiltonian: Hamiltonian1D) -> float:
    """0.001 of the period of the fastest resolved mode (~ the FD bandwidth)."""
    t = hamiltonian.kinetic_scale
    e_max = 4 * t + float(np.abs(hamiltonian.potential).max())
    omega_max = e_max / hamiltonian.hbar
    return 0.001 * (2 * np.pi / omega_max)


def propagate(
    psi0: ComplexField,
    potential: PotentialSpec,
    hbar: float,
    mass: float,
    dt: float,
    n_steps: int,
) -> ComplexField:
    """Crank-Nicolson propagation of a normalized state by n_steps * dt."""
    if abs(norm(psi0) - 1.0) > 1e-6:
        raise ValueError("psi0 must be normalized")
    h = build_hamiltonian(potential, hbar, mass)
    stepper = CrankNicolson(h, dt)
    values = psi0.values.copy()
    for _ in range(n_steps):
        values = stepper.step_values(values)
    t0 = psi0.time if psi0.time is not None else 0.0
    return ComplexField(psi0.grid, values, time=t0 + n_steps * dt)


@dataclass(frozen=True)
class PropagationRecord:
    times: np.ndarray
    norms: np.ndarray
    x_means: np.ndarray
    p_means: np.ndarray
    e_means: np.ndarray


def propagate_recorded(
    psi0: ComplexField,
    potential: PotentialSpec,
    hbar: float,
    mass: float,
    dt: float,
    n_steps: int,
    record_every: int = 1,
) -> tuple[ComplexField, PropagationRecord]:
    """Propagate while recording (t, norm, <x>, <p>, <H>) every few steps."""
    if abs(norm(psi0) - 1.0) > 1e-6:
        raise ValueError("psi0 must be normalized")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    grid = psi0.grid
    h = build_hamiltonian(potential, hbar, mass)
    stepper = CrankNicolson(h, dt)
    w = trapezoid_weights(grid)
    x = grid.x
    t0 = psi0.time if psi0.time is not None else 0.0

    def observables(values: np.ndarray, t: float):
        density = w * np.abs(values) ** 2
        nrm = float(np.sqrt(density.sum()))
        x_mean = float((x * density).sum())
        grad = derivative(ComplexField(grid, values), 1).values
        p_mean = float(np.sum(w * np.conj(values) * (-1j * hbar) * grad).real)
        e_mean = float(np.sum(w * np.conj(values) * h.apply(values)).real)
        return t, nrm, x_mean, p_mean, e_mean

    rows = [observables(psi0.values, t0)]
    values = psi0.values.copy()
    for step in range(1, n_steps + 1):
        values = stepper.step_values(values)
        if step % record_every == 0 or step == n_steps:
            rows.append(observables(values, t0 + step * dt))
    arr = np.array(rows)
    record = PropagationRecord(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], arr[:, 4])
    return ComplexField(grid, values, time=t0 + n_steps * dt), record


def _floor_mask(values: np.ndarray, floor: float) -> np.ndarray:
    return np.abs(values) >= floor * np.abs(values).max()


def quantum_action(psi: ComplexField, hbar: float, floor: float = AMPLITUDE_FLOOR) -> np.ndarray:
    """Complex action S = -i hbar log(psi), phase-unwrapped along the grid.

    Unwrapping sweeps left to right from the leftmost unmasked node; each
    contiguous unmasked segment is unwrapped independently (the branch offset
    cannot be continued across masked gaps).  Masked nodes are NaN.
    """
    values = psi.values
    out = np.full(psi.grid.n_points, np.nan, dtype=complex)
    mask = _floor_mask(values, floor)
    if not mask.any():
        raise ValueError("all nodes fall below the amplitude floor")
    idx = np.flatnonzero(mask)
    splits = np.where(np.diff(idx) > 1)[0] + 1
    for segment in np.split(idx, splits):
        seg = values[segment]
        phase = np.unwrap(np.angle(seg))
        out[segment] = hbar * phase - 1j * hbar * np.log(np.abs(seg))
    return out


def quantum_hj_residual_terms(
    psi: ComplexField,
    potential: np.ndarray,
    hbar: float,
    mass: float,
    dpsi_dt: ComplexField,
    floor: float = AMPLITUDE_FLOOR,
) -> tuple[np.ndarray, np.ndarray]:
    """(signed residual, correction term) of the action form of the dynamics:
        (1/2m)(grad S)^2 + V + dS/dt  =  (i hbar/2m) lap S,
    with S = -i hbar log psi differentiated as a field in its own right.
    Returns NaN at masked nodes; the correction term is the right-hand side.
    """
    grid = psi.grid
    action = quantum_action(psi, hbar, floor)
    mask = np.isfinite(action.real)
    # derivative() needs finite entries; masked nodes get a placeholder that
    # is never read back (only nodes with fully-unmasked stencils survive).
    filled = np.where(mask, action, 0.0)
    s_field = ComplexField(grid, filled)
    grad = derivative(s_field, 1).values
    lap = derivative(s_field, 2).values
    ds_dt = np.full(grid.n_points, np.nan, dtype=complex)
    ds_dt[mask] = -1j * hbar * dpsi_dt.values[mask] / psi.values[mask]
    usable = mask.copy()
    usable[1:] &= mask[:-1]
    usable[:-1] &= mask[1:]
    usable[0] = usable[-1] = False
    v = np.asarray(potential, dtype=float)
    correction = np.full(grid.n_points, np.nan, dtype=complex)
    residual = np.full(grid.n_points, np.nan, dtype=complex)
    correction[usable] = (1j * hbar / (2 * mass)) * lap[usable]
    residual[usable] = (
        grad[usable] ** 2 / (2 * mass) + v[usable] + ds_dt[usable] - correction[usable]
    )
    return residual, correction


def quantum_hj_residual(
    psi: ComplexField,
    potential: np.ndarray,
    hbar: float,
    mass: float,
    dpsi_dt: ComplexField,
    floor: float = AMPLITUDE_FLOOR,
) -> np.ndarray:
    """Pointwise |residual| of the action-form equation; NaN where masked."""
    residual, _ = quantum_hj_residual_terms(psi, potential, hbar, mass, dpsi_dt, floor)
    return np.abs(residual)


def schrodinger_residual_signed(
    psi: ComplexField,
    potential: np.ndarray,
    hbar: float,
    mass: float,
    dpsi_dt: ComplexField,
) -> np.ndarray:
    """Complex residual -(hbar^2/2m) lap psi + V psi - i hbar dpsi/dt
    at interior nodes (NaN at the walls)."""
    lap = derivative(psi, 2).values
    v = np.asarray(potential, dtype=float)
    out = np.empty(psi.grid.n_points, dtype=complex)
    out[:] = -(hbar**2 / (2 * mass)) * lap + v * psi.values - 1j * hbar * dpsi_dt.values
    out[0] = out[-1] = np.nan
    return out


@dataclass(frozen=True)
class LinearizationResult:
    """Both residual routes on one field, plus the term that links them.

    correction_term is (hbar^2/2m) * X * d/dx((dX/dx)/X), composed from
    first-derivative operators (an independent discrete route); in the
    continuum, quantum_residual - classical_residual = -correction_term.
    identity_error is the pointwise magnitude of that relation's violation.
    """

    residual_classical: np.ndarray
    residual_quantum: np.ndarray
    correction_term: np.ndarray
    identity_error: np.ndarray


def linearization_demo(
    x_field: ComplexField,
    potential: np.ndarray,
    hbar: float,
    mass: float,
    dx_dt: ComplexField,
) -> LinearizationResult:
    """Evaluate the nonlinear (classical) and linear (quantum) residuals on
    the same field and check their difference against the correction term."""
    signed_classical = classical_wave_residual_signed(x_field, potential, hbar, mass, dx_dt)
    signed_quantum = schrodinger_residual_signed(psi=x_field, potential=potential,
                                                 hbar=hbar, mass=mass, dpsi_dt=dx_dt)
    values = x_field.values
    usable = np.isfinite(signed_classical.real) & np.isfinite(signed_quantum.real)
    grad = derivative(x_field, 1).values
    ratio = np.zeros_like(values)
    nonzero = np.abs(values) > 0
    ratio[nonzero] = grad[nonzero] / values[nonzero]
    grad_of_ratio = derivative(ComplexField(x_field.grid, ratio), 1).values
    correction = np.full_like(values, np.nan)
    correction[usable] = (hbar**2 / (2 * mass)) * values[usable] * grad_of_ratio[usable]
    # interior-of-interior: the outer derivative consumed one more stencil row
    usable_strict = usable.copy()
    usable_strict[1:] &= usable[:-1]
    usable_strict[:-1] &= usable[1:]
    identity = np.full(values.shape, np.nan)
    identity[usable_strict] = np.abs(
        (signed_quantum - signed_classical + correction)[usable_strict]
    )
    return LinearizationResult(
        residual_classical=np.abs(signed_classical),
        residual_quantum=np.abs(signed_quantum),
        correction_term=correction,
        identity_error=identity,
    )
