"""Uniform 1-D grids and sampled complex fields.

Everything downstream (optics marches, eigenproblems, propagation, spinor
dynamics) lives on a :class:`Grid1D` and carries its samples in a
:class:`ComplexField`.  Quadrature is the trapezoidal rule matched to the
second-order finite-difference stencils, so discrete orthogonality statements
(eigenvectors, box momentum modes) hold to rounding rather than to O(dx^2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "NumericalError",
    "Grid1D",
    "ComplexField",
    "PhysicalConstants",
    "trapezoid_weights",
    "inner_product",
    "norm",
    "derivative",
    "normalize",
    "make_state",
]


class NumericalError(RuntimeError):
    """A computation produced non-finite values or a solver failed."""


def _require_finite(values: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(values)):
        raise NumericalError(f"{what} contains non-finite entries")


@dataclass(frozen=True)
class Grid1D:
    """Uniform spatial lattice with a boundary-condition tag.

    For ``dirichlet`` grids the nodes include both endpoints and
    ``dx = (x_max - x_min)/(n_points - 1)``; for ``periodic`` grids the right
    endpoint is identified with the left one, the nodes stop one spacing
    short of ``x_max`` and ``dx = (x_max - x_min)/n_points``.
    """

    x_min: float
    x_max: float
    n_points: int
    boundary: str = "dirichlet"

    def __post_init__(self) -> None:
        if self.boundary not in ("dirichlet", "periodic"):
            raise ValueError(f"unknown boundary kind {self.boundary!r}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.n_points < 16:
            raise ValueError("need at least 16 grid points")

    @property
    def dx(self) -> float:
        span = self.x_max - self.x_min
        if self.boundary == "dirichlet":
            return span / (self.n_points - 1)
        return span / self.n_points

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def x(self) -> np.ndarray:
        if self.boundary == "dirichlet":
            return np.linspace(self.x_min, self.x_max, self.n_points)
        return self.x_min + self.dx * np.arange(self.n_points)

    def index_of(self, x_value: float, tol: float = 1e-9) -> int:
        """Index of the node at ``x_value``; raises if off-grid."""
        pos = (x_value - self.x_min) / self.dx
        i = int(round(pos))
        if i < 0 or i >= self.n_points or abs(pos - i) > tol:
            raise ValueError(f"{x_value} is not a node of the grid")
        return i


@dataclass(frozen=True)
class ComplexField:
    """Complex samples of a wave function / action / field on a grid."""

    grid: Grid1D
    values: np.ndarray
    time: float | None = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise ValueError(
                f"values have shape {values.shape}, grid has {self.grid.n_points} nodes"
            )
        _require_finite(values, "field")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(
        cls, grid: Grid1D, fn: Callable[[np.ndarray], np.ndarray], time: float | None = None
    ) -> "ComplexField":
        return cls(grid, np.asarray(fn(grid.x), dtype=complex), time)

    def with_values(self, values: np.ndarray, time: float | None = None) -> "ComplexField":
        return ComplexField(self.grid, values, self.time if time is None else time)

    def __add__(self, other: "ComplexField") -> "ComplexField":
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")
        return ComplexField(self.grid, self.values + other.values, self.time)

    def __sub__(self, other: "ComplexField") -> "ComplexField":
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")
        return ComplexField(self.grid, self.values - other.values, self.time)

    def __mul__(self, scalar: complex) -> "ComplexField":
        return ComplexField(self.grid, self.values * scalar, self.time)

    __rmul__ = __mul__


@dataclass(frozen=True)
class PhysicalConstants:
    """Natural-unit constants; the defaults set hbar = m = c = 1."""

    hbar: float = 1.0
    mass: float = 1.0
    c: float = 1.0
    omega: float | None = None

    def __post_init__(self) -> None:
        for name in ("hbar", "mass", "c"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.omega is not None and self.omega <= 0:
            raise ValueError("omega must be positive")


def trapezoid_weights(grid: Grid1D) -> np.ndarray:
    """Quadrature weights: trapezoid on dirichlet, uniform on periodic."""
    w = np.full(grid.n_points, grid.dx)
    if grid.boundary == "dirichlet":
        w[0] *= 0.5
        w[-1] *= 0.5
    return w


def inner_product(f: ComplexField, g: ComplexField) -> complex:
    """Trapezoidal approximation of  integral  conj(f) * g  dx."""
    if f.grid != g.grid:
        raise ValueError("inner_product requires identical grids")
    w = trapezoid_weights(f.grid)
    out = complex(np.sum(w * np.conj(f.values) * g.values))
    if not np.isfinite(out):
        raise NumericalError("inner product is non-finite")
    return out


def norm(f: ComplexField) -> float:
    return float(np.sqrt(inner_product(f, f).real))


def _central_fd(values: np.ndarray, dx: float, order: int, periodic: bool) -> np.ndarray:
    out = np.empty_like(values)
    if order == 1:
        if periodic:
            out[:] = (np.roll(values, -1) - np.roll(values, 1)) / (2 * dx)
        else:
            out[1:-1] = (values[2:] - values[:-2]) / (2 * dx)
            # one-sided second-order stencils at the walls
            out[0] = (-3 * values[0] + 4 * values[1] - values[2]) / (2 * dx)
            out[-1] = (3 * values[-1] - 4 * values[-2] + values[-3]) / (2 * dx)
    else:
        if periodic:
            out[:] = (np.roll(values, -1) - 2 * values + np.roll(values, 1)) / dx**2
        else:
            out[1:-1] = (values[2:] - 2 * values[1:-1] + values[:-2]) / dx**2
            out[0] = (2 * values[0] - 5 * values[1] + 4 * values[2] - values[3]) / dx**2
            out[-1] = (2 * values[-1] - 5 * values[-2] + 4 * values[-3] - values[-4]) / dx**2
    return out


def _spectral(values: np.ndarray, grid: Grid1D, order: int) -> np.ndarray:
    k = 2 * np.pi * np.fft.fftfreq(grid.n_points, d=grid.dx)
    factor = (1j * k) ** order
    return np.fft.ifft(factor * np.fft.fft(values))


def derivative(f: ComplexField, order: int = 1, scheme: str = "central_fd") -> ComplexField:
    """First or second derivative, central differences or DFT based."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if scheme == "spectral":
        if f.grid.boundary != "periodic":
            raise ValueError("spectral derivatives need a periodic grid")
        out = _spectral(f.values, f.grid, order)
    elif scheme == "central_fd":
        out = _central_fd(f.values, f.grid.dx, order, f.grid.boundary == "periodic")
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    _require_finite(out, "derivative")
    return ComplexField(f.grid, out, f.time)


def normalize(f: ComplexField) -> ComplexField:
    """Scale to unit norm under the grid's quadrature."""
    n = norm(f)
    if n == 0.0:
        raise ValueError("cannot normalize the zero field")
    return ComplexField(f.grid, f.values / n, f.time)


def make_state(grid: Grid1D, values: np.ndarray, time: float | None = None) -> ComplexField:
    """Build a normalized physical state; dirichlet walls are forced to zero."""
    values = np.asarray(values, dtype=complex).copy()
    if grid.boundary == "dirichlet":
        values[0] = 0.0
        values[-1] = 0.0
    return normalize(ComplexField(grid, values, time))
