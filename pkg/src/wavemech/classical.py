"""Classical action functions, phase waves, and trajectory recovery.

A conserved-energy action S(q, t) = -E t + W(q) generates a unimodular phase
wave exp(iS/hbar) that satisfies a *nonlinear* wave equation
    -(hbar^2/2m) (grad X)^2 / X + V X = i hbar dX/dt
whose residual cancels identically for true actions, fails loudly for
superpositions, and does not depend on the hbar used to build X.  The same
action yields trajectories through direct integration of m dq/dt = dS/dq.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grids import ComplexField, Grid1D, derivative

__all__ = [
    "ActionFunction",
    "Trajectory",
    "ho_action",
    "classical_wavefunction",
    "classical_wave_residual",
    "classical_wave_residual_signed",
    "integrate_trajectory",
    "classical_energy_field",
]

TURNING_POINT_FRACTION = 1e-9  # epsilon_turn = 1e-9 * amplitude


def ho_action(
    q: float, t: float, energy: float, mass: float = 1.0, omega: float = 1.0, offset: float = 0.0
) -> float:
    """Closed-form oscillator action  -Et + (E/w) asin(sqrt(mw^2/2E) q)
    + (q/2) sqrt(2mE - m^2 w^2 q^2) + C,  valid inside the turning points."""
    amplitude = np.sqrt(2 * energy / (mass * omega**2))
    q_arr = np.asarray(q, dtype=float)
    if np.any(np.abs(q_arr) > amplitude * (1 + 1e-12)):
        raise ValueError(f"|q| exceeds the turning point {amplitude}")
    q_arr = np.clip(q_arr, -amplitude, amplitude)
    radicand = np.maximum(2 * mass * energy - mass**2 * omega**2 * q_arr**2, 0.0)
    s = (
        -energy * t
        + (energy / omega) * np.arcsin(np.sqrt(mass * omega**2 / (2 * energy)) * q_arr)
        + (q_arr / 2) * np.sqrt(radicand)
        + offset
    )
    if np.ndim(q) == 0:
        return float(s)
    return s


@dataclass(frozen=True)
class ActionFunction:
    """Hamilton principal function S = -Et + W(q) with a parameter record."""

    kind: str
    energy: float
    mass: float = 1.0
    omega: float = 1.0
    offset: float = 0.0
    momentum_sign: int = +1
    w_samples: np.ndarray | None = None
    sample_grid: Grid1D | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("free_particle", "harmonic_oscillator", "from_samples"):
            raise ValueError(f"unknown action kind {self.kind!r}")
        if self.energy <= 0 or self.mass <= 0:
            raise ValueError("energy and mass must be positive")
        if self.kind == "harmonic_oscillator" and self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.kind == "from_samples" and (self.w_samples is None or self.sample_grid is None):
            raise ValueError("sampled action needs W samples and their grid")

    @classmethod
    def free_particle(
        cls, energy: float, mass: float = 1.0, momentum_sign: int = +1
    ) -> "ActionFunction":
        return cls("free_particle", energy, mass, momentum_sign=momentum_sign)

    @classmethod
    def harmonic_oscillator(
        cls, energy: float, mass: float = 1.0, omega: float = 1.0, offset: float = 0.0
    ) -> "ActionFunction":
        return cls("harmonic_oscillator", energy, mass, omega, offset)

    @classmethod
    def from_samples(cls, grid: Grid1D, w_samples: np.ndarray, energy: float,
                     mass: float = 1.0) -> "ActionFunction":
        return cls(
            "from_samples",
            energy,
            mass,
            w_samples=np.asarray(w_samples, dtype=float),
            sample_grid=grid,
        )

    @property
    def momentum(self) -> float:
        """Free-particle momentum sqrt(2mE) with the chosen sign."""
        return self.momentum_sign * np.sqrt(2 * self.mass * self.energy)

    @property
    def amplitude(self) -> float:
        """Oscillator turning point sqrt(2E/m w^2)."""
        if self.kind != "harmonic_oscillator":
            raise ValueError("amplitude only defined for the oscillator")
        return float(np.sqrt(2 * self.energy / (self.mass * self.omega**2)))

    def allowed_mask(self, grid: Grid1D) -> np.ndarray:
        """True where the action is defined (classically allowed region)."""
        if self.kind == "harmonic_oscillator":
            a = self.amplitude
            return np.abs(grid.x) <= a * (1 - TURNING_POINT_FRACTION)
        if self.kind == "from_samples":
            if grid != self.sample_grid:
                raise ValueError("sampled action only evaluable on its own grid")
        return np.ones(grid.n_points, dtype=bool)

    def w(self, q: np.ndarray) -> np.ndarray:
        """Characteristic function W(q) (the time-independent part)."""
        q = np.asarray(q, dtype=float)
        if self.kind == "free_particle":
            return self.momentum * q
        if self.kind == "harmonic_oscillator":
            return ho_action(q, 0.0, self.energy, self.mass, self.omega, self.offset)
        return self.w_samples

    def s(self, q: np.ndarray, t: float) -> np.ndarray:
        return -self.energy * t + self.w(q)

    def ds_dq(self, q: np.ndarray) -> np.ndarray:
        """Momentum p(q) = dS/dq on the allowed region (positive branch)."""
        q = np.asarray(q, dtype=float)
        if self.kind == "free_particle":
            return np.full_like(q, self.momentum)
        if self.kind == "harmonic_oscillator":
            radicand = 2 * self.mass * self.energy - self.mass**2 * self.omega**2 * q**2
            return np.sqrt(np.maximum(radicand, 0.0))
        w_field = ComplexField(self.sample_grid, self.w_samples.astype(complex))
        return derivative(w_field, 1).values.real

    def ds_dt(self) -> float:
        return -self.energy

    def force(self, q: float) -> float:
        """-dV/dq implied by the action's Hamiltonian."""
        if self.kind == "harmonic_oscillator":
            return -self.mass * self.omega**2 * q
        return 0.0


def classical_wavefunction(
    action: ActionFunction, grid: Grid1D, t: float, hbar: float
) -> ComplexField:
    """Unimodular phase wave exp(iS/hbar); forbidden-region nodes hold 0.

    Downstream residual/field routines skip zero-amplitude nodes, so the 0
    marker doubles as the mask (ComplexField cannot store NaN).
    """
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    mask = action.allowed_mask(grid)
    values = np.zeros(grid.n_points, dtype=complex)
    values[mask] = np.exp(1j * action.s(grid.x[mask], t) / hbar)
    return ComplexField(grid, values, time=t)


def _masked_interior(x_values: np.ndarray) -> np.ndarray:
    """True where a field is usable for FD residuals: nonzero and not adjacent
    to a zero/boundary node (central stencils need live neighbours)."""
    alive = np.abs(x_values) > 0.0
    ok = alive.copy()
    ok[1:] &= alive[:-1]
    ok[:-1] &= alive[1:]
    ok[0] = ok[-1] = False
    return ok


def classical_wave_residual_signed(
    x_field: ComplexField,
    potential: np.ndarray,
    hbar: float,
    mass: float,
    dx_dt: ComplexField,
) -> np.ndarray:
    """Complex residual -(hbar^2/2m)(grad X)^2/X + V X - i hbar dX/dt.

    NaN at nodes where the residual is not evaluated (zeros, boundaries).
    """
    values = x_field.values
    usable = _masked_interior(values)
    grad = derivative(x_field, 1).values
    out = np.full(x_field.grid.n_points, np.nan, dtype=complex)
    v = np.asarray(potential, dtype=float)
    out[usable] = (
        -(hbar**2 / (2 * mass)) * grad[usable] ** 2 / values[usable]
        + v[usable] * values[usable]
        - 1j * hbar * dx_dt.values[usable]
    )
    return out


def classical_wave_residual(
    x_field: ComplexField,
    potential: np.ndarray,
    hbar: float,
    mass: float,
    dx_dt: ComplexField,
) -> np.ndarray:
    """Pointwise |residual| of the nonlinear classical wave equation."""
    return np.abs(
        classical_wave_residual_signed(x_field, potential, hbar, mass, dx_dt)
    )


def analytic_time_derivative(action: ActionFunction, grid: Grid1D, t: float,
                             hbar: float) -> ComplexField:
    """dX/dt = (-iE/hbar) X from the exp(-iEt/hbar) factor (no time FD)."""
    x_field = classical_wavefunction(action, grid, t, hbar)
    return ComplexField(grid, (-1j * action.energy / hbar) * x_field.values, time=t)


def sampled_time_derivative(
    builder: Callable[[float], ComplexField], t: float, dt: float = 1e-6
) -> ComplexField:
    """Second-order centered time difference for sampled fields."""
    before = builder(t - dt)
    after = builder(t + dt)
    return ComplexField(before.grid, (after.values - before.values) / (2 * dt), time=t)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    positions: np.ndarray
    momenta: np.ndarray
    energy: float
    amplitude: float | None
    phase: float | None

    def energies(self, action: ActionFunction) -> np.ndarray:
        """Instantaneous (1/2m) p^2 + V(q) along the trajectory."""
        kinetic = self.momenta**2 / (2 * action.mass)
        if action.kind == "harmonic_oscillator":
            return kinetic + 0.5 * action.mass * action.omega**2 * self.positions**2
        return kinetic


_BAND_FRACTION = 0.1  # canonical fallback when p^2 < this fraction of 2mE


def integrate_trajectory(
    action: ActionFunction, q0: float, t_span: tuple[float, float], dt: float
) -> Trajectory:
    """RK4 integration of m dq/dt = dS/dq with turning-point branch flips.

    Away from turning points the scalar equation is integrated directly and
    the momentum is pinned to the energy shell p = +/- sqrt(2mE - m^2w^2q^2).
    Within a narrow band around a turning point the scalar right-hand side is
    singular, so the step uses the differentiated form of the same relation
    (dq/dt = p/m, dp/dt = -V'(q)); the branch sign flips where the integrated
    p changes sign, and p is re-projected onto the shell on band exit.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    t0, t1 = t_span
    if t1 <= t0:
        raise ValueError("empty time span")
    mass, energy = action.mass, action.energy

    if action.kind == "free_particle":
        times = t0 + dt * np.arange(int(round((t1 - t0) / dt)) + 1)
        positions = q0 + (action.momentum / mass) * (times - t0)
        momenta = np.full_like(times, action.momentum)
        return Trajectory(times, positions, momenta, energy, None, None)

    if action.kind != "harmonic_oscillator":
        raise ValueError("trajectory integration needs an analytic action")

    amplitude = action.amplitude
    eps_turn = TURNING_POINT_FRACTION * amplitude
    if abs(q0) > amplitude - eps_turn:
        raise ValueError("q0 must lie strictly inside the allowed region")
    omega = action.omega
    two_me = 2 * mass * energy
    band_p2 = _BAND_FRACTION * two_me

    def radicand(q: float) -> float:
        return two_me - (mass * omega * q) ** 2

    def shell_p(q: float) -> float:
        return float(np.sqrt(max(radicand(q), 0.0)))

    n_steps = int(round((t1 - t0) / dt))
    times = t0 + dt * np.arange(n_steps + 1)
    positions = np.empty(n_steps + 1)
    momenta = np.empty(n_steps + 1)
    q = float(q0)
    sign = +1
    p = sign * shell_p(q)
    positions[0], momenta[0] = q, p
    canonical = False
    for i in range(n_steps):
        if not canonical and radicand(q) > band_p2:
            stepped = _scalar_rk4_step(q, sign, dt, mass, shell_p, radicand, band_p2)
            if stepped is not None:
                q = stepped
                p = sign * shell_p(q)
            else:
                canonical = True
                p = sign * shell_p(q)
        else:
            canonical = True
        if canonical:
            q, p = _canonical_rk4_step(q, p, dt, mass, action.force)
            sign = +1 if p >= 0 else -1
            if radicand(q) > 1.5 * band_p2:
                canonical = False
                p = sign * shell_p(q)
        positions[i + 1], momenta[i + 1] = q, p
    if np.abs(positions).max() > amplitude * (1 + 1e-9):
        raise ValueError("trajectory crossed a turning point without a branch flip")
    phase = float(np.arcsin(np.clip(q0 / amplitude, -1.0, 1.0)))
    return Trajectory(times, positions, momenta, energy, amplitude, phase)


def _scalar_rk4_step(q, sign, dt, mass, shell_p, radicand, band_p2):
    """One RK4 step of dq/dt = sign*p(q)/m; None if a stage nears the turning point."""
    guard = 0.25 * band_p2

    def f(qq: float) -> float | None:
        r = radicand(qq)
        if r < guard:
            return None
        return sign * np.sqrt(r) / mass

    k1 = f(q)
    if k1 is None:
        return None
    k2 = f(q + dt / 2 * k1)
    if k2 is None:
        return None
    k3 = f(q + dt / 2 * k2)
    if k3 is None:
        return None
    k4 = f(q + dt * k3)
    if k4 is None:
        return None
    return q + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _canonical_rk4_step(q, p, dt, mass, force):
    """One RK4 step of dq/dt = p/m, dp/dt = force(q) (regular at turnings)."""

    def g(qq: float, pp: float) -> tuple[float, float]:
        return pp / mass, force(qq)

    k1q, k1p = g(q, p)
    k2q, k2p = g(q + dt / 2 * k1q, p + dt / 2 * k1p)
    k3q, k3p = g(q + dt / 2 * k2q, p + dt / 2 * k2p)
    k4q, k4p = g(q + dt * k3q, p + dt * k3p)
    return (
        q + dt / 6 * (k1q + 2 * k2q + 2 * k3q + k4q),
        p + dt / 6 * (k1p + 2 * k2p + 2 * k3p + k4p),
    )


def classical_energy_field(
    x_field: ComplexField, potential: np.ndarray, hbar: float, mass: float
) -> np.ndarray:
    """Energy field -(hbar^2/2m)(grad X)^2/X^2 + V; NaN at unusable nodes.

    Constant (= E) for a phase wave built from a conserved-energy action.
    """
    values = x_field.values
    usable = _masked_interior(values)
    grad = derivative(x_field, 1).values
    out = np.full(x_field.grid.n_points, np.nan, dtype=complex)
    v = np.asarray(potential, dtype=float)
    out[usable] = (
        -(hbar**2 / (2 * mass)) * (grad[usable] / values[usable]) ** 2 + v[usable]
    )
    return out
