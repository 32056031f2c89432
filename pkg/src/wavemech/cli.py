"""Batch experiment runner: every capability as a subcommand writing CSV or
JSON for offline plotting.

Exit codes: 0 success, 2 configuration problem (bad flags, bad config file,
unwritable output), 3 numerical failure.  A one-line summary (experiment,
wall time, primary metric) goes to standard output.  Output files carry no
timestamps and all floats are rendered with 17 significant digits, so a rerun
with the same configuration and seed is byte-identical.

Configuration may come from a JSON file (--config) with the blocks
``grid``, ``constants``, ``potential``, ``output`` plus experiment keys at
the top level; unknown keys are rejected.  Every config entry has a flag
equivalent, and flags override the file.
"""
from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

import numpy as np

from . import classical as cl
from . import measurement as ms
from . import operators as ops
from . import optics as opt
from . import pauli as pl
from . import quantum as qm
from .expressions import ExpressionError, evaluate_expression
from .grids import ComplexField, Grid1D, NumericalError, make_state, norm
from .io import format_float, write_csv, write_json

__all__ = ["ConfigError", "run", "main"]


class ConfigError(Exception):
    """Invalid configuration: unknown keys, bad values, missing output."""


# ------------------------------------------------------------------ schemas

_GRID_KEYS = {"x_min": float, "x_max": float, "n_points": int, "boundary": str}
_CONST_KEYS = {"hbar": float, "mass": float, "light_speed": float, "omega": float}
_OUTPUT_KEYS = {"path": str, "format": str}
_POTENTIAL_KEYS = {"kind": str, "expression": str, "offset": float}

_COMMON_BLOCKS = {
    "grid": _GRID_KEYS,
    "constants": _CONST_KEYS,
    "output": _OUTPUT_KEYS,
    "seed": int,
}

_SCHEMAS: dict[str, dict] = {
    "optics-limit": {
        **_COMMON_BLOCKS,
        "n_expression": str,
        "lambda_bars": list,
    },
    "classical": {
        **_COMMON_BLOCKS,
        "mode": str,
        "energy": float,
        "q0": float,
        "t_max": float,
        "dt": float,
        "time": float,
    },
    "eigensolve": {
        **_COMMON_BLOCKS,
        "potential": _POTENTIAL_KEYS,
        "levels": int,
    },
    "propagate": {
        **_COMMON_BLOCKS,
        "potential": _POTENTIAL_KEYS,
        "state": str,
        "dt": float,
        "steps": int,
        "record_every": int,
    },
    "expand": {
        **_COMMON_BLOCKS,
        "potential": _POTENTIAL_KEYS,
        "state": str,
        "mode": str,
        "basis": str,
        "kernel_x": float,
        "kernel_n": int,
    },
    "fields": {
        **_COMMON_BLOCKS,
        "potential": _POTENTIAL_KEYS,
        "state": str,
        "observable": str,
        "floor": float,
    },
    "measure": {
        **_COMMON_BLOCKS,
        "potential": _POTENTIAL_KEYS,
        "state": str,
        "mode": str,
        "trials": int,
    },
    "pauli": {
        **_COMMON_BLOCKS,
        "b_field": list,
        "g_factor": float,
        "spin": str,
        "dt": float,
        "steps": int,
        "record_every": int,
    },
}

_DEFAULT_GRIDS = {
    "optics-limit": {"x_min": 0.0, "x_max": 1.0, "n_points": 8193, "boundary": "dirichlet"},
    "classical": {"x_min": -0.75, "x_max": 0.75, "n_points": 2048, "boundary": "dirichlet"},
    "pauli": {"x_min": 0.0, "x_max": 1.0, "n_points": 32, "boundary": "periodic"},
}
_QUANTUM_GRID = {"x_min": -12.0, "x_max": 12.0, "n_points": 2048, "boundary": "dirichlet"}

_DEFAULTS: dict[str, dict] = {
    "optics-limit": {
        "n_expression": "1+0.1*x",
        "lambda_bars": [0.1, 0.05, 0.025, 0.0125],
    },
    "classical": {
        "mode": "trajectory",
        "energy": 0.5,
        "q0": 0.0,
        "t_max": 2 * np.pi,
        "dt": 2 * np.pi / 1024,
        "time": 0.0,
    },
    "eigensolve": {"potential": None, "levels": 10},
    "propagate": {
        "potential": None,
        "state": "ground",
        "dt": 0.001,
        "steps": 1000,
        "record_every": 10,
    },
    "expand": {
        "potential": None,
        "state": "ground",
        "mode": "coefficients",
        "basis": "energy:16",
        "kernel_x": 0.0,
        "kernel_n": 64,
    },
    "fields": {"potential": None, "state": "ground", "observable": "energy", "floor": 1e-3},
    "measure": {
        "potential": None,
        "state": "superposition:0.3,0.7",
        "mode": "sample",
        "trials": 100000,
    },
    "pauli": {
        "b_field": [0.0, 0.0, 1.0],
        "g_factor": 2.0,
        "spin": "x+",
        "dt": None,
        "steps": 2048,
        "record_every": 8,
    },
}

_DEFAULT_CONSTANTS = {"hbar": 1.0, "mass": 1.0, "light_speed": 1.0, "omega": 1.0}


def _default_settings(command: str) -> dict:
    grid = dict(_DEFAULT_GRIDS.get(command, _QUANTUM_GRID))
    settings = {
        "grid": grid,
        "constants": dict(_DEFAULT_CONSTANTS),
        "output": {"path": None, "format": None},
        "seed": 0,
    }
    for key, value in _DEFAULTS[command].items():
        if key == "potential":
            settings["potential"] = {"kind": "harmonic", "expression": None, "offset": 0.0}
        else:
            settings[key] = value
    return settings


def _coerce(value, kind, where: str):
    try:
        if kind is float:
            if isinstance(value, bool):
                raise TypeError
            return float(value)
        if kind is int:
            if isinstance(value, bool) or (isinstance(value, float) and value != int(value)):
                raise TypeError
            return int(value)
        if kind is str:
            if not isinstance(value, str):
                raise TypeError
            return value
        if kind is list:
            if not isinstance(value, (list, tuple)):
                raise TypeError
            return [float(v) for v in value]
    except (TypeError, ValueError):
        pass
    raise ConfigError(f"bad value for {where!r}: {value!r}")


def _apply_config(settings: dict, config: dict, schema: dict) -> None:
    if not isinstance(config, dict):
        raise ConfigError("config file must hold a JSON object")
    for key, value in config.items():
        if key not in schema:
            raise ConfigError(f"unknown config key {key!r}")
        spec = schema[key]
        if isinstance(spec, dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config block {key!r} must be an object")
            block = settings.setdefault(key, {})
            for sub, sub_value in value.items():
                if sub not in spec:
                    raise ConfigError(f"unknown config key {key}.{sub!r}")
                block[sub] = _coerce(sub_value, spec[sub], f"{key}.{sub}")
        else:
            settings[key] = _coerce(value, spec, key)


def _load_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc


# ------------------------------------------------------------------ parsing

def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavemech",
        description="Numerical experiments linking ray optics and classical "
        "action waves to quantum wave mechanics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_potential: bool = False) -> None:
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--out", help="output file path")
        p.add_argument("--format", choices=["csv", "json"], help="output format")
        p.add_argument("--seed", type=int, help="RNG seed where sampling is involved")
        p.add_argument("--x-min", type=float, dest="x_min")
        p.add_argument("--x-max", type=float, dest="x_max")
        p.add_argument("--n-points", type=int, dest="n_points")
        p.add_argument("--boundary", choices=["dirichlet", "periodic"])
        p.add_argument("--hbar", type=float)
        p.add_argument("--mass", type=float)
        p.add_argument("--omega", type=float)
        p.add_argument("--light-speed", type=float, dest="light_speed")
        if with_potential:
            p.add_argument(
                "--potential",
                help="harmonic | box | zero | an expression in x (e.g. '0.5*x^2')",
            )
            p.add_argument("--potential-offset", type=float, dest="potential_offset")

    p = sub.add_parser("optics-limit", help="wave-vs-ray phase error as the wavelength shrinks")
    common(p)
    p.add_argument("--n", dest="n_expression", help="refractive index profile n(x)")
    p.add_argument("--lambda-bars", type=_float_list, dest="lambda_bars",
                   help="comma-separated reduced wavelengths, strictly decreasing")

    p = sub.add_parser("classical", help="action-wave trajectories and residuals")
    common(p)
    p.add_argument("--mode", choices=["trajectory", "residual"])
    p.add_argument("--energy", type=float)
    p.add_argument("--q0", type=float)
    p.add_argument("--t-max", type=float, dest="t_max")
    p.add_argument("--dt", type=float)
    p.add_argument("--time", type=float, help="evaluation time for residual mode")

    p = sub.add_parser("eigensolve", help="lowest energy levels of a potential")
    common(p, with_potential=True)
    p.add_argument("--levels", type=int)

    p = sub.add_parser("propagate", help="Crank-Nicolson time evolution with observables")
    common(p, with_potential=True)
    p.add_argument("--state")
    p.add_argument("--dt", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--record-every", type=int, dest="record_every")

    p = sub.add_parser("expand", help="basis expansion coefficients or closure kernels")
    common(p, with_potential=True)
    p.add_argument("--state")
    p.add_argument("--mode", choices=["coefficients", "kernel"])
    p.add_argument("--basis", help="energy:<levels> or momentum:<max index>")
    p.add_argument("--kernel-x", type=float, dest="kernel_x")
    p.add_argument("--kernel-n", type=int, dest="kernel_n")

    p = sub.add_parser("fields", help="pointwise observable fields on a state")
    common(p, with_potential=True)
    p.add_argument("--state")
    p.add_argument("--observable", choices=["position", "momentum", "energy"])
    p.add_argument("--floor", type=float, help="amplitude floor for the ratio mask")

    p = sub.add_parser("measure", help="Born probabilities and projective sampling")
    common(p, with_potential=True)
    p.add_argument("--state")
    p.add_argument("--mode", choices=["sample", "probabilities"])
    p.add_argument("--trials", type=int)

    p = sub.add_parser("pauli", help="spinor precession under a magnetic field")
    common(p)
    p.add_argument("--b-field", type=_float_list, dest="b_field", help="Bx,By,Bz")
    p.add_argument("--g-factor", type=float, dest="g_factor")
    p.add_argument("--spin", choices=["x+", "y+", "z+", "z-"])
    p.add_argument("--dt", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--record-every", type=int, dest="record_every")

    return parser


_FLAG_MAP = {
    "x_min": ("grid", "x_min"),
    "x_max": ("grid", "x_max"),
    "n_points": ("grid", "n_points"),
    "boundary": ("grid", "boundary"),
    "hbar": ("constants", "hbar"),
    "mass": ("constants", "mass"),
    "omega": ("constants", "omega"),
    "light_speed": ("constants", "light_speed"),
    "out": ("output", "path"),
    "format": ("output", "format"),
    "potential": ("potential", "kind"),
    "potential_offset": ("potential", "offset"),
}


def _settings_from(args: argparse.Namespace) -> dict:
    command = args.command
    settings = _default_settings(command)
    if args.config is not None:
        _apply_config(settings, _load_config_file(args.config), _SCHEMAS[command])
    for name, value in vars(args).items():
        if name in ("command", "config") or value is None:
            continue
        if name in _FLAG_MAP:
            block, key = _FLAG_MAP[name]
            if block == "potential" and key == "kind":
                kinds = ("harmonic", "box", "zero")
                if value in kinds:
                    settings["potential"].update(kind=value, expression=None)
                else:
                    settings["potential"].update(kind="expression", expression=value)
            else:
                settings[block][key] = value
        else:
            settings[name] = value
    return settings


# ------------------------------------------------------------- state setup

def _build_grid(settings: dict) -> Grid1D:
    g = settings["grid"]
    return Grid1D(g["x_min"], g["x_max"], g["n_points"], g["boundary"])


def _build_potential(settings: dict, grid: Grid1D) -> qm.PotentialSpec:
    block = settings["potential"]
    kind = block["kind"]
    offset = block.get("offset", 0.0)
    omega = settings["constants"]["omega"]
    if kind in ("zero", "box"):
        return qm.PotentialSpec(kind, grid, offset=offset)
    if kind == "harmonic":
        return qm.PotentialSpec("harmonic", grid, omega=omega, offset=offset)
    if kind == "expression":
        expr = block.get("expression")
        if not expr:
            raise ConfigError("potential kind 'expression' needs expression text")
        values = np.asarray(evaluate_expression(expr, grid.x), dtype=float)
        if not np.all(np.isfinite(values)):
            raise NumericalError("potential expression produced non-finite samples")
        return qm.PotentialSpec("tabulated", grid, values=values, offset=offset)
    raise ConfigError(f"unknown potential kind {kind!r}")


def _parse_state_spec(text: str) -> tuple[str, list[float]]:
    name, _, arg_text = text.partition(":")
    params = []
    if arg_text:
        try:
            params = [float(p) for p in arg_text.split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad state parameters in {text!r}") from exc
    return name, params


def _build_state(
    spec: str, grid: Grid1D, potential: qm.PotentialSpec, hbar: float, mass: float
) -> ComplexField:
    name, params = _parse_state_spec(spec)
    omega = potential.omega
    x = grid.x
    if name == "ground":
        return qm.eigensolve(qm.build_hamiltonian(potential, hbar, mass), 1).eigenfunctions[0]
    if name == "eigen":
        level = int(params[0]) if params else 0
        if level < 0:
            raise ConfigError("eigenstate level must be >= 0")
        decomp = qm.eigensolve(qm.build_hamiltonian(potential, hbar, mass), level + 1)
        return decomp.eigenfunctions[level]
    if name == "coherent":
        x0 = params[0] if params else 1.0
        values = np.exp(-mass * omega * (x - x0) ** 2 / (2 * hbar))
        return make_state(grid, values)
    if name == "gaussian":
        x0 = params[0] if params else 0.0
        sigma = params[1] if len(params) > 1 else 1.0
        if sigma <= 0:
            raise ConfigError("gaussian width must be positive")
        values = np.exp(-((x - x0) ** 2) / (4 * sigma**2))
        return make_state(grid, values)
    if name == "superposition":
        if not params:
            raise ConfigError("superposition needs probability weights")
        weights = np.asarray(params, dtype=float)
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
            raise ConfigError("superposition weights must be >= 0 and sum to 1")
        decomp = qm.eigensolve(qm.build_hamiltonian(potential, hbar, mass), len(weights))
        values = np.zeros(grid.n_points, dtype=complex)
        for w, f in zip(weights, decomp.eigenfunctions):
            values += np.sqrt(w) * f.values
        return make_state(grid, values)
    raise ConfigError(f"unknown state {spec!r}")


def _require_out(settings: dict) -> Path:
    path = settings["output"]["path"]
    if not path:
        raise ConfigError("no output path given (use --out or output.path)")
    return Path(path)


# ------------------------------------------------------------- experiments

def _run_optics_limit(settings: dict) -> str:
    grid = _build_grid(settings)
    samples = np.asarray(evaluate_expression(settings["n_expression"], grid.x), dtype=float)
    if not np.all(np.isfinite(samples)):
        raise NumericalError("refractive profile produced non-finite samples")
    profile = opt.RefractiveProfile.tabulated(grid, samples)
    lam = np.asarray(settings["lambda_bars"], dtype=float)
    study = opt.eikonal_limit_study(profile, lam, grid)
    study.to_csv(_require_out(settings))
    if len(lam) > 1:
        slope, _ = np.polyfit(np.log(study.lambda_bars), np.log(study.max_phase_errors), 1)
        return f"order={slope:.3f}"
    return f"max_phase_error={study.max_phase_errors[0]:.3e}"


def _run_classical(settings: dict) -> str:
    constants = settings["constants"]
    action = cl.ActionFunction.harmonic_oscillator(
        settings["energy"], constants["mass"], constants["omega"]
    )
    if settings["mode"] == "trajectory":
        trajectory = cl.integrate_trajectory(
            action, settings["q0"], (0.0, settings["t_max"]), settings["dt"]
        )
        energies = trajectory.energies(action)
        rows = zip(trajectory.times, trajectory.positions, trajectory.momenta, energies)
        write_csv(_require_out(settings), ("t", "q", "p", "energy"), rows)
        drift = float(np.abs(energies - action.energy).max())
        return f"energy_drift={drift:.3e}"
    grid = _build_grid(settings)
    hbar = constants["hbar"]
    t = settings["time"]
    x_field = cl.classical_wavefunction(action, grid, t, hbar)
    dx_dt = cl.analytic_time_derivative(action, grid, t, hbar)
    v = 0.5 * constants["mass"] * constants["omega"] ** 2 * grid.x**2
    residual = cl.classical_wave_residual(x_field, v, hbar, constants["mass"], dx_dt)
    keep = np.isfinite(residual)
    write_csv(
        _require_out(settings),
        ("x", "residual_abs"),
        zip(grid.x[keep], residual[keep]),
    )
    return f"max_residual={np.nanmax(residual):.3e}"


def _run_eigensolve(settings: dict) -> str:
    grid = _build_grid(settings)
    constants = settings["constants"]
    potential = _build_potential(settings, grid)
    h = qm.build_hamiltonian(potential, constants["hbar"], constants["mass"])
    decomp = qm.eigensolve(h, settings["levels"])
    rows = list(enumerate(decomp.eigenvalues))
    write_csv(_require_out(settings), ("n", "E_n"), rows)
    return f"E_0={decomp.eigenvalues[0]:.6g}"


def _run_propagate(settings: dict) -> str:
    grid = _build_grid(settings)
    constants = settings["constants"]
    hbar, mass = constants["hbar"], constants["mass"]
    potential = _build_potential(settings, grid)
    psi0 = _build_state(settings["state"], grid, potential, hbar, mass)
    _, record = qm.propagate_recorded(
        psi0, potential, hbar, mass, settings["dt"], settings["steps"],
        settings["record_every"],
    )
    rows = zip(record.times, record.norms, record.x_means, record.p_means, record.e_means)
    write_csv(_require_out(settings), ("t", "norm", "x_mean", "p_mean", "E_mean"), rows)
    drift = float(np.abs(record.norms - 1.0).max())
    return f"norm_drift={drift:.3e}"


def _build_basis(spec: str, grid: Grid1D, potential: qm.PotentialSpec,
                 hbar: float, mass: float) -> qm.SpectralDecomposition:
    name, params = _parse_state_spec(spec)
    if name == "energy":
        levels = int(params[0]) if params else 16
        return qm.eigensolve(qm.build_hamiltonian(potential, hbar, mass), levels)
    if name == "momentum":
        i_max = int(params[0]) if params else 16
        return ops.momentum_basis(grid, i_max, hbar)
    raise ConfigError(f"unknown basis {spec!r}")


def _run_expand(settings: dict) -> str:
    grid = _build_grid(settings)
    constants = settings["constants"]
    hbar, mass = constants["hbar"], constants["mass"]
    potential = _build_potential(settings, grid)
    basis = _build_basis(settings["basis"], grid, potential, hbar, mass)
    if settings["mode"] == "kernel":
        subset = ops.centered_subset(basis, min(settings["kernel_n"], len(basis)))
        kernel = ops.completeness_kernel(subset, settings["kernel_x"])
        rows = zip(grid.x, kernel.values.real, kernel.values.imag)
        write_csv(_require_out(settings), ("x", "re_K", "im_K"), rows)
        return f"kernel_peak={np.abs(kernel.values).max():.6g}"
    psi = _build_state(settings["state"], grid, potential, hbar, mass)
    coeffs = ops.expand(psi, basis)
    write_csv(
        _require_out(settings),
        ("label", "re_c", "im_c", "abs2_c"),
        coeffs.to_rows(),
    )
    return f"total_probability={coeffs.total_probability:.9g}"


def _run_fields(settings: dict) -> str:
    grid = _build_grid(settings)
    constants = settings["constants"]
    hbar, mass = constants["hbar"], constants["mass"]
    potential = _build_potential(settings, grid)
    psi = _build_state(settings["state"], grid, potential, hbar, mass)
    observable = settings["observable"]
    if observable == "position":
        op = ops.position_operator(grid)
    elif observable == "momentum":
        op = ops.momentum_operator(grid, hbar)
    else:
        op = ops.hamiltonian_operator(grid, potential.samples(mass), hbar, mass)
    field = ms.observable_field(psi, op, floor=settings["floor"])
    values = np.where(field.masked, 0.0, field.values)
    rows = zip(grid.x, values.real, values.imag, field.masked.astype(int))
    write_csv(_require_out(settings), ("x", "re_field", "im_field", "masked"), rows)
    op_route = ms.expectation_operator(psi, op).real
    field_route = ms.expectation_field(psi, field).value.real
    return f"route_difference={abs(op_route - field_route):.3e}"


def _run_measure(settings: dict) -> str:
    grid = _build_grid(settings)
    constants = settings["constants"]
    hbar, mass = constants["hbar"], constants["mass"]
    potential = _build_potential(settings, grid)
    name, params = _parse_state_spec(settings["state"])
    levels = max(len(params), 2) if name == "superposition" else 8
    psi = _build_state(settings["state"], grid, potential, hbar, mass)
    basis = qm.eigensolve(qm.build_hamiltonian(potential, hbar, mass), levels)
    if settings["mode"] == "probabilities":
        table = ms.eigenvalue_probabilities(psi, basis)
        write_csv(
            _require_out(settings),
            ("eigenvalue", "probability", "degeneracy"),
            table.to_rows(),
        )
        return f"outcomes={len(table)}"
    table, counts = ms.sample_outcomes(psi, basis, settings["trials"], settings["seed"])
    payload = {
        "seed": settings["seed"],
        "n_trials": settings["trials"],
        "counts": {
            format_float(outcome): int(count)
            for outcome, count in zip(table.outcomes, counts)
        },
    }
    write_json(_require_out(settings), payload)
    worst = float(np.abs(counts / settings["trials"] - table.probabilities).max())
    return f"max_frequency_error={worst:.3e}"


def _SPIN_PRESETS(name: str) -> tuple[complex, complex]:
    presets = {
        "x+": (1.0, 1.0),
        "y+": (1.0, 1.0j),
        "z+": (1.0, 0.0),
        "z-": (0.0, 1.0),
    }
    return presets[name]


def _run_pauli(settings: dict) -> str:
    grid = _build_grid(settings)
    constants = settings["constants"]
    hbar, mass = constants["hbar"], constants["mass"]
    b = settings["b_field"]
    if len(b) != 3:
        raise ConfigError("b_field needs exactly three components")
    mu_s = pl.spin_magnetic_moment(
        settings["g_factor"], 1.0, hbar, mass, constants["light_speed"]
    )
    fields = pl.EMFieldConfig(
        b_field=np.asarray(b, dtype=float),
        mu_s=mu_s,
        g_factor=settings["g_factor"],
        light_speed=constants["light_speed"],
    )
    dt = settings["dt"]
    if dt is None:
        b_norm = float(np.linalg.norm(b))
        omega_larmor = 2 * mu_s * b_norm / hbar if b_norm > 0 else 1.0
        dt = (2 * np.pi / omega_larmor) / 256
    weight_plus, weight_minus = _SPIN_PRESETS(settings["spin"])
    spinor = pl.uniform_spinor(grid, weight_plus, weight_minus)
    final, record = pl.pauli_propagate(
        spinor, fields, hbar, mass, dt, settings["steps"], settings["record_every"]
    )
    write_csv(
        _require_out(settings),
        ("t", "sx", "sy", "sz", "norm", "pop_plus", "pop_minus"),
        record.to_rows(),
    )
    drift = float(np.abs(record.norms - 1.0).max())
    return f"norm_drift={drift:.3e}"


_COMMANDS = {
    "optics-limit": _run_optics_limit,
    "classical": _run_classical,
    "eigensolve": _run_eigensolve,
    "propagate": _run_propagate,
    "expand": _run_expand,
    "fields": _run_fields,
    "measure": _run_measure,
    "pauli": _run_pauli,
}


def run(argv=None) -> int:
    """Execute one experiment; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        settings = _settings_from(args)
        metric = _COMMANDS[args.command](settings)
    except ConfigError as exc:
        print(f"config error: {exc}")
        return 2
    except (ExpressionError, ValueError, KeyError, IndexError, OSError) as exc:
        print(f"config error: {exc}")
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}")
        return 3
    elapsed = time.perf_counter() - started
    print(f"{args.command}: wall={elapsed:.3f}s {metric}")
    return 0


def main() -> None:
    raise SystemExit(run())
