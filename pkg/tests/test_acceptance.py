"""Acceptance scorecard: one end-to-end test per numbered guarantee.

Each test exercises a full capability chain at its stated tolerance, so a
verbose run prints one pass/fail line per criterion.  Criteria that time a
computation use wall-clock bounds generous enough for a loaded machine.
"""
import time

import numpy as np

from wavemech.cli import run
from wavemech.classical import (
    ActionFunction,
    analytic_time_derivative,
    classical_wave_residual,
    classical_wavefunction,
    integrate_trajectory,
)
from wavemech.grids import ComplexField, Grid1D, inner_product, norm, normalize
from wavemech.measurement import (
    eigenvalue_probabilities,
    expectation_field,
    expectation_operator,
    measure_and_collapse,
    observable_field,
    sample_outcomes,
)
from wavemech.operators import (
    centered_subset,
    gradient_operator,
    hamiltonian_operator,
    hermiticity_check,
    kernel_apply,
    momentum_basis,
    momentum_operator,
    position_operator,
)
from wavemech.optics import (
    EikonalSolution,
    RefractiveProfile,
    eikonal_integrate,
    eikonal_limit_study,
    em_eikonal_residual,
)
from wavemech.pauli import (
    EMFieldConfig,
    SpinorField,
    pauli_propagate,
    spin_magnetic_moment,
    uniform_spinor,
)
from wavemech.quantum import (
    CrankNicolson,
    PotentialSpec,
    build_hamiltonian,
    eigensolve,
    harmonic_grid,
    linearization_demo,
    propagate,
    quantum_hj_residual,
    quantum_hj_residual_terms,
)


def test_criterion_01_ray_limit_error_shrinks_linearly_with_wavelength():
    """Wave-vs-ray optical path error over a gradient medium: monotone in
    the reduced wavelength, first order (+/- 0.3), and fast."""
    profile = RefractiveProfile.linear(1.0, 0.1)
    grid = Grid1D(0.0, 1.0, 8193)
    lambda_bars = np.array([0.1, 0.05, 0.025, 0.0125])
    start = time.perf_counter()
    study = eikonal_limit_study(profile, lambda_bars, grid)
    elapsed = time.perf_counter() - start
    errors = study.max_phase_errors
    assert np.all(np.diff(errors) < 0)
    order = np.polyfit(np.log(lambda_bars), np.log(errors), 1)[0]
    assert 0.7 <= order <= 1.3
    assert elapsed < 5.0


def test_criterion_02_summed_ray_solutions_violate_the_ray_equation():
    """Each optical-path root passes the ray equation on its own; their sum
    does not (the equation is nonlinear), by more than a factor of ten."""
    profile = RefractiveProfile.linear(1.0, 0.1)
    grid = Grid1D(0.0, 1.0, 2049)
    lambda_bar = 0.05
    right = eikonal_integrate(profile, grid, lambda_bar)
    left = EikonalSolution(grid, lambda_bar, -right.path)
    single_right = np.nanmax(em_eikonal_residual(right, profile))
    single_left = np.nanmax(em_eikonal_residual(left, profile))
    summed = EikonalSolution(grid, lambda_bar, right.path + left.path)
    assert single_left < 10 * single_right  # the second root is just as good
    assert np.nanmax(em_eikonal_residual(summed, profile)) > 10 * single_right


def test_criterion_03_phase_wave_solves_single_energies_not_superpositions():
    grid = Grid1D(-0.75, 0.75, 2048)
    potential = 0.5 * grid.x**2
    ground = ActionFunction.harmonic_oscillator(energy=0.5)
    x1 = classical_wavefunction(ground, grid, 0.0, 1.0)
    dx1 = analytic_time_derivative(ground, grid, 0.0, 1.0)
    peak1 = np.nanmax(classical_wave_residual(x1, potential, 1.0, 1.0, dx1))
    assert peak1 < 1e-6 * ground.energy

    excited = ActionFunction.harmonic_oscillator(energy=1.5)
    x2 = classical_wavefunction(excited, grid, 0.0, 1.0)
    dx2 = analytic_time_derivative(excited, grid, 0.0, 1.0)
    s = 1.0 / np.sqrt(2.0)
    x_sum = ComplexField(grid, s * (x1.values + x2.values), time=0.0)
    dx_sum = ComplexField(grid, s * (dx1.values + dx2.values), time=0.0)
    peak_sum = np.nanmax(classical_wave_residual(x_sum, potential, 1.0, 1.0, dx_sum))
    assert peak_sum > 1e3 * peak1


def test_criterion_04_classical_chain_does_not_depend_on_hbar():
    """Doubling hbar rescales the phase wave but leaves its defect at the
    discretization level, and the trajectory route has no hbar input at all:
    repeated runs must agree bit for bit."""
    grid = Grid1D(-0.75, 0.75, 2048)
    potential = 0.5 * grid.x**2
    action = ActionFunction.harmonic_oscillator(energy=0.5)
    residuals = {}
    for hbar in (1.0, 2.0):
        x = classical_wavefunction(action, grid, 0.0, hbar)
        dx = analytic_time_derivative(action, grid, 0.0, hbar)
        residuals[hbar] = classical_wave_residual(x, potential, hbar, 1.0, dx)
    peaks = {h: np.nanmax(r) for h, r in residuals.items()}
    assert max(peaks.values()) < 1e-6 * action.energy
    spread = np.nanmax(np.abs(residuals[1.0] - residuals[2.0]))
    assert spread < max(peaks.values())  # differ by less than either defect

    dt = 2 * np.pi / 512
    first = integrate_trajectory(action, 0.3, (0.0, 2 * np.pi), dt)
    second = integrate_trajectory(action, 0.3, (0.0, 2 * np.pi), dt)
    assert np.array_equal(first.positions, second.positions)
    assert np.array_equal(first.momenta, second.momenta)


def test_criterion_05_trajectory_matches_the_closed_form_orbit():
    action = ActionFunction.harmonic_oscillator(energy=0.5)  # amplitude 1
    period = 2 * np.pi
    traj = integrate_trajectory(action, 0.3, (0.0, period), period / 512)
    exact = action.amplitude * np.sin(traj.times + np.arcsin(0.3))
    assert np.abs(traj.positions - exact).max() / action.amplitude < 1e-6
    drift = np.abs(traj.energies(action) - action.energy).max()
    assert drift / action.energy < 1e-8


def test_criterion_06_spectra_match_closed_forms_for_box_and_oscillator():
    hbar = mass = 1.0
    box_grid = Grid1D(0.0, 1.0, 2048)
    start = time.perf_counter()
    box = eigensolve(build_hamiltonian(PotentialSpec("box", box_grid), hbar, mass), 10)
    box_elapsed = time.perf_counter() - start
    quantum_number = np.arange(1, 11)
    exact_box = quantum_number**2 * np.pi**2 * hbar**2 / (2 * mass * box_grid.length**2)
    assert np.abs(box.eigenvalues / exact_box - 1.0).max() < 1e-3
    assert box_elapsed < 10.0

    osc_grid = harmonic_grid(n_points=2048)
    start = time.perf_counter()
    osc = eigensolve(build_hamiltonian(PotentialSpec("harmonic", osc_grid), hbar, mass), 10)
    osc_elapsed = time.perf_counter() - start
    exact_osc = (np.arange(10) + 0.5) * hbar
    assert np.abs(osc.eigenvalues / exact_osc - 1.0).max() < 1e-3
    assert osc_elapsed < 10.0


def test_criterion_07_propagator_conserves_norm_and_dephases_at_minus_e_t():
    grid = harmonic_grid(n_points=1024)
    ham = build_hamiltonian(PotentialSpec("harmonic", grid), 1.0, 1.0)
    dec = eigensolve(ham, 1)
    psi0, e0 = dec.eigenfunctions[0], dec.eigenvalues[0]

    period = 2 * np.pi
    steps_per_period = 6400
    stepper = CrankNicolson(ham, period / steps_per_period)
    values = psi0.values.copy()
    for _ in range(steps_per_period):
        values = stepper.step_values(values)
    evolved = ComplexField(grid, values, time=period)
    overlap = inner_product(psi0, evolved)
    # phase should have advanced by exactly -E0 T (hbar = 1)
    assert abs(np.angle(overlap * np.exp(1j * e0 * period))) < 1e-4

    for _ in range(10_000 - steps_per_period):
        values = stepper.step_values(values)
    assert abs(norm(ComplexField(grid, values)) - 1.0) < 1e-8


def test_criterion_08_action_residual_refines_and_correction_scales_with_hbar():
    """On propagated states the action-form defect is pure discretization
    error (quarters when the grid doubles); with the state held fixed, the
    term separating the linear and nonlinear equations is proportional to
    hbar (log-log slope 1 +/- 0.1 over a decade)."""
    peaks = {}
    for n_points in (1024, 2048):
        grid = harmonic_grid(n_points=n_points)
        pot = PotentialSpec("harmonic", grid)
        psi0 = eigensolve(build_hamiltonian(pot, 1.0, 1.0), 1).eigenfunctions[0]
        dt = 0.001
        before = propagate(psi0, pot, 1.0, 1.0, dt, 100)
        mid = propagate(psi0, pot, 1.0, 1.0, dt, 101)
        after = propagate(psi0, pot, 1.0, 1.0, dt, 102)
        dpsi = ComplexField(grid, (after.values - before.values) / (2 * dt), time=mid.time)
        res = quantum_hj_residual(mid, pot.samples(1.0), 1.0, 1.0, dpsi, floor=1e-2)
        peaks[n_points] = np.nanmax(res)
    assert 3.0 < peaks[1024] / peaks[2048] < 5.0

    grid = Grid1D(-0.75, 0.75, 2048)
    action = ActionFunction.harmonic_oscillator(energy=0.5)
    potential = 0.5 * grid.x**2
    hbars = np.geomspace(0.1, 1.0, 6)
    magnitudes = []
    for hbar in hbars:
        x = classical_wavefunction(action, grid, 0.1, hbar)
        dx = analytic_time_derivative(action, grid, 0.1, hbar)
        _, correction = quantum_hj_residual_terms(x, potential, hbar, 1.0, dx, floor=1e-2)
        magnitudes.append(np.nanmax(np.abs(correction)))
    slope = np.polyfit(np.log(hbars), np.log(magnitudes), 1)[0]
    assert abs(slope - 1.0) < 0.1


def test_criterion_09_residual_difference_equals_the_correction_term():
    grid = Grid1D(-0.75, 0.75, 4096)
    action = ActionFunction.harmonic_oscillator(energy=0.5)
    x = classical_wavefunction(action, grid, 0.0, 1.0)
    dx = analytic_time_derivative(action, grid, 0.0, 1.0)
    result = linearization_demo(x, 0.5 * grid.x**2, 1.0, 1.0, dx)
    scale = np.nanmax(np.abs(result.correction_term))
    assert scale > 0
    assert np.nanmax(result.identity_error) < 1e-6 * scale


def test_criterion_10_momentum_and_energy_are_hermitian_the_control_is_not():
    grid = Grid1D(0.0, 1.0, 257)
    assert hermiticity_check(momentum_operator(grid), 100, 0) < 1e-8
    energy_op = hamiltonian_operator(grid, grid.x**2)
    assert hermiticity_check(energy_op, 100, 0) < 1e-8
    control = gradient_operator(grid)
    defects = [hermiticity_check(control, 1, seed) for seed in range(100)]
    assert min(defects) > 1e-2  # every seed exposes the asymmetry


def test_criterion_11_reproduction_error_falls_as_the_basis_grows():
    grid = Grid1D(0.0, 2 * np.pi, 256, boundary="periodic")
    basis = momentum_basis(grid, 40)
    target_values = np.exp(np.sin(grid.x)) + 0.1 / (1.2 - np.cos(grid.x))
    target = normalize(ComplexField(grid, target_values.astype(complex)))
    errors = []
    for size in (8, 16, 32, 64):
        subset = centered_subset(basis, size)
        reproduced = kernel_apply(subset, target)
        errors.append(norm(ComplexField(grid, target.values - reproduced.values)))
    assert all(a > b for a, b in zip(errors, errors[1:]))


def test_criterion_12_both_expectation_routes_agree_on_random_states():
    grid = harmonic_grid(n_points=1024)
    pot = PotentialSpec("harmonic", grid)
    dec = eigensolve(build_hamiltonian(pot, 1.0, 1.0), 6)
    members = np.stack([f.values for f in dec.eigenfunctions])
    observables = (
        position_operator(grid),
        momentum_operator(grid),
        hamiltonian_operator(grid, pot.samples(1.0)),
    )
    rng = np.random.default_rng(2026)
    for _ in range(20):
        coeffs = rng.normal(size=6) + 1j * rng.normal(size=6)
        psi = normalize(ComplexField(grid, coeffs @ members))
        for op in observables:
            op_route = expectation_operator(psi, op)
            field_route = expectation_field(psi, observable_field(psi, op, floor=1e-6))
            assert field_route.status == "ok"
            assert field_route.masked_probability < 1e-10
            assert abs(field_route.value - op_route) <= 1e-8 * max(1.0, abs(op_route))


def test_criterion_13_born_counts_within_3_sigma_and_collapse_repeats():
    grid = harmonic_grid(n_points=1024)
    dec = eigensolve(build_hamiltonian(PotentialSpec("harmonic", grid), 1.0, 1.0), 2)
    psi = normalize(
        ComplexField(
            grid,
            np.sqrt(0.3) * dec.eigenfunctions[0].values
            + np.sqrt(0.7) * dec.eigenfunctions[1].values,
        )
    )
    n_trials = 100_000
    _, counts = sample_outcomes(psi, dec, n_trials, 42)
    for weight, count in zip((0.3, 0.7), counts):
        sigma = np.sqrt(n_trials * weight * (1 - weight))
        assert abs(count - n_trials * weight) < 3 * sigma

    first = measure_and_collapse(psi, dec, 7)
    post = eigenvalue_probabilities(first.post_state, dec)
    assert abs(post.probabilities[first.outcome_index] - 1.0) < 1e-10
    repeats = [
        measure_and_collapse(first.post_state, dec, seed).outcome_index
        for seed in range(50)
    ]
    assert repeats == [first.outcome_index] * 50  # re-measurement never moves


def _larmor_record(hbar: float):
    """Uniform +x spinor precessing about a unit z field for two periods.

    The rate is g e B / (2 m c): hbar cancels between the moment and the
    phase factor, so runs at different hbar share one set of times.
    """
    grid = Grid1D(0.0, 1.0, 32, boundary="periodic")
    moment = spin_magnetic_moment(2.0, 1.0, hbar, 1.0, 1.0)
    fields = EMFieldConfig(np.array([0.0, 0.0, 1.0]), moment, g_factor=2.0)
    spinor = uniform_spinor(grid, 1.0, 1.0)
    period = 2 * np.pi
    _, record = pauli_propagate(spinor, fields, hbar, 1.0, period / 256, 512)
    return moment, record


def test_criterion_14_spin_precession_rate_and_its_hbar_content():
    moment, record = _larmor_record(1.0)
    rate = 2.0 * moment * 1.0 / 1.0  # 2 mu_s |B| / hbar
    assert np.abs(record.sx - np.cos(rate * record.times)).max() < 1e-3
    assert np.abs(record.norms - 1.0).max() < 1e-8

    # with the moment switched off the two components obey identical
    # equations; starting equal they must stay equal
    envelope_grid = Grid1D(-1.0, 1.0, 64)
    envelope = np.exp(-0.5 * (envelope_grid.x / 0.2) ** 2).astype(complex)
    envelope[0] = envelope[-1] = 0.0
    psi = normalize(ComplexField(envelope_grid, envelope))
    spinor = SpinorField(
        ComplexField(envelope_grid, psi.values / np.sqrt(2)),
        ComplexField(envelope_grid, psi.values / np.sqrt(2)),
    )
    off = EMFieldConfig(np.array([0.4, -0.3, 0.8]), 0.0)
    final, _ = pauli_propagate(spinor, off, 1.0, 1.0, 0.01, 100)
    assert np.abs(final.plus.values - final.minus.values).max() < 1e-10

    # halving hbar halves the moment and the level splitting 2 mu_s B, while
    # the precession rate g e B/(2 m c) carries no hbar and must not move
    rates = {}
    for hbar in (1.0, 0.5):
        moment, record = _larmor_record(hbar)
        phase = np.unwrap(np.arctan2(record.sy, record.sx))
        rates[hbar] = np.polyfit(record.times, phase, 1)[0]
        splitting = 2.0 * moment * 1.0
        assert abs(splitting - hbar * rates[hbar]) < 1e-3 * hbar * rates[hbar]
    assert abs(rates[0.5] - rates[1.0]) < 1e-3 * abs(rates[1.0])
    half_splitting = 2.0 * spin_magnetic_moment(2.0, 1.0, 0.5, 1.0, 1.0)
    full_splitting = 2.0 * spin_magnetic_moment(2.0, 1.0, 1.0, 1.0, 1.0)
    assert abs(half_splitting - 0.5 * full_splitting) < 1e-3 * full_splitting


def test_criterion_15_every_command_writes_byte_identical_reruns(tmp_path):
    jobs = {
        "optics-limit": ["optics-limit", "--n-points", "4097",
                         "--lambda-bars", "0.1,0.05"],
        "classical": ["classical", "--t-max", "6.3", "--dt", "0.01"],
        "eigensolve": ["eigensolve", "--n-points", "512", "--levels", "6"],
        "propagate": ["propagate", "--n-points", "512", "--steps", "50",
                      "--record-every", "10"],
        "expand": ["expand", "--n-points", "512", "--basis", "energy:6",
                   "--state", "superposition:0.5,0.5"],
        "fields": ["fields", "--n-points", "512", "--state", "eigen:1",
                   "--observable", "energy"],
        "measure": ["measure", "--n-points", "512", "--trials", "2000",
                    "--seed", "4"],
        "pauli": ["pauli", "--steps", "128", "--record-every", "4"],
    }
    for name, argv in jobs.items():
        suffix = ".json" if name == "measure" else ".csv"
        first = tmp_path / f"{name}-a{suffix}"
        second = tmp_path / f"{name}-b{suffix}"
        assert run(argv + ["--out", str(first)]) == 0
        assert run(argv + ["--out", str(second)]) == 0
        payload = first.read_bytes()
        assert payload
        assert payload == second.read_bytes()
