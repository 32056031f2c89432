"""Operator actions, Hermiticity trials, orthonormalization, expansions,
completeness kernels, and the continuum momentum amplitude."""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from wavemech.grids import ComplexField, Grid1D, NumericalError, inner_product, make_state, norm
from wavemech.operators import (
    ExpansionCoefficients,
    centered_subset,
    completeness_kernel,
    continuum_momentum_density,
    degenerate_groups,
    expand,
    gradient_operator,
    gram_schmidt,
    hamiltonian_operator,
    hermiticity_check,
    hermiticity_residuals,
    kernel_apply,
    matrix_operator,
    momentum_basis,
    momentum_eigenfunction_box,
    momentum_operator,
    position_eigenfunction,
    position_operator,
    reconstruct,
)
from wavemech.quantum import PotentialSpec, build_hamiltonian, eigensolve, harmonic_grid


def test_operator_kinds_act_correctly():
    g = Grid1D(0.0, 2 * np.pi, 128, "periodic")
    wave = ComplexField(g, np.exp(2j * g.x))
    p_op = momentum_operator(g, hbar=0.5)
    assert_allclose(p_op.apply_field(wave).values, 0.5 * 2 * wave.values, atol=1e-12)
    assert_allclose(position_operator(g).apply(wave.values), g.x * wave.values)
    assert_allclose(gradient_operator(g).apply(wave.values), 2j * wave.values, atol=1e-12)
    mat = np.diag(np.arange(128.0))
    assert_allclose(matrix_operator(g, mat).apply(np.ones(128)), np.arange(128.0))


def test_operator_spec_validation():
    g = Grid1D(0.0, 1.0, 64)
    with pytest.raises(ValueError):
        hamiltonian_operator(g, np.zeros(32))
    with pytest.raises(ValueError):
        matrix_operator(g, np.zeros((3, 3)))
    with pytest.raises(ValueError):
        momentum_operator(g, hbar=-1.0)
    other = ComplexField(Grid1D(0.0, 2.0, 64), np.ones(64))
    with pytest.raises(ValueError):
        momentum_operator(g).apply_field(other)


def test_momentum_and_hamiltonian_are_discretely_hermitian():
    gd = Grid1D(-1.0, 1.0, 257)
    gp = Grid1D(0.0, 1.0, 256, "periodic")
    assert hermiticity_check(momentum_operator(gd), 50, rng_seed=5) < 1e-8
    assert hermiticity_check(momentum_operator(gp), 50, rng_seed=5) < 1e-8
    v = 0.5 * gd.x**2
    assert hermiticity_check(hamiltonian_operator(gd, v), 50, rng_seed=6) < 1e-8
    assert hermiticity_check(position_operator(gd), 50, rng_seed=7) < 1e-12


def test_bare_gradient_is_the_negative_control():
    gd = Grid1D(-1.0, 1.0, 257)
    op = gradient_operator(gd)
    for seed in range(20):
        assert hermiticity_check(op, 1, rng_seed=seed) > 1e-2
    # a visibly asymmetric matrix fails too
    rng = np.random.default_rng(3)
    mat = np.triu(rng.standard_normal((257, 257)))
    assert hermiticity_check(matrix_operator(gd, mat), 5, rng_seed=1) > 1e-2


def test_hermiticity_residuals_shape_and_validation():
    g = Grid1D(-1.0, 1.0, 65)
    res = hermiticity_residuals(momentum_operator(g), 7, rng_seed=0)
    assert res.shape == (7,)
    assert np.all(res >= 0)
    with pytest.raises(ValueError):
        hermiticity_residuals(momentum_operator(g), 0, rng_seed=0)


def test_gram_schmidt_builds_legendre_shapes():
    g = Grid1D(-1.0, 1.0, 2001)
    ones = ComplexField(g, np.ones(g.n_points))
    linear = ComplexField(g, g.x.astype(complex))
    square = ComplexField(g, (g.x**2).astype(complex))
    basis = gram_schmidt([ones, linear, square])
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            assert inner_product(a, b) == pytest.approx((1.0 if i == j else 0.0), abs=1e-12)
    # third member is the normalized Legendre P2 = (3x^2 - 1)/2
    p2 = (3 * g.x**2 - 1) / 2
    p2 = p2 / np.sqrt(2 / 5)
    assert np.abs(basis[2].values.real - p2).max() < 1e-5


def test_gram_schmidt_flags_degenerate_input():
    g = Grid1D(-1.0, 1.0, 101)
    f = ComplexField(g, g.x.astype(complex))
    with pytest.raises(ValueError, match="1"):
        gram_schmidt([f, 2.0 * f])
    with pytest.raises(ValueError):
        gram_schmidt([ComplexField(g, np.zeros(101))])


def test_gram_schmidt_random_batch_is_orthonormal():
    g = Grid1D(0.0, 1.0, 256, "periodic")
    rng = np.random.default_rng(21)
    fields = [
        ComplexField(g, rng.standard_normal(256) + 1j * rng.standard_normal(256))
        for _ in range(6)
    ]
    basis = gram_schmidt(fields)
    gram = np.array([[inner_product(a, b) for b in basis] for a in basis])
    assert np.abs(gram - np.eye(6)).max() < 1e-12


def test_momentum_basis_is_orthonormal_with_hbar_scaled_labels():
    g = Grid1D(0.0, 3.0, 128, "periodic")
    basis = momentum_basis(g, 5, hbar=1.0)
    assert len(basis) == 11
    assert_allclose(basis.eigenvalues, 2 * np.pi * np.arange(-5, 6) / 3.0)
    gram = np.array(
        [[inner_product(a, b) for b in basis.eigenfunctions] for a in basis.eigenfunctions]
    )
    assert np.abs(gram - np.eye(11)).max() < 1e-12
    # the spatial shapes do not depend on hbar, only the labels do
    half = momentum_basis(g, 5, hbar=0.5)
    assert_allclose(half.eigenvalues, 0.5 * basis.eigenvalues)
    for a, b in zip(basis.eigenfunctions, half.eigenfunctions):
        assert np.array_equal(a.values, b.values)


def test_momentum_basis_guards():
    g = Grid1D(0.0, 3.0, 64, "periodic")
    with pytest.raises(ValueError):
        momentum_basis(g, 20)  # 41 modes > 64/2
    with pytest.raises(ValueError):
        momentum_eigenfunction_box(1, 3.0, Grid1D(0.0, 3.0, 64), 1.0)
    with pytest.raises(ValueError):
        momentum_eigenfunction_box(1, 2.0, g, 1.0)


def test_centered_subsets_are_nested():
    g = Grid1D(0.0, 1.0, 256, "periodic")
    basis = momentum_basis(g, 10)
    small = centered_subset(basis, 5)
    large = centered_subset(basis, 9)
    assert set(small.eigenvalues).issubset(set(large.eigenvalues))
    assert np.all(np.diff(small.eigenvalues) > 0)
    assert len(small) == 5
    with pytest.raises(ValueError):
        centered_subset(basis, 0)
    with pytest.raises(ValueError):
        centered_subset(basis, 22)


def test_expand_recovers_basis_members_and_mixtures():
    g = harmonic_grid(n_points=512)
    dec = eigensolve(build_hamiltonian(PotentialSpec("harmonic", g), 1.0, 1.0), 4)
    coeffs = expand(dec.eigenfunctions[2], dec)
    expected = np.zeros(4)
    expected[2] = 1.0
    assert_allclose(coeffs.abs2, expected, atol=1e-12)

    mix = make_state(g, dec.eigenfunctions[0].values + dec.eigenfunctions[1].values)
    c = expand(mix, dec)
    assert_allclose(c.abs2[:2], 0.5, atol=1e-10)
    assert c.total_probability == pytest.approx(1.0, abs=1e-10)
    back = reconstruct(c, dec)
    assert np.abs(back.values - mix.values).max() < 1e-8


def test_expand_gaussian_against_analytic_fourier_coefficients():
    length, sigma, x_c = 10.0, 0.5, 5.0
    g = Grid1D(0.0, length, 512, "periodic")
    psi = make_state(g, np.exp(-((g.x - x_c) ** 2) / (2 * sigma**2)))
    basis = momentum_basis(g, 24)
    coeffs = expand(psi, basis)
    k = basis.eigenvalues
    oracle = (
        (4 * np.pi * sigma**2) ** 0.25
        / np.sqrt(length)
        * np.exp(-(k**2) * sigma**2 / 2)
        * np.exp(-1j * k * x_c)
    )
    assert np.abs(coeffs.values - oracle).max() < 1e-8
    assert coeffs.total_probability == pytest.approx(1.0, abs=1e-8)


def test_expand_rejects_bad_bases():
    g = Grid1D(0.0, 1.0, 128, "periodic")
    basis = momentum_basis(g, 3)
    state = make_state(g, np.exp(-((g.x - 0.5) ** 2) / 0.02) + 0.05)
    skew = list(basis.eigenfunctions) + [basis.eigenfunctions[0]]
    with pytest.raises(ValueError):
        expand(state, skew)  # duplicated member is not orthonormal
    with pytest.raises(NumericalError):
        expand(state, skew, check_orthonormal=False)  # double counting > norm


def test_degenerate_groups_merge_close_labels():
    labels = np.array([1.0, 1.0 + 1e-12, 2.0, 3.0, 3.0 + 1e-12])
    groups = degenerate_groups(labels)
    assert [list(grp) for grp in groups] == [[0, 1], [2], [3, 4]]
    assert len(degenerate_groups(np.zeros(3))) == 1
    with pytest.raises(ValueError):
        degenerate_groups(np.array([2.0, 1.0]))
    with pytest.raises(ValueError):
        degenerate_groups(np.array([]))


def test_completeness_kernel_peak_and_unit_mass():
    g = Grid1D(0.0, 3.0, 256, "periodic")
    basis = momentum_basis(g, 20)
    x0 = g.x[64]
    w = np.full(g.n_points, g.dx)
    for n in (9, 17, 33):
        sub = centered_subset(basis, n)
        kernel = completeness_kernel(sub, x0)
        # every plane wave contributes |y(x0)|^2 = 1/L to the diagonal
        assert kernel.values[64].real == pytest.approx(n / g.length, rel=1e-12)
        assert np.sum(w * kernel.values) == pytest.approx(1.0, abs=1e-10)


def test_full_basis_kernel_is_the_discrete_delta():
    g = Grid1D(0.0, 2.0, 64, "periodic")
    fields = [
        ComplexField(g, np.exp(2j * np.pi * k * g.x / g.length) / np.sqrt(g.length))
        for k in range(64)
    ]
    kernel = completeness_kernel(fields, g.x[10])
    expected = np.zeros(64)
    expected[10] = 1.0 / g.dx
    assert_allclose(kernel.values.real, expected, atol=1e-9)
    assert np.abs(kernel.values.imag).max() < 1e-9


def test_kernel_truncation_error_shrinks_with_basis_size():
    g = Grid1D(0.0, 2 * np.pi, 256, "periodic")
    basis = momentum_basis(g, 16)
    f = ComplexField(g, np.exp(np.cos(g.x)))
    errors = []
    for n in (5, 9, 17):
        proj = kernel_apply(centered_subset(basis, n), f)
        errors.append(norm(proj - f))
    assert errors[1] < errors[0] and errors[2] < errors[1]


def test_position_eigenfunction_sifts():
    g = Grid1D(-1.0, 1.0, 201)
    f = ComplexField(g, np.cos(2.0 * g.x) + 0.3j * g.x)
    for x_prime in (-0.5, 0.0, 0.73):
        delta = position_eigenfunction(x_prime, g)
        got = inner_product(delta, f)
        assert abs(got - f.values[g.index_of(x_prime)]) < 1e-12
    with pytest.raises(ValueError):
        position_eigenfunction(-1.0, g)  # wall node
    with pytest.raises(ValueError):
        position_eigenfunction(0.101, Grid1D(0.0, 1.0, 101))


def test_continuum_momentum_density_gaussian_oracle():
    sigma, hbar = 1.0, 1.0
    g = Grid1D(-10.0, 10.0, 1025)
    psi = make_state(g, np.exp(-g.x**2 / (2 * sigma**2)))
    p = np.linspace(-6.0, 6.0, 401)
    coeffs = continuum_momentum_density(psi, p, hbar)
    oracle = (sigma**2 / (np.pi * hbar**2)) ** 0.25 * np.exp(-(p**2) * sigma**2 / (2 * hbar**2))
    assert np.abs(coeffs.values - oracle).max() < 1e-6
    assert coeffs.continuous
    assert coeffs.total_probability == pytest.approx(1.0, abs=1e-6)


def test_continuum_momentum_density_shift_theorem():
    g = Grid1D(-10.0, 10.0, 1025)
    hbar, p0 = 0.5, 1.2
    base = make_state(g, np.exp(-g.x**2 / 2))
    boosted = make_state(g, np.exp(-g.x**2 / 2) * np.exp(1j * p0 * g.x / hbar))
    p = np.linspace(-4.0, 4.0, 801)
    c_base = continuum_momentum_density(base, p, hbar)
    c_boost = continuum_momentum_density(boosted, p + p0, hbar)
    assert np.abs(c_boost.values - c_base.values).max() < 1e-8


def test_continuum_density_approaches_box_coefficients():
    # for a state that decays inside the box, sqrt(2 pi hbar / L) c(p_i)
    # reproduces the discrete box coefficients
    length = 12.0
    g = Grid1D(0.0, length, 512, "periodic")
    psi = make_state(g, np.exp(-((g.x - 6.0) ** 2) / 1.2))
    basis = momentum_basis(g, 12)
    box = expand(psi, basis)
    cont = continuum_momentum_density(psi, basis.eigenvalues, 1.0)
    rescaled = np.sqrt(2 * np.pi / length) * cont.values
    assert np.abs(rescaled - box.values).max() < 1e-3


def test_continuum_momentum_density_guards():
    g = Grid1D(-10.0, 10.0, 257)
    psi = make_state(g, np.exp(-g.x**2 / 2))
    with pytest.raises(ValueError):
        continuum_momentum_density(psi, np.array([1.0, 0.5]))
    flat = ComplexField(Grid1D(0.0, 1.0, 64, "periodic"), np.ones(64))
    with pytest.raises(ValueError):
        continuum_momentum_density(flat, np.linspace(-1, 1, 11))


def test_expansion_coefficient_container():
    c = ExpansionCoefficients(np.array([0.0, 1.0]), np.array([0.6, 0.8j]))
    assert_allclose(c.abs2, [0.36, 0.64])
    assert c.total_probability == pytest.approx(1.0)
    rows = c.to_rows()
    assert rows[1] == pytest.approx((1.0, 0.0, 0.8, 0.64))
    with pytest.raises(ValueError):
        ExpansionCoefficients(np.zeros(3), np.zeros(2))
