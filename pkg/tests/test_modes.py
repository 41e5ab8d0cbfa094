import numpy as np
import pytest

from compint.modes import (
    BasisKind,
    ComplexModalField,
    GridResolutionWarning,
    ModeBasis,
    SampledGrid,
    default_grid,
    delay_kernel,
    field_interferogram,
    generalized_delay,
    mode_function,
    mode_table,
    synthesize,
)
from compint.sensing import ModalSpectrum, analytic_interferogram

from oracles import hermite_gauss, laguerre_gauss_radial


def trapezoid_grid(lo, hi, points):
    x = np.linspace(lo, hi, points)
    w = np.full(points, x[1] - x[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return SampledGrid(x, w)


# ---------------------------------------------------------------- mode values


def test_ground_mode_peak_value():
    # psi_1(0) = pi^{-1/4} for unit waist; an odd point count puts a node at 0
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 1)
    grid = default_grid(basis, points=1025)
    idx = int(np.argmin(np.abs(grid.points)))
    assert grid.points[idx] == 0.0
    psi = mode_function(basis, 1, grid)
    assert abs(psi[idx] - np.pi ** -0.25) < 1e-14


@pytest.mark.parametrize("waist", [1.0, 2.0])
def test_hermite_gauss_matches_reference(waist):
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 21, waist=waist)
    x = np.linspace(-5.0 * waist, 5.0 * waist, 41)
    w = np.full(41, x[1] - x[0])
    table = mode_table(basis, SampledGrid(x, w))
    for n in range(1, 22):
        ref = hermite_gauss(x, n - 1, waist=waist)
        assert np.max(np.abs(table[:, n - 1] - ref)) < 1e-12


@pytest.mark.parametrize("waist", [1.0, 1.5])
def test_laguerre_gauss_matches_reference(waist):
    basis = ModeBasis(BasisKind.LAGUERRE_GAUSS_RADIAL, 21, waist=waist)
    r = np.linspace(0.0, 4.0 * waist, 33)
    w = np.full(33, 1.0)
    table = mode_table(basis, SampledGrid(r, w))
    for n in range(1, 22):
        ref = laguerre_gauss_radial(r, n - 1, waist=waist)
        assert np.max(np.abs(table[:, n - 1] - ref)) < 1e-12


@pytest.mark.parametrize("kind", list(BasisKind))
def test_default_grid_orthonormality_to_order_64(kind):
    basis = ModeBasis(kind, 64)
    grid = default_grid(basis)
    table = mode_table(basis, grid)
    gram = table.T @ (grid.weights[:, None] * table)
    assert np.max(np.abs(gram - np.eye(64))) < 1e-10


def test_modest_order_orthonormality_on_coarser_span():
    # a narrower hand-built trapezoid grid still resolves low orders
    grid = trapezoid_grid(-10.0, 10.0, 1024)
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 8)
    table = mode_table(basis, grid)
    gram = table.T @ (grid.weights[:, None] * table)
    assert np.max(np.abs(gram - np.eye(8))) < 1e-6


def test_mode_index_bounds():
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 4)
    grid = default_grid(basis, points=64)
    with pytest.raises(IndexError):
        mode_function(basis, 0, grid)
    with pytest.raises(IndexError):
        mode_function(basis, 5, grid)
    with pytest.raises(IndexError):
        mode_table(basis, grid, n_max=0)
    with pytest.raises(IndexError):
        mode_table(basis, grid, n_max=5)


def test_inadequate_grid_warns():
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 20)
    narrow = trapezoid_grid(-3.0, 3.0, 64)
    with pytest.warns(GridResolutionWarning):
        mode_function(basis, 20, narrow)


def test_adequate_grid_does_not_warn():
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 20)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        mode_function(basis, 20, default_grid(basis))


# ------------------------------------------------------------------ dataclasses


def test_grid_validation():
    with pytest.raises(ValueError):
        SampledGrid(np.array([0.0, 0.0, 1.0]), np.ones(3))
    with pytest.raises(ValueError):
        SampledGrid(np.array([0.0, 1.0]), np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        default_grid(ModeBasis(BasisKind.HERMITE_GAUSS_1D, 2), points=1)


def test_field_validation():
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 3)
    with pytest.raises(ValueError):
        ComplexModalField(basis, np.zeros(2, complex))
    with pytest.raises(ValueError):
        ComplexModalField(basis, np.array([1.0, np.nan, 0.0]))
    with pytest.raises(ValueError):
        ComplexModalField(basis, np.array([1.0, 1.0, 0.0]), normalized=True)
    field = ComplexModalField(basis, np.array([0.0, 1.0, 0.0]), normalized=True)
    np.testing.assert_allclose(field.mode_weights(), [0.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        field.coeffs[0] = 1.0


def test_basis_validation():
    with pytest.raises(ValueError):
        ModeBasis(BasisKind.HERMITE_GAUSS_1D, 0)
    with pytest.raises(ValueError):
        ModeBasis(BasisKind.HERMITE_GAUSS_1D, 4, waist=-1.0)


# ------------------------------------------------------------------ delays


def test_delay_zero_and_full_turn_are_identity():
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 6)
    rng = np.random.default_rng(5)
    c = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    field = ComplexModalField(basis, c)
    np.testing.assert_array_equal(generalized_delay(field, 0.0).coeffs, c)
    np.testing.assert_array_equal(generalized_delay(field, 2.0 * np.pi).coeffs, c)


def test_delay_single_mode_phase():
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 2)
    field = ComplexModalField(basis, np.array([0.0, 1.0]), normalized=True)
    out = generalized_delay(field, np.pi / 2.0)
    assert abs(out.coeffs[1] - (-1.0)) < 1e-12


def test_delay_preserves_weights_and_composes():
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 8)
    rng = np.random.default_rng(0)
    c = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    c /= np.sqrt(np.sum(np.abs(c) ** 2))
    field = ComplexModalField(basis, c, normalized=True)
    for a, b in [(0.3, 1.1), (2.0, 5.9), (np.pi, np.pi)]:
        once = generalized_delay(field, a + b)
        twice = generalized_delay(generalized_delay(field, a), b)
        np.testing.assert_allclose(twice.coeffs, once.coeffs, atol=1e-12)
        np.testing.assert_allclose(once.mode_weights(), field.mode_weights(),
                                   atol=1e-12)
    with pytest.raises(ValueError):
        generalized_delay(field, np.inf)


def test_delay_kernel_identity_and_eigenphases():
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 8)
    grid = default_grid(basis, points=256)
    table = mode_table(basis, grid)

    kernel = delay_kernel(basis, 0.0, grid)
    psi3 = table[:, 2]
    assert np.max(np.abs(kernel @ (grid.weights * psi3) - psi3)) < 1e-8

    rng = np.random.default_rng(1)
    for alpha in rng.uniform(0.0, 2.0 * np.pi, 16):
        kernel = delay_kernel(basis, float(alpha), grid)
        for n in range(1, 9):
            psi = table[:, n - 1]
            out = kernel @ (grid.weights * psi)
            expect = np.exp(1j * n * alpha) * psi
            assert np.max(np.abs(out - expect)) < 1e-8


def test_delay_kernel_half_turn_flips_odd_harmonics():
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 8)
    grid = default_grid(basis, points=256)
    table = mode_table(basis, grid)
    kernel = delay_kernel(basis, np.pi, grid)
    out = kernel @ (grid.weights * (table[:, 0] + table[:, 1]))
    expect = -table[:, 0] + table[:, 1]
    assert np.max(np.abs(out - expect)) < 1e-8


def test_kernel_matches_coefficient_delay():
    basis = ModeBasis(BasisKind.LAGUERRE_GAUSS_RADIAL, 6)
    grid = default_grid(basis, points=256)
    rng = np.random.default_rng(9)
    c = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    field = ComplexModalField(basis, c)
    alpha = 1.7
    via_coeffs = synthesize(generalized_delay(field, alpha), grid)
    via_kernel = delay_kernel(basis, alpha, grid) @ (
        grid.weights * synthesize(field, grid))
    assert np.max(np.abs(via_coeffs - via_kernel)) < 1e-8


# ------------------------------------------------------------ interferograms


@pytest.mark.parametrize("kind", list(BasisKind))
def test_single_mode_interferogram(kind):
    basis = ModeBasis(kind, 8)
    c = np.zeros(8, complex)
    c[2] = 1.0
    field = ComplexModalField(basis, c, normalized=True)
    for alpha in np.linspace(0.0, 2.0 * np.pi, 9):
        expect = 1.0 + np.cos(3.0 * alpha)
        assert abs(field_interferogram(field, float(alpha)) - expect) < 1e-6


def test_interferogram_pinned_at_zero_delay():
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 4)
    rng = np.random.default_rng(3)
    c = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    field = ComplexModalField(basis, c)
    assert field_interferogram(field, 0.0) == 2.0


def test_two_mode_destructive_point():
    # equal weight on harmonics 1 and 3 cancels the bias at alpha = pi
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 4)
    c = np.zeros(4, complex)
    c[0] = np.sqrt(0.5)
    c[2] = np.sqrt(0.5)
    field = ComplexModalField(basis, c, normalized=True)
    assert abs(field_interferogram(field, np.pi)) < 1e-10


def test_zero_field_rejected():
    basis = ModeBasis(BasisKind.HERMITE_GAUSS_1D, 4)
    field = ComplexModalField(basis, np.zeros(4, complex))
    with pytest.raises(ValueError):
        field_interferogram(field, 1.0)


@pytest.mark.parametrize("kind", list(BasisKind))
def test_field_interferogram_matches_weight_formula(kind):
    # P(alpha) - 1 from field-level quadrature equals the cosine series in
    # the modal weights, for random normalized fields
    basis = ModeBasis(kind, 8)
    grid = default_grid(basis)
    rng = np.random.default_rng(17)
    for _ in range(20):
        c = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        c /= np.sqrt(np.sum(np.abs(c) ** 2))
        field = ComplexModalField(basis, c, normalized=True)
        x = ModalSpectrum(field.mode_weights(), normalized=True)
        for alpha in rng.uniform(0.0, 2.0 * np.pi, 8):
            got = field_interferogram(field, float(alpha), grid)
            expect = analytic_interferogram(x, float(alpha))
            assert abs(got - expect) < 1e-9
