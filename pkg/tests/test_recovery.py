import numpy as np
import pytest

from compint.recovery import (
    BPOptions,
    InsufficientSamplingError,
    Method,
    basis_pursuit,
    ft_recover,
    reconstruction_error,
)
from compint.sensing import (
    DelaySchedule,
    MeasurementVector,
    ModalSpectrum,
    ScheduleKind,
    even_alphas,
    nyquist_schedule,
    random_schedule,
    sample_interferogram,
    sensing_matrix,
)

from oracles import harmonic_projection, l1_oracle


# -------------------------------------------------------------- harmonic route


def test_ft_exact_at_critical_rate():
    # N = 2, M = 4 puts harmonic 2 at the edge where the projection weight
    # halves; y = cos(2a) on the even grid is [1, -1, 1, -1]
    sched = nyquist_schedule(4)
    y = MeasurementVector(np.array([1.0, -1.0, 1.0, -1.0]))
    res = ft_recover(y, sched, 2)
    np.testing.assert_allclose(res.raw, [0.0, 1.0], atol=1e-14)
    assert res.converged
    assert res.method is Method.FT
    assert res.iterations == 0
    assert res.final_residual < 1e-12


def test_ft_round_trip_above_critical_rate():
    rng = np.random.default_rng(77)
    x = ModalSpectrum(rng.uniform(0.0, 1.0, 64))
    sched = nyquist_schedule(140)
    y = sample_interferogram(x, sched)
    res = ft_recover(y, sched, 64)
    assert np.max(np.abs(res.raw - x.weights)) < 1e-12


def test_ft_matches_plain_projection_oracle():
    rng = np.random.default_rng(21)
    for m, n in [(16, 8), (20, 8), (12, 5)]:
        x = ModalSpectrum(rng.uniform(0.0, 1.0, n))
        sched = nyquist_schedule(m)
        y = sample_interferogram(x, sched)
        res = ft_recover(y, sched, n)
        ref = harmonic_projection(y.values, sched.alphas, n)
        np.testing.assert_allclose(res.raw, ref, atol=1e-13)
        np.testing.assert_allclose(res.raw, x.weights, atol=1e-12)


def test_ft_keeps_signed_raw_but_clips_spectrum():
    sched = nyquist_schedule(8)
    y = MeasurementVector(-np.cos(sched.alphas))
    res = ft_recover(y, sched, 2)
    np.testing.assert_allclose(res.raw, [-1.0, 0.0], atol=1e-14)
    assert np.all(res.spectrum.weights >= 0.0)
    assert res.spectrum.weights[0] == 0.0


def test_ft_requires_even_schedule_and_nyquist_rate():
    uneven = random_schedule(16, seed=0)
    y = MeasurementVector(np.zeros(16))
    with pytest.raises(ValueError):
        ft_recover(y, uneven, 4)

    sched = nyquist_schedule(6)
    with pytest.raises(InsufficientSamplingError):
        ft_recover(MeasurementVector(np.zeros(6)), sched, 4)
    assert issubclass(InsufficientSamplingError, ValueError)

    with pytest.raises(ValueError):
        ft_recover(MeasurementVector(np.zeros(6)), sched, 0)


def test_ft_accepts_externally_tagged_even_grid():
    # schedules read back from files carry the external tag but identical values
    sched = DelaySchedule(even_alphas(8), ScheduleKind.EXTERNAL)
    x = ModalSpectrum.from_entries(4, {2: 1.0}, normalized=True)
    y = sample_interferogram(x, sched)
    res = ft_recover(y, sched, 4)
    np.testing.assert_allclose(res.raw, x.weights, atol=1e-12)


# ----------------------------------------------------------------- l1 route


def test_bp_recovers_sparse_spike_below_nyquist():
    truth = ModalSpectrum.from_entries(8, {5: 1.0}, normalized=True)
    sched = random_schedule(4, seed=1)
    phi = sensing_matrix(sched, 8)
    y = sample_interferogram(truth, sched)
    res = basis_pursuit(phi, y)
    assert res.converged
    assert res.method is Method.BP
    assert reconstruction_error(truth, res.raw) < 1e-10

    sol, unique = l1_oracle(phi.entries, y.values)
    assert unique
    assert int(np.argmax(np.abs(sol))) == 4
    assert abs(np.abs(res.raw).sum() - np.abs(sol).sum()) < 1e-6


def test_bp_zero_measurements():
    phi = sensing_matrix(random_schedule(8, seed=10), 2)
    res = basis_pursuit(phi, MeasurementVector(np.zeros(8)))
    assert res.converged
    np.testing.assert_array_equal(res.raw, np.zeros(2))
    assert res.iterations == 1


def test_bp_matches_exhaustive_l1_oracle():
    worst = 0.0
    for i in range(10):
        rng = np.random.default_rng(100 + i)
        n = int(rng.integers(4, 9))
        s = int(rng.integers(1, 3))
        m = int(rng.integers(max(3, 2 * s), n + 1))
        support = rng.choice(n, s, replace=False)
        x = np.zeros(n)
        x[support] = rng.uniform(0.3, 1.0, s)
        phi = sensing_matrix(random_schedule(m, seed=1000 + i), n)
        y = MeasurementVector(phi.entries @ x)
        res = basis_pursuit(phi, y)
        assert res.converged
        sol, _ = l1_oracle(phi.entries, y.values)
        worst = max(worst, abs(np.abs(res.raw).sum() - np.abs(sol).sum()))
    assert worst < 1e-6


def test_bp_converged_implies_feasible():
    for i in range(20):
        rng = np.random.default_rng(300 + i)
        n = int(rng.integers(3, 10))
        m = int(rng.integers(2, n + 3))
        phi = sensing_matrix(random_schedule(m, seed=400 + i), n)
        y = MeasurementVector(rng.uniform(-1.0, 1.0, m))
        opts = BPOptions(residual_epsilon=0.05, max_iters=5000)
        res = basis_pursuit(phi, y, opts)
        if res.converged:
            assert res.final_residual <= opts.residual_epsilon + opts.abs_tol
        assert np.linalg.norm(phi.entries @ res.raw - y.values) == pytest.approx(
            res.final_residual)


def test_bp_scale_equivariance():
    x = np.zeros(6)
    x[[1, 4]] = [0.7, 0.4]
    phi = sensing_matrix(random_schedule(12, seed=9), 6)
    y = MeasurementVector(phi.entries @ x)
    base = basis_pursuit(phi, y)
    assert base.converged
    for c in (0.5, 2.0):
        scaled = basis_pursuit(phi, MeasurementVector(c * y.values),
                               BPOptions(residual_epsilon=1e-9 * c))
        assert scaled.converged
        assert np.max(np.abs(scaled.raw - c * base.raw)) < 1e-6


def test_bp_nonnegative_constraint():
    x = np.array([1.0, 0.3])
    phi = sensing_matrix(random_schedule(8, seed=10), 2)
    res = basis_pursuit(phi, MeasurementVector(-(phi.entries @ x)),
                        BPOptions(nonnegative=True, max_iters=2000))
    # sign-flipped data cannot be fit by nonnegative weights at tiny epsilon,
    # but the iterate must respect the constraint throughout
    assert np.all(res.raw >= 0.0)
    assert not res.converged


def test_bp_report_snaps_small_entries():
    x = np.array([1.0, 0.3])
    phi = sensing_matrix(random_schedule(8, seed=10), 2)
    y = MeasurementVector(phi.entries @ x)
    res = basis_pursuit(phi, y, BPOptions(zero_threshold=0.5))
    assert abs(res.raw[1] - 0.3) < 1e-6
    assert res.spectrum.weights[1] == 0.0
    assert abs(res.spectrum.weights[0] - 1.0) < 1e-6


def test_bp_noise_requires_matching_epsilon():
    truth = ModalSpectrum.from_entries(8, {3: 1.0}, normalized=True)
    sched = nyquist_schedule(128)
    phi = sensing_matrix(sched, 8)
    sigma = 0.05
    y = sample_interferogram(truth, sched, noise_sigma=sigma, seed=6)

    tight = basis_pursuit(phi, y, BPOptions(max_iters=3000))
    assert not tight.converged

    eps = 1.2 * sigma * np.sqrt(128)
    loose = basis_pursuit(phi, y, BPOptions(residual_epsilon=eps))
    assert loose.converged
    assert loose.final_residual <= eps + 1e-8
    assert reconstruction_error(truth, loose.raw) < 0.05


def test_bp_deterministic():
    phi = sensing_matrix(random_schedule(6, seed=2), 8)
    truth = ModalSpectrum.from_entries(8, {2: 0.6, 7: 0.4}, normalized=True)
    y = sample_interferogram(truth, phi.schedule)
    a = basis_pursuit(phi, y)
    b = basis_pursuit(phi, y)
    np.testing.assert_array_equal(a.raw, b.raw)
    assert a.iterations == b.iterations
    assert a.final_residual == b.final_residual


def test_bp_shape_mismatch():
    phi = sensing_matrix(random_schedule(6, seed=2), 4)
    with pytest.raises(ValueError):
        basis_pursuit(phi, MeasurementVector(np.zeros(5)))


def test_bp_options_validation():
    with pytest.raises(ValueError):
        BPOptions(residual_epsilon=-1.0)
    with pytest.raises(ValueError):
        BPOptions(penalty_rho=0.0)
    with pytest.raises(ValueError):
        BPOptions(abs_tol=0.0)
    with pytest.raises(ValueError):
        BPOptions(max_iters=0)
    with pytest.raises(ValueError):
        BPOptions(zero_threshold=-0.5)


def test_result_raw_is_readonly():
    phi = sensing_matrix(random_schedule(8, seed=10), 2)
    res = basis_pursuit(phi, MeasurementVector(np.zeros(8)))
    with pytest.raises(ValueError):
        res.raw[0] = 1.0


# ---------------------------------------------------------------- error metric


def test_reconstruction_error_values():
    assert reconstruction_error([1.0, 0.0], [1.0, 0.0]) == 0.0
    assert reconstruction_error([1.0, 0.0], [0.0, 0.0]) == 1.0
    assert reconstruction_error([1.0, 0.0], [-1.0, 0.0]) == 4.0
    ref = ModalSpectrum(np.array([1.0, 0.0]))
    assert reconstruction_error(ref, [0.5, 0.0]) == 0.25
    with pytest.raises(ValueError):
        reconstruction_error([0.0, 0.0], [1.0, 0.0])
    with pytest.raises(ValueError):
        reconstruction_error([1.0], [1.0, 0.0])
