import numpy as np
import pytest

from rsma import (
    CsitModel,
    apply_csit_error,
    deterministic_channel,
    sample_rayleigh,
)


class TestSampleRayleigh:
    def test_deterministic_for_same_seed(self):
        a = sample_rayleigh(2, 2, 1.0, 7)
        b = sample_rayleigh(2, 2, 1.0, 7)
        assert np.array_equal(a.vectors, b.vectors)

    def test_seeds_differ(self):
        a = sample_rayleigh(2, 2, 1.0, 7)
        b = sample_rayleigh(2, 2, 1.0, 8)
        assert not np.array_equal(a.vectors, b.vectors)

    def test_shape(self):
        ch = sample_rayleigh(4, 3, 1.0, 123)
        assert ch.vectors.shape == (3, 4)
        assert ch.n_tx == 4 and ch.n_users == 3

    def test_unit_entry_power(self):
        # Monte Carlo oracle for the CN(0, 1) law over fresh seeds.
        total = 0.0
        count = 0
        for seed in range(10_000):
            ch = sample_rayleigh(2, 2, 1.0, seed)
            total += float(np.sum(np.abs(ch.vectors) ** 2))
            count += ch.vectors.size
        assert abs(total / count - 1.0) < 0.05

    @pytest.mark.parametrize("n_tx,n_users", [(0, 2), (2, 0), (0, 0)])
    def test_zero_dimensions_rejected(self, n_tx, n_users):
        with pytest.raises(ValueError):
            sample_rayleigh(n_tx, n_users, 1.0, 1)

    def test_bad_noise_rejected(self):
        with pytest.raises(ValueError):
            sample_rayleigh(2, 2, 0.0, 1)


class TestCsitError:
    def test_alpha_zero_gives_unit_variance(self):
        truth = sample_rayleigh(2, 2, 1.0, 3)
        _, model = apply_csit_error(truth, 0.0, 100.0, 4)
        assert model.error_var == 1.0
        assert not model.perfect

    def test_variance_law(self):
        truth = sample_rayleigh(2, 2, 1.0, 3)
        _, model = apply_csit_error(truth, 0.5, 100.0, 4)
        assert model.error_var == pytest.approx(0.1, abs=1e-15)
        for alpha in (0.0, 0.25, 0.5, 1.0):
            for power in (2.0, 10.0, 1000.0):
                _, m = apply_csit_error(truth, alpha, power, 5)
                assert m.error_var == power ** (-alpha)

    def test_empirical_error_power(self):
        # Monte Carlo check of the P**-alpha law at alpha=1, P=10.
        truth = sample_rayleigh(2, 2, 1.0, 11)
        total = 0.0
        count = 0
        for trial in range(10_000):
            est, _ = apply_csit_error(truth, 1.0, 10.0, trial)
            err = est.vectors - truth.vectors
            total += float(np.sum(np.abs(err) ** 2))
            count += err.size
        mean = total / count
        assert abs(mean - 0.1) < 0.01

    def test_negative_alpha_rejected(self):
        truth = sample_rayleigh(2, 2, 1.0, 3)
        with pytest.raises(ValueError):
            apply_csit_error(truth, -0.1, 10.0, 4)

    def test_input_not_mutated(self):
        truth = sample_rayleigh(2, 2, 1.0, 3)
        before = truth.vectors.copy()
        apply_csit_error(truth, 0.5, 10.0, 4)
        assert np.array_equal(truth.vectors, before)
        assert not truth.vectors.flags.writeable

    def test_noise_var_carried_over(self):
        truth = sample_rayleigh(2, 2, 2.5, 3)
        est, _ = apply_csit_error(truth, 0.5, 10.0, 4)
        assert est.noise_var == truth.noise_var

    def test_deterministic(self):
        truth = sample_rayleigh(2, 2, 1.0, 3)
        a, _ = apply_csit_error(truth, 0.5, 10.0, 9)
        b, _ = apply_csit_error(truth, 0.5, 10.0, 9)
        assert np.array_equal(a.vectors, b.vectors)


class TestDeterministicChannel:
    def test_orthogonal_construction(self):
        ch = deterministic_channel([[1, 0], [0, 1]], 1.0)
        assert np.array_equal(ch.vectors, np.eye(2))

    def test_aligned_construction(self):
        ch = deterministic_channel([[1, 0], [1, 0]], 1.0)
        assert np.array_equal(ch.vectors[0], ch.vectors[1])

    def test_siso_mac_construction(self):
        ch = deterministic_channel([[1], [1]], 1.0)
        assert ch.n_tx == 1 and ch.n_users == 2

    def test_ragged_rows_rejected(self):
        with pytest.raises(ValueError):
            deterministic_channel([[1, 0], [1]], 1.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            deterministic_channel([], 1.0)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            deterministic_channel([[float("nan"), 0], [0, 1]], 1.0)


class TestCsitModel:
    def test_perfect_iff_zero_error(self):
        assert CsitModel.ideal().perfect
        with pytest.raises(ValueError):
            CsitModel(alpha=0.5, error_var=0.1, perfect=True)
        with pytest.raises(ValueError):
            CsitModel(alpha=0.5, error_var=0.0, perfect=False)
