import numpy as np
import pytest
from scipy.stats import kstest

from RelayDMT.channel import (
    AntennaConfig,
    ChannelMatrix,
    ChannelRealization,
    SnrPoint,
    capacity,
    eigen_exponents,
    half_power_capacity,
    mac_sum_capacity,
    sample_batch,
    sample_realization,
)
from RelayDMT.errors import DomainError, InputError


def rng(seed=0):
    return np.random.default_rng(seed)


def random_matrix(stream, rows, cols):
    return ChannelMatrix(
        (stream.standard_normal((rows, cols)) + 1j * stream.standard_normal((rows, cols)))
        * np.sqrt(0.5)
    )


class TestSampling:
    """Channel realization sampling"""

    def test_dimensions(self):
        real = sample_realization(AntennaConfig(2, 3, 2), rng(1))
        assert (real.h1.rows, real.h1.cols) == (3, 2)
        assert (real.h2.rows, real.h2.cols) == (3, 2)
        assert (real.h3.rows, real.h3.cols) == (2, 3)
        assert (real.h4.rows, real.h4.cols) == (2, 3)
        real.check(AntennaConfig(2, 3, 2))

    def test_check_rejects_mismatch(self):
        real = sample_realization(AntennaConfig(2, 3, 2), rng(1))
        with pytest.raises(InputError, match="h1"):
            real.check(AntennaConfig(1, 3, 2))

    def test_same_seed_same_entries(self):
        config = AntennaConfig(2, 2, 3)
        a = sample_realization(config, rng(42))
        b = sample_realization(config, rng(42))
        for name in ("h1", "h2", "h3", "h4"):
            assert np.array_equal(getattr(a, name).entries, getattr(b, name).entries)

    def test_no_aliasing(self):
        real = sample_realization(AntennaConfig(1, 1, 1), rng(3))
        mats = [real.h1.entries, real.h2.entries, real.h3.entries, real.h4.entries]
        for i in range(4):
            for j in range(i + 1, 4):
                assert not np.shares_memory(mats[i], mats[j])

    def test_batch_rows_are_realizations(self):
        config = AntennaConfig(1, 2, 3)
        batch = sample_batch(config, rng(9), 5)
        assert len(batch) == 5
        assert batch.h4.shape == (5, 3, 2)
        first = sample_realization(config, rng(9))
        assert np.array_equal(batch.realization(0).h4.entries, first.h4.entries)

    def test_unit_power(self):
        batch = sample_batch(AntennaConfig(1, 1, 1), rng(2024), 10**6)
        power = np.abs(batch.h1[:, 0, 0]) ** 2
        assert 0.99 <= power.mean() <= 1.01

    def test_power_is_exponential(self):
        batch = sample_batch(AntennaConfig(1, 1, 1), rng(12345), 10**5)
        power = np.abs(batch.h3[:, 0, 0]) ** 2
        assert kstest(power, "expon").pvalue > 0.01

    def test_real_and_imaginary_variance(self):
        batch = sample_batch(AntennaConfig(2, 2, 2), rng(5), 10**5)
        entries = batch.h2.ravel()
        assert np.var(entries.real) == pytest.approx(0.5, abs=0.01)
        assert np.var(entries.imag) == pytest.approx(0.5, abs=0.01)

    def test_antenna_counts_validated(self):
        with pytest.raises(InputError):
            AntennaConfig(0, 1, 1)
        with pytest.raises(InputError):
            AntennaConfig(1, True, 1)

    def test_m_star(self):
        assert AntennaConfig(3, 1, 2).m_star == 2
        assert str(AntennaConfig(3, 1, 2)) == "(3,1,2)"


class TestChannelMatrix:
    def test_non_finite_rejected(self):
        with pytest.raises(InputError):
            ChannelMatrix(np.array([[np.nan]]))
        with pytest.raises(InputError):
            ChannelMatrix(np.array([[1.0, np.inf]]))

    def test_entries_read_only(self):
        h = ChannelMatrix(np.eye(2))
        with pytest.raises(ValueError):
            h.entries[0, 0] = 3.0

    def test_must_be_2d(self):
        with pytest.raises(InputError):
            ChannelMatrix(np.ones(3))


class TestSnrPoint:
    def test_from_db(self):
        snr = SnrPoint.from_db(30)
        assert snr.linear == pytest.approx(1000.0)

    def test_from_linear(self):
        assert SnrPoint.from_linear(100.0).db == pytest.approx(20.0)

    def test_inconsistent(self):
        with pytest.raises(DomainError):
            SnrPoint(10.0, 20.0)

    def test_nonpositive(self):
        with pytest.raises(DomainError):
            SnrPoint.from_linear(0.0)


# fmt: off
@pytest.mark.parametrize(
    "entries, m_tx, snr, expected",
    [
        pytest.param([[1.0]],          1, 1.0, 1.0, id="scalar_unit_gain"),
        pytest.param(np.zeros((2, 3)), 3, 5.0, 0.0, id="zero_matrix"),
        pytest.param(np.eye(2),        2, 2.0, 2.0, id="identity_2x2"),
    ],
)
# fmt: on
def test_capacity_examples(entries, m_tx, snr, expected):
    assert capacity(ChannelMatrix(entries), m_tx, SnrPoint.from_linear(snr)) == pytest.approx(
        expected, abs=1e-12
    )


# fmt: off
@pytest.mark.parametrize(
    "entries, m_tx, snr, expected",
    [
        pytest.param([[1.0]],          1, 2.0, 1.0, id="scalar_unit_gain"),
        pytest.param(np.zeros((3, 1)), 1, 9.0, 0.0, id="zero_matrix"),
    ],
)
# fmt: on
def test_half_power_capacity_examples(entries, m_tx, snr, expected):
    h = ChannelMatrix(entries)
    assert half_power_capacity(h, m_tx, SnrPoint.from_linear(snr)) == pytest.approx(
        expected, abs=1e-12
    )


class TestCapacityProperties:
    @pytest.fixture
    def matrices(self):
        stream = rng(77)
        out = []
        for rows in range(1, 5):
            for cols in range(1, 5):
                for _ in range(3):
                    out.append(random_matrix(stream, rows, cols))
        return out

    def test_matches_direct_determinant(self, matrices):
        snr = SnrPoint.from_db(20)
        for h in matrices:
            m_tx = h.cols
            gram = h.entries @ h.entries.conj().T
            sign, logdet = np.linalg.slogdet(np.eye(h.rows) + snr.linear / m_tx * gram)
            assert sign.real > 0
            expected = logdet / np.log(2)
            assert capacity(h, m_tx, snr) == pytest.approx(expected, rel=1e-9)

    def test_half_power_gap_bounded(self, matrices):
        snr = SnrPoint.from_db(25)
        for h in matrices:
            gap = capacity(h, h.cols, snr) - half_power_capacity(h, h.cols, snr)
            assert -1e-12 <= gap <= min(h.rows, h.cols) + 1e-12

    def test_nondecreasing_in_snr(self, matrices):
        ladder = [SnrPoint.from_db(db) for db in range(-10, 45, 5)]
        for h in matrices:
            caps = [capacity(h, h.cols, snr) for snr in ladder]
            assert all(b >= a for a, b in zip(caps, caps[1:]))

    def test_sum_of_eigen_terms(self, matrices):
        snr = SnrPoint.from_db(10)
        for h in matrices:
            eigs = np.linalg.eigvalsh(h.entries @ h.entries.conj().T)
            expected = np.sum(np.log2(1 + snr.linear / h.cols * np.clip(eigs, 0, None)))
            assert capacity(h, h.cols, snr) == pytest.approx(expected, rel=1e-9, abs=1e-12)


class TestMacSumCapacity:
    def test_scalar_users(self):
        one = ChannelMatrix([[1.0]])
        assert mac_sum_capacity(one, 1, one, 1, SnrPoint.from_linear(3.0)) == pytest.approx(
            np.log2(7.0)
        )

    def test_at_least_each_user(self):
        stream = rng(11)
        snr = SnrPoint.from_db(15)
        for _ in range(10):
            h1 = random_matrix(stream, 2, 1)
            h2 = random_matrix(stream, 2, 3)
            total = mac_sum_capacity(h1, 1, h2, 3, snr)
            assert total >= capacity(h1, 1, snr) - 1e-12
            assert total >= capacity(h2, 3, snr) - 1e-12

    def test_receiver_mismatch(self):
        with pytest.raises(InputError):
            mac_sum_capacity(ChannelMatrix(np.ones((2, 1))), 1, ChannelMatrix(np.ones((3, 1))), 1,
                             SnrPoint.from_linear(2.0))


class TestEigenExponents:
    def test_unit_decay(self):
        snr = SnrPoint.from_linear(100.0)
        alpha = eigen_exponents(ChannelMatrix([[0.1]]), snr)
        assert alpha.alphas == pytest.approx((1.0,))

    def test_unit_gain(self):
        alpha = eigen_exponents(ChannelMatrix([[1.0]]), SnrPoint.from_linear(50.0))
        assert alpha.alphas == pytest.approx((0.0,), abs=1e-12)

    def test_two_by_two(self):
        snr = SnrPoint.from_linear(10.0)
        h = ChannelMatrix(np.diag([10.0**-1, 10.0**-0.5]))
        alpha = eigen_exponents(h, snr)
        assert alpha.alphas == pytest.approx((2.0, 1.0))
        assert (alpha.m, alpha.n) == (2, 2)

    def test_zero_eigenvalue_is_infinite(self):
        alpha = eigen_exponents(ChannelMatrix(np.zeros((1, 2))), SnrPoint.from_linear(10.0))
        assert alpha.alphas == (np.inf,)

    def test_strong_channel_is_not_admissible(self):
        alpha = eigen_exponents(ChannelMatrix([[10.0]]), SnrPoint.from_linear(10.0))
        assert alpha.alphas[0] < 0
        assert not alpha.is_admissible

    def test_needs_snr_above_one(self):
        with pytest.raises(DomainError):
            eigen_exponents(ChannelMatrix([[1.0]]), SnrPoint.from_linear(1.0))


def test_realization_holds_matrices():
    one = ChannelMatrix([[1.0]])
    real = ChannelRealization(one, one, one, one)
    real.check(AntennaConfig(1, 1, 1))
