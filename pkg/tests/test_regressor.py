"""
Tests for the regressor and stacked least-squares systems
"""
import numpy as np
import pytest

from harness.trajectory import NoiseConfig, TrajectoryConfig, gen_dataset, rich_excitation_body
from inertia.errors import EmptySet
from inertia.regressor import Sample, analyse_excitation, regressor, regressor_batch, stack
from inertia.spatial_algebra import ProperAcc, Twist, newton_euler_wrench
from tests.conftest import random_samples


class TestRegressor:
    """Test Y(a, v) pi = f"""

    def test_no_motion(self):
        """No motion, no wrench"""
        np.testing.assert_array_equal(regressor(ProperAcc.zero(), Twist.zero()), np.zeros((6, 10)))

    def test_static_gravity_columns(self):
        """Mass column carries the force; first-moment columns only moments"""
        a = ProperAcc([0.0, 0.0, 1.0], np.zeros(3))
        Y = regressor(a, Twist.zero())
        np.testing.assert_array_equal(Y[:, 0], [0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
        np.testing.assert_array_equal(Y[:3, 1:4], np.zeros((3, 3)))
        for j in range(3):
            np.testing.assert_allclose(Y[3:, 1 + j], np.cross(np.eye(3)[j], [0.0, 0.0, 1.0]))
        np.testing.assert_array_equal(Y[:, 4:], np.zeros((6, 6)))

    def test_matches_newton_euler(self, rng):
        """Y pi equals the Newton-Euler wrench"""
        for _ in range(1000):
            pi, a, v = rng.normal(size=10), rng.normal(size=6), rng.normal(size=6)
            f = newton_euler_wrench(pi, a, v).as_vector()
            err = np.max(np.abs(regressor(a, v) @ pi - f))
            assert err < 1e-12 * max(1.0, np.max(np.abs(f)))

    def test_linearity(self, rng):
        """Y (pi1 + pi2) = Y pi1 + Y pi2"""
        for _ in range(100):
            Y = regressor(rng.normal(size=6), rng.normal(size=6))
            pi1, pi2 = rng.normal(size=10), rng.normal(size=10)
            np.testing.assert_allclose(Y @ (pi1 + pi2), Y @ pi1 + Y @ pi2, atol=1e-12)

    def test_batch_matches_single(self, rng):
        """The batched regressor agrees with the per-sample one"""
        acc, tw = rng.normal(size=(20, 6)), rng.normal(size=(20, 6))
        batch = regressor_batch(acc, tw)
        for i in range(20):
            np.testing.assert_allclose(batch[i], regressor(acc[i], tw[i]), atol=1e-13)


class TestStack:
    """Test stacking samples"""

    def test_single_sample(self, rng):
        """One sample stacks into its own regressor"""
        sample = random_samples(rng, 1)[0]
        system = stack([sample])
        assert system.N == 1
        np.testing.assert_allclose(system.A, regressor(sample.a, sample.v), atol=1e-14)
        np.testing.assert_array_equal(system.b, sample.f.as_vector())

    def test_duplicate_doubles_objective(self, rng):
        """The objective is a sum over samples"""
        samples = random_samples(rng, 3)
        pi = rng.normal(size=10)
        single = stack(samples).objective(pi)
        assert stack(samples + samples).objective(pi) == pytest.approx(2.0 * single, rel=1e-12)

    def test_shape(self, rng):
        """Six rows per sample"""
        system = stack(random_samples(rng, 500))
        assert system.A.shape == (3000, 10)
        assert system.b.shape == (3000,)

    def test_row_order(self, rng):
        """Rows are (force, moment) per sample, samples in input order"""
        samples = random_samples(rng, 4)
        system = stack(samples)
        for i, s in enumerate(samples):
            np.testing.assert_array_equal(system.b[6 * i:6 * i + 3], s.f.force)
            np.testing.assert_array_equal(system.b[6 * i + 3:6 * i + 6], s.f.moment)

    def test_empty(self):
        """Zero samples cannot be stacked"""
        with pytest.raises(EmptySet):
            stack([])

    def test_noiseless_residual(self, rich_dataset, rich_system):
        """Ground truth fits noiseless data to rounding"""
        pi = rich_dataset.ground_truth.as_vector()
        r = rich_system.A @ pi - rich_system.b
        assert np.max(np.abs(r)) < 1e-10 * max(1.0, np.max(np.abs(rich_system.b)))


class TestExcitation:
    """Test rank and conditioning of stacked systems"""

    def test_rich_excitation_full_rank(self, rich_system):
        """Fast rotations on all axes identify all ten parameters"""
        report = analyse_excitation(rich_system)
        assert report.rank == 10
        assert report.full_rank
        assert report.condition_number < 1e8

    def test_pure_translation_rank_four(self):
        """Without rotation only m and mc are identifiable"""
        traj = TrajectoryConfig(segment_time=0.5, duration=10.0, orientation_spread=0.0, seed=2)
        system = stack(gen_dataset(rich_excitation_body(), traj, NoiseConfig()).samples)
        assert analyse_excitation(system).rank == 4

    def test_slow_motion_is_ill_conditioned(self, rich_system):
        """Ten-second segments are far worse conditioned than half-second ones"""
        slow = stack(gen_dataset(rich_excitation_body(), TrajectoryConfig(segment_time=10.0, seed=0),
                                 NoiseConfig()).samples)
        fast = analyse_excitation(rich_system).condition_number
        assert analyse_excitation(slow).condition_number >= 100.0 * fast

    def test_sample_time_is_metadata(self):
        """Samples carry an optional time stamp"""
        sample = Sample(ProperAcc.zero(), Twist.zero(), newton_euler_wrench(np.zeros(10), np.zeros(6), np.zeros(6)))
        assert sample.t is None
