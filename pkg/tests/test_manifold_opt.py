"""
Tests for the linear and manifold identification solvers
"""
import numpy as np
import pytest

from harness.fixtures import R10, TABLE_ROWS
from harness.trajectory import NoiseConfig, TrajectoryConfig, gen_dataset, rich_excitation_body
from inertia import manifold_opt
from inertia.consistency import check_full_physical
from inertia.errors import OutOfRange
from inertia.inertial_params import ThetaParams, params_from_theta, theta_from_params
from inertia.manifold_opt import (
    DAMPING_MAX, MASS_FLOOR, MOMENT_FLOOR, SolverConfig, TangentVector, initial_guess, params_jacobian,
    residual_and_jacobian, retract, solve_linear, solve_manifold,
)
from inertia.regressor import Sample, StackedSystem, stack
from inertia.spatial_algebra import ProperAcc, Rotation, Twist, newton_euler_wrench, skew, so3_exp
from tests.conftest import random_samples, random_theta, relative_error


def _perturbed(theta, scale=1.0):
    return ThetaParams(theta.m * (1.0 + 0.1 * scale), theta.c + 0.01 * scale,
                       theta.Q @ so3_exp(scale * np.array([0.1, -0.2, 0.15])), theta.L * (1.0 + 0.5 * scale))


class TestSolveLinear:
    """Test the unconstrained least-squares estimate"""

    def test_noiseless_recovery(self, rich_dataset, rich_system):
        """Noiseless rich data recovers the ground truth"""
        pi = solve_linear(rich_system).as_vector()
        assert relative_error(pi, rich_dataset.ground_truth.as_vector()) < 1e-8

    def test_pure_translation_minimum_norm(self):
        """Rank-4 data: m and mc recovered, inertia at minimum norm"""
        truth = rich_excitation_body()
        traj = TrajectoryConfig(segment_time=0.5, duration=10.0, orientation_spread=0.0, seed=4)
        pi = solve_linear(stack(gen_dataset(truth, traj, NoiseConfig()).samples)).as_vector()
        assert relative_error(pi[:4], truth.as_vector()[:4]) < 1e-8
        np.testing.assert_allclose(pi[4:], np.zeros(6), atol=1e-10)

    def test_static_weighing(self):
        """One static sample under gravity gives the mass"""
        pi = np.array([2.5, 0.1, 0.2, 0.3, 0.1, 0.0, 0.0, 0.1, 0.0, 0.1])
        a = ProperAcc([0.0, 0.0, 9.81], np.zeros(3))
        sample = Sample(a, Twist.zero(), newton_euler_wrench(pi, a, Twist.zero()))
        assert solve_linear(stack([sample])).m == pytest.approx(2.5, rel=1e-12)


class TestRetract:
    """Test the chart map"""

    def test_zero_step(self, rng):
        """retract(theta, 0) = theta for interior theta"""
        theta = random_theta(rng, interior=True)
        moved = retract(theta, TangentVector.zero())
        assert moved.m == theta.m
        np.testing.assert_array_equal(moved.c, theta.c)
        np.testing.assert_array_equal(moved.L, theta.L)
        np.testing.assert_array_equal(moved.Q.matrix, theta.Q.matrix)

    def test_quarter_turn_in_body_axes(self):
        """omega rotates Q about its own axes"""
        Q = so3_exp([0.3, 0.0, 0.0])
        theta = ThetaParams(1.0, np.zeros(3), Q, np.ones(3))
        moved = retract(theta, TangentVector(0.0, np.zeros(3), [0.0, 0.0, np.pi / 2], np.zeros(3)))
        Rz = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        np.testing.assert_allclose(moved.Q.matrix, Q.matrix @ Rz, atol=1e-15)

    def test_bounds_clamped(self):
        """Steps through a bound stop at the floor"""
        theta = ThetaParams(1.0, np.zeros(3), Rotation.identity(), [1.0, 0.5, 0.2])
        z = TangentVector(-5.0, np.zeros(3), np.zeros(3), [-2.0, 0.1, -0.2])
        moved = retract(theta, z)
        assert moved.m == MASS_FLOOR
        np.testing.assert_allclose(moved.L, [MOMENT_FLOOR, 0.6, MOMENT_FLOOR])

    def test_tangent_vector_layout(self):
        """z = (dm, dc, omega, dL)"""
        z = TangentVector.from_vector(np.arange(10.0))
        assert z.dm == 0.0
        np.testing.assert_array_equal(z.omega, [4.0, 5.0, 6.0])
        np.testing.assert_array_equal(z.as_vector(), np.arange(10.0))


class TestJacobian:
    """Test residual_and_jacobian"""

    def test_mass_column(self, rng):
        """d pi / d m = (1, c, vech(-S(c) S(c)))"""
        theta = random_theta(rng, interior=True)
        S = skew(theta.c)
        M = -S @ S
        expected = [1.0, *theta.c, M[0, 0], M[0, 1], M[0, 2], M[1, 1], M[1, 2], M[2, 2]]
        np.testing.assert_allclose(params_jacobian(theta)[:, 0], expected, atol=1e-15)

    def test_matches_central_differences(self, rng):
        """The Jacobian agrees with central differences in the chart"""
        h = 1e-6
        for _ in range(20):
            theta = random_theta(rng, interior=True)
            system = stack(random_samples(rng, 5))
            _, J = residual_and_jacobian(theta, system)
            for k in range(10):
                step = np.zeros(10)
                step[k] = h
                r_plus, _ = residual_and_jacobian(retract(theta, step), system)
                r_minus, _ = residual_and_jacobian(retract(theta, -step), system)
                fd = (r_plus - r_minus) / (2.0 * h)
                assert np.linalg.norm(fd - J[:, k]) <= 1e-5 * max(np.linalg.norm(J[:, k]), 1e-8)

    def test_zero_residual_at_truth(self, rich_dataset, rich_system):
        """Ground truth on noiseless data has zero residual"""
        theta = theta_from_params(rich_dataset.ground_truth)
        r, J = residual_and_jacobian(theta, rich_system)
        assert np.max(np.abs(r)) < 1e-10
        assert J.shape == (rich_system.A.shape[0], 10)


class TestSolverConfig:
    """Test solver settings"""

    def test_defaults(self):
        """Defaults follow the documented stopping rules"""
        config = SolverConfig()
        assert (config.max_iters, config.grad_tol, config.step_tol, config.damping) == (500, 1e-10, 1e-12, 1e-6)

    @pytest.mark.parametrize('field', ['grad_tol', 'step_tol', 'damping', 'mass_floor', 'moment_floor'])
    def test_tolerances_must_be_positive(self, field):
        """Non-positive tolerances are rejected"""
        with pytest.raises(OutOfRange):
            SolverConfig(**{field: 0.0})


class TestInitialGuess:
    """Test the projection of the linear estimate onto the manifold"""

    def test_consistent_estimate_reproduced(self, rich_system):
        """A consistent linear estimate is reproduced exactly"""
        theta0 = initial_guess(rich_system)
        np.testing.assert_allclose(params_from_theta(theta0).as_vector(),
                                   solve_linear(rich_system).as_vector(), rtol=1e-10, atol=1e-13)

    def test_inconsistent_estimate_clamped(self):
        """The 10 s R^10 published estimate projects onto the bound"""
        row = [r for r in TABLE_ROWS if r.segment_time == 10.0 and r.manifold == R10][0]
        A = np.vstack([np.eye(10), np.zeros((2, 10))])
        b = np.concatenate([row.values, np.zeros(2)])
        theta0 = initial_guess(StackedSystem(A, b, 2))
        assert theta0.m == pytest.approx(1.836)
        assert np.min(theta0.L) == MOMENT_FLOOR
        assert check_full_physical(params_from_theta(theta0))[0]

    def test_all_zero_system(self):
        """Degenerate data gives the floor body"""
        theta0 = initial_guess(StackedSystem(np.zeros((6, 10)), np.zeros(6), 1))
        assert theta0.m == MASS_FLOOR
        np.testing.assert_array_equal(theta0.c, np.zeros(3))
        np.testing.assert_array_equal(theta0.Q.matrix, np.eye(3))
        np.testing.assert_array_equal(theta0.L, np.full(3, MOMENT_FLOOR))


class TestSolveManifold:
    """Test the manifold Gauss-Newton solver"""

    def test_noiseless_recovery(self, rich_dataset, rich_system):
        """Noiseless rich data recovers the ground truth on the manifold"""
        theta, report = solve_manifold(rich_system, initial_guess(rich_system))
        pi = params_from_theta(theta)
        assert relative_error(pi.as_vector(), rich_dataset.ground_truth.as_vector()) < 1e-6
        assert report.iterations <= 100
        assert report.status != 'max_iters'
        assert check_full_physical(pi)[0]

    def test_start_at_truth(self, rich_dataset, rich_system):
        """Starting at the optimum stops almost immediately"""
        theta, report = solve_manifold(rich_system, theta_from_params(rich_dataset.ground_truth))
        assert report.accepted_steps <= 2
        assert report.status != 'max_iters'
        assert report.objective < 1e-16

    def test_recovers_from_perturbed_start(self, rich_dataset, rich_system):
        """A perturbed start converges back to the truth"""
        start = _perturbed(theta_from_params(rich_dataset.ground_truth))
        theta, report = solve_manifold(rich_system, start)
        assert relative_error(params_from_theta(theta).as_vector(),
                              rich_dataset.ground_truth.as_vector()) < 1e-6
        assert report.wall_time > 0.0
        assert report.history[0] > report.history[-1]

    def test_matches_consistent_linear_estimate(self, rich_noisy_system):
        """When the linear estimate is consistent both objectives agree"""
        linear = solve_linear(rich_noisy_system)
        assert check_full_physical(linear)[0]
        theta, report = solve_manifold(rich_noisy_system, initial_guess(rich_noisy_system))
        f_lin = rich_noisy_system.objective(linear)
        assert report.objective >= f_lin - 1e-12
        assert report.objective == pytest.approx(f_lin, rel=1e-8)

    def test_chart_invariance(self, rich_noisy_system):
        """Equivalent signed-permutation starts reach the same parameters"""
        start = _perturbed(initial_guess(rich_noisy_system))
        swap = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0]])
        twin = ThetaParams(start.m, start.c, Rotation.from_matrix(start.Q.matrix @ swap),
                           start.L[[1, 0, 2]])
        np.testing.assert_allclose(params_from_theta(twin).as_vector(),
                                   params_from_theta(start).as_vector(), atol=1e-14)
        pi_a = params_from_theta(solve_manifold(rich_noisy_system, start)[0]).as_vector()
        pi_b = params_from_theta(solve_manifold(rich_noisy_system, twin)[0]).as_vector()
        assert relative_error(pi_b, pi_a) < 1e-6

    def test_poor_excitation(self, poor_dataset, poor_system):
        """Slow noisy data: linear estimate inconsistent, manifold estimate consistent"""
        linear = solve_linear(poor_system)
        assert not check_full_physical(linear)[0]

        theta, report = solve_manifold(poor_system, initial_guess(poor_system))
        constrained = params_from_theta(theta)
        assert check_full_physical(constrained)[0]
        assert report.objective >= poor_system.objective(linear) - 1e-12
        assert constrained.m == pytest.approx(linear.m, rel=0.02)
        assert relative_error(constrained.first_moment, linear.first_moment) < 0.02
        assert 'noise_seed' in poor_dataset.metadata

    def test_max_iterations_flagged(self, rich_system, rich_dataset):
        """Running out of iterations returns the best iterate with a flag"""
        start = _perturbed(theta_from_params(rich_dataset.ground_truth), scale=3.0)
        theta, report = solve_manifold(rich_system, start, SolverConfig(max_iters=1))
        assert report.max_iterations
        assert not report.converged
        assert report.objective <= report.history[0]
        assert check_full_physical(params_from_theta(theta))[0]

    def test_stall_is_not_converged(self, rich_system, rich_dataset, monkeypatch):
        """Rejecting every step until the damping cap reports no_decrease, not convergence"""
        monkeypatch.setattr(manifold_opt, '_damped_step', lambda *args: None)
        start = _perturbed(theta_from_params(rich_dataset.ground_truth))
        theta, report = solve_manifold(rich_system, start)
        assert report.status == 'no_decrease'
        assert not report.converged
        assert not report.max_iterations
        assert report.accepted_steps == 0
        assert report.optimality > SolverConfig().grad_tol
        assert report.final_damping == DAMPING_MAX
        np.testing.assert_array_equal(params_from_theta(theta).as_vector(), params_from_theta(start).as_vector())

    def test_objective_per_sample(self, rich_noisy_system):
        """The per-sample objective divides by the number of samples"""
        _, report = solve_manifold(rich_noisy_system, initial_guess(rich_noisy_system))
        assert report.samples == rich_noisy_system.N
        assert report.objective_per_sample == pytest.approx(report.objective / rich_noisy_system.N)
        assert report.as_dict()['solver_objective_per_sample'] == report.objective_per_sample

    def test_every_iterate_feasible_and_monotone(self, rng):
        """Accepted iterates stay consistent and strictly lower the objective"""
        config = SolverConfig(max_iters=10)
        for _ in range(1000):
            system = stack(random_samples(rng, 4))
            seen = []

            def monitor(theta, k):
                assert theta.m >= MASS_FLOOR and np.all(theta.L >= MOMENT_FLOOR)
                pi = params_from_theta(theta).as_vector()
                ok, report = check_full_physical(pi, tol=1e-12 * max(1.0, np.abs(pi).max()))
                assert ok, report.format_text()
                seen.append(k)

            _, report = solve_manifold(system, random_theta(rng), config, callback=monitor)
            assert len(seen) == report.accepted_steps
            assert all(b < a for a, b in zip(report.history, report.history[1:]))
            assert report.converged == (report.status in ('grad_tol', 'step_tol'))
