"""
Shared fixtures for the identification test suite
"""
import numpy as np
import pytest

from harness.trajectory import (
    NoiseConfig, TrajectoryConfig, gen_dataset, poor_excitation_scenario, rich_excitation_body,
    rich_excitation_scenario,
)
from inertia.inertial_params import ThetaParams
from inertia.regressor import Sample, stack
from inertia.spatial_algebra import ProperAcc, Rotation, Twist, Wrench


def random_rotation(rng):
    """Haar-distributed rotation from the QR factorization of a Gaussian matrix"""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0.0:
        q[:, 0] = -q[:, 0]
    return Rotation.from_matrix(q)


def random_theta(rng, interior=False):
    """Random manifold point; `interior` keeps m and L away from their bounds"""
    if interior:
        return ThetaParams(rng.uniform(0.5, 5.0), rng.uniform(-0.2, 0.2, 3),
                           random_rotation(rng), rng.uniform(0.1, 1.0, 3))
    return ThetaParams(rng.uniform(0.1, 5.0), rng.uniform(-0.2, 0.2, 3),
                       random_rotation(rng), rng.uniform(0.0, 0.05, 3))


def random_samples(rng, n):
    return [
        Sample(a=ProperAcc.from_vector(rng.normal(size=6)), v=Twist.from_vector(rng.normal(size=6)),
               f=Wrench.from_vector(rng.normal(size=6)), t=0.01 * i)
        for i in range(n)
    ]


def relative_error(estimate, truth):
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    return np.linalg.norm(estimate - truth) / np.linalg.norm(truth)


@pytest.fixture
def rng():
    """Seeded generator, fresh for every test"""
    return np.random.default_rng(20240617)


@pytest.fixture(scope='session')
def rich_dataset():
    return rich_excitation_scenario(seed=0)


@pytest.fixture(scope='session')
def rich_system(rich_dataset):
    return stack(rich_dataset.samples)


@pytest.fixture(scope='session')
def rich_noisy_system():
    noise = NoiseConfig(force_std=0.05, moment_std=0.005, seed=3)
    return stack(gen_dataset(rich_excitation_body(), TrajectoryConfig(segment_time=0.5, seed=1), noise).samples)


@pytest.fixture(scope='session')
def poor_dataset():
    return poor_excitation_scenario(seed=0)


@pytest.fixture(scope='session')
def poor_system(poor_dataset):
    return stack(poor_dataset.samples)
