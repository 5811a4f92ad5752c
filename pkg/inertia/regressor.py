"""
Linear regressor Y(a^g, v) with Y pi = f, and stacked least-squares systems
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from inertia.errors import EmptySet
from inertia.spatial_algebra import (
    ProperAcc, Twist, Wrench, cross_force, param_vector, spatial_inertia_from_params,
)

logger = logging.getLogger(__name__)

# Spatial inertia of each canonical basis vector of R^10; the regressor
# column k is the Newton-Euler wrench of basis parameters e_k.
_BASIS_INERTIAS = np.stack([spatial_inertia_from_params(e).matrix for e in np.eye(10)])


@dataclass(frozen=True, eq=False)
class Sample:
    """One measurement: proper acceleration, twist, wrench and time stamp"""

    a: ProperAcc
    v: Twist
    f: Wrench
    t: Optional[float] = None


@dataclass(frozen=True, eq=False)
class StackedSystem:
    """A pi ~= b with 6 rows per sample ordered (f_x, f_y, f_z, mu_x, mu_y, mu_z)"""

    A: np.ndarray
    b: np.ndarray
    N: int

    def residual(self, pi):
        return self.A @ param_vector(pi) - self.b

    def objective(self, pi):
        """Sum over samples of the squared wrench residual norms"""
        r = self.residual(pi)
        return float(r @ r)


@dataclass(frozen=True)
class ExcitationReport:
    """Rank and conditioning of a stacked regressor"""

    rank: int
    condition_number: float
    singular_values: tuple

    @property
    def full_rank(self):
        return self.rank == 10


def _skew_batch(u):
    S = np.zeros(u.shape[:-1] + (3, 3))
    S[..., 0, 1], S[..., 0, 2] = -u[..., 2], u[..., 1]
    S[..., 1, 0], S[..., 1, 2] = u[..., 2], -u[..., 0]
    S[..., 2, 0], S[..., 2, 1] = -u[..., 1], u[..., 0]
    return S


def _cross_force_batch(twists):
    X = np.zeros((twists.shape[0], 6, 6))
    S_w = _skew_batch(twists[:, 3:6])
    X[:, :3, :3] = S_w
    X[:, 3:, :3] = _skew_batch(twists[:, :3])
    X[:, 3:, 3:] = S_w
    return X


def regressor(a, v):
    """6x10 matrix whose column k is the wrench produced by basis parameters e_k"""
    a_vec = a.as_vector() if isinstance(a, ProperAcc) else np.asarray(a, dtype=float)
    v_vec = v.as_vector() if isinstance(v, Twist) else np.asarray(v, dtype=float)
    M_a = np.einsum('kij,j->ik', _BASIS_INERTIAS, a_vec)
    M_v = np.einsum('kij,j->ik', _BASIS_INERTIAS, v_vec)
    return M_a + cross_force(v_vec) @ M_v


def regressor_batch(accelerations, twists):
    """Regressors of N samples at once, shape (N, 6, 10)"""
    acc = np.asarray(accelerations, dtype=float).reshape(-1, 6)
    tw = np.asarray(twists, dtype=float).reshape(-1, 6)
    M_a = np.einsum('kij,nj->nik', _BASIS_INERTIAS, acc)
    M_v = np.einsum('kij,nj->nik', _BASIS_INERTIAS, tw)
    return M_a + np.einsum('nij,njk->nik', _cross_force_batch(tw), M_v)


def stack(samples):
    """Stack per-sample regressors and wrenches into one least-squares system"""
    samples = list(samples)
    if not samples:
        raise EmptySet("cannot build a regressor system from zero samples")
    acc = np.array([s.a.as_vector() for s in samples])
    tw = np.array([s.v.as_vector() for s in samples])
    wrenches = np.array([s.f.as_vector() for s in samples])
    Y = regressor_batch(acc, tw)
    n = len(samples)
    return StackedSystem(Y.reshape(6 * n, 10), wrenches.reshape(6 * n), n)


def analyse_excitation(system, rtol=None):
    """Numerical rank and condition number of A^T A for a stacked system"""
    s = np.linalg.svd(system.A, compute_uv=False)
    if rtol is None:
        rtol = max(system.A.shape) * np.finfo(float).eps
    rank = int(np.sum(s > rtol * s[0])) if s[0] > 0.0 else 0
    cond = float((s[0] / s[-1]) ** 2) if s[-1] > 0.0 else float('inf')
    return ExcitationReport(rank, cond, tuple(float(x) for x in s))
