"""
Identification solvers

solve_linear minimizes ||A pi - b||^2 over all of R^10. solve_manifold
minimizes the same objective over theta = (m, c, Q, L) with m >= 0 and
L >= 0, re-centering a local chart at every iterate:

    phi_theta(z) = (m + dm, c + dc, Q exp(omega), L + dL)

and taking damped Gauss-Newton steps in z. Bounds are kept by clamping in
the retraction and by freezing variables that sit on a bound with the
gradient pushing outward.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from inertia.errors import OutOfRange
from inertia.inertial_params import (
    P, InertialParams, ThetaParams, params_from_theta, principal_decomposition,
    second_moments_from_principal,
)
from inertia.spatial_algebra import VECH_INDEX, Rotation, param_vector, skew, so3_exp, unvech

logger = logging.getLogger(__name__)

MASS_FLOOR = 1e-9
MOMENT_FLOOR = 1e-12
DAMPING_MIN = 1e-12
DAMPING_MAX = 1e6
CONVERGED_STATUSES = ('grad_tol', 'step_tol')

_VECH_ROWS = np.array([i for i, _ in VECH_INDEX])
_VECH_COLS = np.array([j for _, j in VECH_INDEX])
_E = np.eye(3)


def _vech(M):
    return M[_VECH_ROWS, _VECH_COLS]


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Chart coordinates z = (dm, dc, omega, dL) around a manifold point"""

    dm: float
    dc: np.ndarray
    omega: np.ndarray
    dL: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'dm', float(self.dm))
        for name in ('dc', 'omega', 'dL'):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).reshape(3))
        if not np.all(np.isfinite(self.as_vector())):
            raise OutOfRange("tangent vector must be finite")

    @classmethod
    def from_vector(cls, z):
        z = np.asarray(z, dtype=float).reshape(10)
        return cls(z[0], z[1:4], z[4:7], z[7:10])

    @classmethod
    def zero(cls):
        return cls.from_vector(np.zeros(10))

    def as_vector(self):
        return np.concatenate([[self.dm], self.dc, self.omega, self.dL])


@dataclass(frozen=True)
class SolverConfig:
    """Stopping rules, damping and bound floors of the manifold solver"""

    max_iters: int = 500
    grad_tol: float = 1e-10
    step_tol: float = 1e-12
    damping: float = 1e-6
    mass_floor: float = MASS_FLOOR
    moment_floor: float = MOMENT_FLOOR
    seed: int = 0

    def __post_init__(self):
        if int(self.max_iters) < 1:
            raise OutOfRange(f"max_iters must be at least 1, got {self.max_iters}")
        for name in ('grad_tol', 'step_tol', 'damping', 'mass_floor', 'moment_floor'):
            if not getattr(self, name) > 0.0:
                raise OutOfRange(f"{name} must be positive, got {getattr(self, name)!r}")

    @classmethod
    def from_settings(cls, settings):
        """Build from a configuration class (see config.py)"""
        return cls(
            max_iters=int(settings.MAX_ITERS),
            grad_tol=float(settings.GRAD_TOL),
            step_tol=float(settings.STEP_TOL),
            damping=float(settings.DAMPING),
            mass_floor=float(settings.MASS_FLOOR),
            moment_floor=float(settings.MOMENT_FLOOR),
            seed=int(settings.SEED),
        )


@dataclass
class SolveReport:
    """Outcome of a manifold solve

    `objective` is the raw sum of squared wrench residuals; `history` holds
    the objective at the start point and after every accepted step.
    """

    iterations: int
    objective: float
    optimality: float
    history: list = field(default_factory=list)
    converged: bool = False
    status: str = ''
    wall_time: float = 0.0
    accepted_steps: int = 0
    final_damping: float = 0.0
    samples: int = 0

    @property
    def max_iterations(self):
        return self.status == 'max_iters'

    @property
    def objective_per_sample(self):
        return self.objective / self.samples if self.samples else float('nan')

    def as_dict(self):
        return {
            'solver_status': self.status,
            'solver_converged': self.converged,
            'solver_iterations': self.iterations,
            'solver_accepted_steps': self.accepted_steps,
            'solver_objective': self.objective,
            'solver_objective_per_sample': self.objective_per_sample,
            'solver_optimality': self.optimality,
            'solver_final_damping': self.final_damping,
            'solver_wall_time': self.wall_time,
        }


def solve_linear(system):
    """Minimum-norm least-squares estimate over R^10"""
    A, b = system.A, system.b
    cond = max(A.shape) * np.finfo(float).eps
    x, _, rank, _ = scipy.linalg.lstsq(A, b, cond=cond, lapack_driver='gelsd')
    if rank < 10:
        logger.warning("regressor is rank deficient (rank %d of 10 over %d samples); "
                       "returning the minimum-norm solution", rank, system.N)
    return InertialParams.from_vector(x)


def retract(theta, z, mass_floor=MASS_FLOOR, moment_floor=MOMENT_FLOOR):
    """phi_theta(z) with m and L clamped at their floors"""
    if not isinstance(z, TangentVector):
        z = TangentVector.from_vector(z)
    return ThetaParams(
        m=max(mass_floor, theta.m + z.dm),
        c=theta.c + z.dc,
        Q=Rotation(theta.Q.matrix @ so3_exp(z.omega).matrix),
        L=np.maximum(moment_floor, theta.L + z.dL),
    )


def params_jacobian(theta):
    """10x10 derivative of params_from_theta(retract(theta, z)) at z = 0"""
    m, c, R, L = theta.m, theta.c, theta.Q.matrix, theta.L
    S_c = skew(c)
    D = np.diag(P @ L)
    Jac = np.zeros((10, 10))

    Jac[0, 0] = 1.0
    Jac[1:4, 0] = c
    Jac[4:10, 0] = _vech(-S_c @ S_c)
    for j in range(3):
        S_e = skew(_E[j])
        Jac[1 + j, 1 + j] = m
        Jac[4:10, 1 + j] = _vech(-m * (S_e @ S_c + S_c @ S_e))
        Jac[4:10, 4 + j] = _vech(R @ (S_e @ D - D @ S_e) @ R.T)
        Jac[4:10, 7 + j] = _vech(R @ np.diag(P[:, j]) @ R.T)
    return Jac


def residual_and_jacobian(theta, system):
    """r = A pi_p(theta) - b and its Jacobian with respect to the chart z"""
    pi = params_from_theta(theta).as_vector()
    r = system.A @ pi - system.b
    return r, system.A @ params_jacobian(theta)


def _free_mask(theta, grad, config):
    free = np.ones(10, dtype=bool)
    if theta.m <= config.mass_floor and grad[0] > 0.0:
        free[0] = False
    for j in range(3):
        if theta.L[j] <= config.moment_floor and grad[7 + j] > 0.0:
            free[7 + j] = False
    return free


def _damped_step(JtJ, Jtr, free, damping):
    z = np.zeros(10)
    H = JtJ[np.ix_(free, free)] + damping * np.eye(int(free.sum()))
    try:
        factor = scipy.linalg.cho_factor(H)
    except np.linalg.LinAlgError:
        return None
    z[free] = scipy.linalg.cho_solve(factor, -Jtr[free])
    return z


def solve_manifold(system, theta0, config=None, callback: Optional[Callable] = None):
    """Levenberg-damped Gauss-Newton over (m, c, Q, L)

    Every accepted iterate maps to fully physically consistent parameters.
    A step is accepted only when it strictly lowers the objective; a run
    that exhausts max_iters returns the best iterate with status
    'max_iters'. Only the grad_tol and step_tol exits count as converged;
    a stall at maximum damping reports 'no_decrease' and converged False.
    """
    config = config or SolverConfig()
    started = time.perf_counter()

    theta = theta0
    r, J = residual_and_jacobian(theta, system)
    objective = float(r @ r)
    history = [objective]
    damping = config.damping
    accepted = 0
    optimality = float('inf')
    status = 'max_iters'
    iterations = 0

    for k in range(config.max_iters):
        grad = 2.0 * J.T @ r
        free = _free_mask(theta, grad, config)
        optimality = float(np.max(np.abs(grad[free]))) if free.any() else 0.0
        if optimality <= config.grad_tol:
            status = 'grad_tol'
            break

        iterations = k + 1
        z = _damped_step(J.T @ J, J.T @ r, free, damping)
        if z is not None and np.max(np.abs(z)) <= config.step_tol:
            status = 'step_tol'
            break

        candidate = retract(theta, z, config.mass_floor, config.moment_floor) if z is not None else None
        if candidate is not None:
            r_new, J_new = residual_and_jacobian(candidate, system)
            objective_new = float(r_new @ r_new)
        else:
            objective_new = float('inf')

        if objective_new < objective:
            theta, r, J, objective = candidate, r_new, J_new, objective_new
            history.append(objective)
            accepted += 1
            damping = max(DAMPING_MIN, damping / 10.0)
            logger.debug("iteration %d: objective %.6e, damping %.1e", iterations, objective, damping)
            if callback is not None:
                callback(theta, iterations)
        else:
            if damping >= DAMPING_MAX:
                status = 'no_decrease'
                break
            damping = min(DAMPING_MAX, damping * 10.0)

    converged = status in CONVERGED_STATUSES
    report = SolveReport(
        iterations=iterations,
        objective=objective,
        optimality=optimality,
        history=history,
        converged=converged,
        status=status,
        wall_time=time.perf_counter() - started,
        accepted_steps=accepted,
        final_damping=damping,
        samples=system.N,
    )
    if converged:
        logger.info("manifold solve finished (%s) after %d iterations, objective %.6e",
                    status, iterations, objective)
    elif status == 'no_decrease':
        logger.warning("manifold solve stalled at damping %.1e with optimality %.3e, returning best iterate "
                       "(objective %.6e)", damping, optimality, objective)
    else:
        logger.warning("manifold solve hit max_iters=%d, returning best iterate (objective %.6e)",
                       config.max_iters, objective)
    return theta, report


def theta_from_estimate(pi, mass_floor=MASS_FLOOR, moment_floor=MOMENT_FLOOR):
    """Nearest-feasible manifold point for arbitrary parameters

    m is clamped to the mass floor, negative principal moments to zero and
    L componentwise to the moment floor, so the result is always valid.
    """
    x = param_vector(pi)
    m = float(x[0])
    m_hat = max(m, mass_floor)
    c = x[1:4] / m if m > mass_floor else np.zeros(3)
    S_c = skew(c)
    I_C = unvech(x[4:10]) + m_hat * S_c @ S_c
    decomposition = principal_decomposition(0.5 * (I_C + I_C.T))
    L = second_moments_from_principal(np.maximum(decomposition.J, 0.0))
    L_hat = np.maximum(L, moment_floor)
    if m_hat != m or np.any(L_hat != L):
        logger.warning("clamped estimate onto the feasible set (m=%.6g, L=%s)",
                       m, np.array2string(L, precision=6))
    return ThetaParams(m_hat, c, decomposition.Q, L_hat)


def initial_guess(system, config=None):
    """Linear estimate projected onto the manifold"""
    config = config or SolverConfig()
    return theta_from_estimate(solve_linear(system), config.mass_floor, config.moment_floor)
