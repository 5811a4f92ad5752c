"""
Inertial parameter spaces and the maps between them

pi in R^10 holds (m, m c, vech(I_B)) with no consistency requirement; a
ThetaParams (m, c, Q, L) always maps to fully physically consistent
parameters. The cuboid density oracle realizes any theta as an actual
nonnegative density so that the parametrization can be checked by
numerical integration.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from inertia.errors import NotConsistent, OutOfRange, ZeroMass
from inertia.spatial_algebra import (
    Rotation, SYMMETRY_TOL, param_vector, skew, unvech, vech,
)

logger = logging.getLogger(__name__)

# J = P L maps central second moments to principal moments of inertia
P = np.array([[0.0, 1.0, 1.0],
              [1.0, 0.0, 1.0],
              [1.0, 1.0, 0.0]])
P_INV = 0.5 * np.array([[-1.0, 1.0, 1.0],
                        [1.0, -1.0, 1.0],
                        [1.0, 1.0, -1.0]])

MASS_EPS = 1e-12
MIN_HALF_SIDE = 1e-9

PARAM_NAMES = ('m', 'mcx', 'mcy', 'mcz', 'ixx', 'ixy', 'ixz', 'iyy', 'iyz', 'izz')


def _frozen(a, shape):
    a = np.array(a, dtype=float).reshape(shape)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class InertialParams:
    """pi = (m, m c, vech(I_B)) in kg, kg m, kg m^2"""

    m: float
    first_moment: np.ndarray
    inertia_vech: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'm', float(self.m))
        object.__setattr__(self, 'first_moment', _frozen(self.first_moment, (3,)))
        object.__setattr__(self, 'inertia_vech', _frozen(self.inertia_vech, (6,)))
        if not np.all(np.isfinite(self.as_vector())):
            raise ValueError("inertial parameters must be finite")

    @classmethod
    def from_vector(cls, x):
        x = param_vector(x)
        return cls(x[0], x[1:4], x[4:10])

    @classmethod
    def from_mapping(cls, values):
        return cls.from_vector([float(values[name]) for name in PARAM_NAMES])

    def as_vector(self):
        return np.concatenate([[self.m], self.first_moment, self.inertia_vech])

    def as_dict(self):
        return dict(zip(PARAM_NAMES, (float(x) for x in self.as_vector())))

    @property
    def inertia(self):
        """Body-frame 3D inertia I_B"""
        return unvech(self.inertia_vech)

    @property
    def com(self):
        if self.m <= MASS_EPS:
            raise ZeroMass(f"center of mass undefined for m = {self.m!r}")
        return self.first_moment / self.m

    def __array__(self, dtype=None, copy=None):
        return np.array(self.as_vector(), dtype=dtype)

    def __repr__(self):
        body = ', '.join(f"{k}={v:.6g}" for k, v in self.as_dict().items())
        return f"InertialParams({body})"


@dataclass(frozen=True, eq=False)
class ThetaParams:
    """Manifold point (m, c, Q, L) with m >= 0 and L >= 0 componentwise"""

    m: float
    c: np.ndarray
    Q: Rotation
    L: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'm', float(self.m))
        object.__setattr__(self, 'c', _frozen(self.c, (3,)))
        object.__setattr__(self, 'L', _frozen(self.L, (3,)))
        if not isinstance(self.Q, Rotation):
            object.__setattr__(self, 'Q', Rotation.from_matrix(self.Q))
        if self.m < 0.0:
            raise OutOfRange(f"mass must be nonnegative, got {self.m!r}")
        if np.any(self.L < 0.0):
            raise OutOfRange(f"second moments must be nonnegative, got {self.L}")

    @property
    def J(self):
        """Principal moments of inertia at the center of mass"""
        return P @ self.L

    def __repr__(self):
        return (f"ThetaParams(m={self.m:.6g}, c={np.array2string(self.c, precision=6)}, "
                f"L={np.array2string(self.L, precision=6)})")


@dataclass(frozen=True, eq=False)
class Cuboid:
    """Uniform-density box: half sides d, center c, axes Q, density rho

    Zero half sides are thickened to MIN_HALF_SIDE when the density and the
    integration grid are computed, so degenerate (flat, rod, point) bodies
    stay integrable.
    """

    half_sides: np.ndarray
    center: np.ndarray
    orientation: Rotation
    density: float

    def __post_init__(self):
        object.__setattr__(self, 'half_sides', _frozen(self.half_sides, (3,)))
        object.__setattr__(self, 'center', _frozen(self.center, (3,)))
        object.__setattr__(self, 'density', float(self.density))
        if np.any(self.half_sides < 0.0) or self.density < 0.0:
            raise OutOfRange("cuboid half sides and density must be nonnegative")

    @property
    def effective_half_sides(self):
        return np.maximum(self.half_sides, MIN_HALF_SIDE)

    @property
    def mass(self):
        return self.density * 8.0 * float(np.prod(self.effective_half_sides))


@dataclass(frozen=True, eq=False)
class PrincipalDecomposition:
    """I_C = Q diag(J) Q^T with J ascending"""

    Q: Rotation
    J: np.ndarray

    def reconstruct(self):
        R = self.Q.matrix
        return R @ np.diag(self.J) @ R.T


def params_from_theta(theta):
    """pi_p(theta) = (m, m c, vech(Q diag(P L) Q^T - m S(c) S(c)))"""
    R = theta.Q.matrix
    S_c = skew(theta.c)
    I_B = R @ np.diag(P @ theta.L) @ R.T - theta.m * S_c @ S_c
    I_B = 0.5 * (I_B + I_B.T)
    return InertialParams(theta.m, theta.m * theta.c, vech(I_B))


def com_inertia(pi):
    """Parallel axis theorem: I_C = I_B + m S(c) S(c)"""
    x = param_vector(pi)
    m = x[0]
    if m <= MASS_EPS:
        raise ZeroMass(f"center of mass undefined for m = {m!r}")
    c = x[1:4] / m
    S_c = skew(c)
    I_C = unvech(x[4:10]) + m * S_c @ S_c
    return 0.5 * (I_C + I_C.T)


def principal_decomposition(I_C, tol=SYMMETRY_TOL):
    """Diagonalize a symmetric 3x3 inertia with a proper rotation

    Eigenvalues are returned ascending. When the eigenvector basis is
    left-handed its last column is negated; for repeated eigenvalues any
    orthonormal completion is returned.
    """
    I_C = np.asarray(I_C, dtype=float)
    vech(I_C, tol=tol)  # raises NotSymmetric
    J, V = np.linalg.eigh(0.5 * (I_C + I_C.T))
    if J[-1] == J[0]:
        # isotropic: every frame is principal
        V = np.eye(3)
    elif np.linalg.det(V) < 0.0:
        V[:, -1] = -V[:, -1]
    return PrincipalDecomposition(Rotation(V), J)


def second_moments_from_principal(J):
    """L = P^-1 J; negative entries mean a violated triangle inequality"""
    return P_INV @ np.asarray(J, dtype=float).reshape(3)


def theta_from_params(pi, tol=None):
    """Recover a manifold point from fully physically consistent parameters

    `tol` is the absolute slack (kg m^2) allowed on the eigenvalues of I_C and
    on L before raising NotConsistent; by default 1e-10 times the norm of
    I_C. Tolerated negative values are clamped to zero. Q is recovered only up
    to the signed-permutation symmetry of the principal axes.
    """
    x = param_vector(pi)
    m = x[0]
    if m < -MASS_EPS:
        raise NotConsistent(f"negative mass m = {m:.6g}")

    if m <= MASS_EPS:
        if np.max(np.abs(x[1:])) > (tol or 0.0) + MASS_EPS:
            raise NotConsistent("zero mass with nonzero first or second moments")
        return ThetaParams(0.0, np.zeros(3), Rotation.identity(), np.zeros(3))

    I_C = com_inertia(x)
    if tol is None:
        tol = 1e-10 * max(np.linalg.norm(I_C, 2), MASS_EPS)
    decomposition = principal_decomposition(I_C)
    J = decomposition.J
    if J[0] < -tol:
        raise NotConsistent(f"I_C is not positive semidefinite (min eigenvalue {J[0]:.6g})")
    L = second_moments_from_principal(np.maximum(J, 0.0))
    if np.min(L) < -tol:
        raise NotConsistent(f"triangle inequality violated (L = {np.array2string(L, precision=6)})")
    return ThetaParams(m, x[1:4] / m, decomposition.Q, np.maximum(L, 0.0))


def cuboid_from_theta(theta):
    """Uniform box realizing theta: d = sqrt(3 L / m), density m / volume"""
    if theta.m <= MASS_EPS:
        raise ZeroMass("a cuboid realization needs a positive mass")
    d = np.sqrt(3.0 * np.maximum(theta.L, 0.0) / theta.m)
    volume = 8.0 * float(np.prod(np.maximum(d, MIN_HALF_SIDE)))
    return Cuboid(d, theta.c, theta.Q, theta.m / volume)


def _box_moments(half_sides, density, n):
    """Midpoint-rule mass, first and second moments of a centered uniform box"""
    h = 2.0 * half_sides / n
    axes = [-half_sides[k] + (np.arange(n) + 0.5) * h[k] for k in range(3)]
    yy, zz = np.meshgrid(axes[1], axes[2], indexing='ij')
    slab = np.column_stack([np.zeros(yy.size), yy.ravel(), zz.ravel()])
    weight = density * float(np.prod(h))

    mass = 0.0
    first = np.zeros(3)
    second = np.zeros((3, 3))
    # one x-slab at a time, always summed in the same order
    for x in axes[0]:
        slab[:, 0] = x
        mass += weight * slab.shape[0]
        first += weight * slab.sum(axis=0)
        second += weight * slab.T @ slab
    return mass, first, second


def params_from_density_grid(body, resolution, extrapolate=True):
    """Integrate the cuboid density numerically into inertial parameters

    The box is gridded in its own principal frame (resolution cells per axis,
    midpoint rule) and the moments are moved to the body frame analytically.
    With `extrapolate`, one Richardson step against the half-resolution grid
    removes the h^2 error term of the midpoint rule.
    """
    resolution = int(resolution)
    if resolution < 2:
        raise OutOfRange(f"resolution must be at least 2, got {resolution}")

    half = body.effective_half_sides
    mass, first, second = _box_moments(half, body.density, resolution)
    if extrapolate:
        coarse = resolution // 2
        ratio2 = (resolution / coarse) ** 2
        _, first_c, second_c = _box_moments(half, body.density, coarse)
        first = (ratio2 * first - first_c) / (ratio2 - 1.0)
        second = (ratio2 * second - second_c) / (ratio2 - 1.0)

    R = body.orientation.matrix
    c = body.center
    s = R @ first
    # second moment about the body origin, then I = tr(E) 1 - E
    E = R @ second @ R.T + np.outer(s, c) + np.outer(c, s) + mass * np.outer(c, c)
    I_B = np.trace(E) * np.eye(3) - E
    I_B = 0.5 * (I_B + I_B.T)
    logger.debug("integrated cuboid at resolution %d: m=%.6g", resolution, mass)
    return InertialParams(mass, mass * c + s, vech(I_B))
