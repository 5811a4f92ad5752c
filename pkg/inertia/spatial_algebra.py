"""
3D/6D algebra for a single rigid body expressed in its body frame

Vectors are numpy arrays of shape (3,), matrices of shape (3, 3). Twists,
wrenches and proper accelerations order their components (linear, angular),
i.e. (v, omega), (f, mu) and (a, alpha).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from inertia.errors import AngleNearPi, InvalidRotation, NotSymmetric

ROTATION_TOL = 1e-12
SYMMETRY_TOL = 1e-9
SMALL_ANGLE = 1e-8
NEAR_PI = 1e-9

# vech ordering (xx, xy, xz, yy, yz, zz)
VECH_INDEX = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


def _vec3(u):
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {u.shape}")
    return u


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def skew(u):
    """Skew-symmetric matrix S(u) such that S(u) @ v == cross(u, v)"""
    x, y, z = _vec3(u)
    return np.array([[0.0, -z, y],
                     [z, 0.0, -x],
                     [-y, x, 0.0]])


def unskew(S):
    """Inverse of skew, reading the antisymmetric part of S"""
    S = np.asarray(S, dtype=float)
    return 0.5 * np.array([S[2, 1] - S[1, 2], S[0, 2] - S[2, 0], S[1, 0] - S[0, 1]])


@dataclass(frozen=True, eq=False)
class Rotation:
    """Element of SO(3)

    Construct from raw matrices with `Rotation.from_matrix`, which validates
    orthonormality and determinant; the plain constructor trusts its input
    and is used by the exponential map and the eigen-decomposition.
    """

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'matrix', _frozen(self.matrix))

    @classmethod
    def from_matrix(cls, R, tol=ROTATION_TOL):
        R = np.asarray(R, dtype=float)
        if R.shape != (3, 3) or not np.all(np.isfinite(R)):
            raise InvalidRotation(f"expected a finite 3x3 matrix, got shape {R.shape}")
        orth_err = np.max(np.abs(R.T @ R - np.eye(3)))
        det_err = abs(np.linalg.det(R) - 1.0)
        if orth_err > tol or det_err > tol:
            raise InvalidRotation(
                f"not a rotation: |R^T R - 1| = {orth_err:.3e}, |det R - 1| = {det_err:.3e}")
        return cls(R)

    @classmethod
    def identity(cls):
        return cls(np.eye(3))

    def inverse(self):
        return Rotation(self.matrix.T)

    def __matmul__(self, other):
        if isinstance(other, Rotation):
            return Rotation(self.matrix @ other.matrix)
        return self.matrix @ np.asarray(other, dtype=float)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"Rotation({np.array2string(self.matrix, precision=6)})"


def so3_exp(omega):
    """Rodrigues exponential map from a rotation vector to SO(3)"""
    omega = _vec3(omega)
    angle = np.linalg.norm(omega)
    S = skew(omega)
    if angle < SMALL_ANGLE:
        return Rotation(np.eye(3) + S + 0.5 * S @ S)
    # 1 - cos written with the half-angle sine keeps precision for small angles
    one_minus_cos = 2.0 * np.sin(angle / 2.0) ** 2
    R = np.eye(3) + np.sin(angle) / angle * S + one_minus_cos / angle ** 2 * S @ S
    return Rotation(R)


def so3_log(R):
    """Rotation vector of R, the inverse of so3_exp for angles below pi

    Raises AngleNearPi when the angle is within 1e-9 of pi, where the
    rotation axis sign is ambiguous.
    """
    R = np.asarray(R, dtype=float)
    antisym = unskew(R)  # sin(angle) * axis
    sin_angle = np.linalg.norm(antisym)
    cos_angle = 0.5 * (np.trace(R) - 1.0)
    angle = np.arctan2(sin_angle, cos_angle)

    if np.pi - angle < NEAR_PI:
        raise AngleNearPi(f"rotation angle {angle!r} is within {NEAR_PI} of pi")
    if angle < SMALL_ANGLE:
        return antisym
    if angle < 0.5 * np.pi:
        return angle / sin_angle * antisym

    # Close to pi the antisymmetric part vanishes; read the axis from the
    # symmetric part (1 - cos) n n^T and take its sign from the antisymmetric one.
    B = 0.5 * (R + R.T) - cos_angle * np.eye(3)
    k = int(np.argmax(np.diag(B)))
    axis = B[:, k] / np.linalg.norm(B[:, k])
    if axis @ antisym < 0.0:
        axis = -axis
    return angle * axis


@dataclass(frozen=True, eq=False)
class Twist:
    """Body twist (linear m/s, angular rad/s)"""

    linear: np.ndarray
    angular: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'linear', _frozen(_vec3(self.linear)))
        object.__setattr__(self, 'angular', _frozen(_vec3(self.angular)))

    @classmethod
    def from_vector(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(x[:3], x[3:6])

    @classmethod
    def zero(cls):
        return cls(np.zeros(3), np.zeros(3))

    def as_vector(self):
        return np.concatenate([self.linear, self.angular])


@dataclass(frozen=True, eq=False)
class ProperAcc:
    """Proper body acceleration (linear m/s^2 including -R^T g, angular rad/s^2)"""

    linear: np.ndarray
    angular: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'linear', _frozen(_vec3(self.linear)))
        object.__setattr__(self, 'angular', _frozen(_vec3(self.angular)))

    @classmethod
    def from_vector(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(x[:3], x[3:6])

    @classmethod
    def zero(cls):
        return cls(np.zeros(3), np.zeros(3))

    def as_vector(self):
        return np.concatenate([self.linear, self.angular])


@dataclass(frozen=True, eq=False)
class Wrench:
    """External wrench on the body (force N, moment N m)"""

    force: np.ndarray
    moment: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'force', _frozen(_vec3(self.force)))
        object.__setattr__(self, 'moment', _frozen(_vec3(self.moment)))

    @classmethod
    def from_vector(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(x[:3], x[3:6])

    def as_vector(self):
        return np.concatenate([self.force, self.moment])


def cross_force(v):
    """6D force cross product operator of a twist

    [[S(omega), 0], [S(v), S(omega)]] with v the linear and omega the angular
    part of the twist.
    """
    if isinstance(v, Twist):
        lin, ang = v.linear, v.angular
    else:
        x = np.asarray(v, dtype=float)
        lin, ang = x[:3], x[3:6]
    S_w = skew(ang)
    return np.block([[S_w, np.zeros((3, 3))],
                     [skew(lin), S_w]])


def vech(M, tol=SYMMETRY_TOL):
    """Serialize a symmetric 3x3 matrix as (xx, xy, xz, yy, yz, zz)"""
    M = np.asarray(M, dtype=float)
    asym = np.max(np.abs(M - M.T))
    if asym > tol:
        raise NotSymmetric(f"matrix asymmetry {asym:.3e} exceeds {tol:.1e}")
    return np.array([M[i, j] for i, j in VECH_INDEX])


def unvech(h):
    """Rebuild the symmetric 3x3 matrix from its vech serialization"""
    xx, xy, xz, yy, yz, zz = np.asarray(h, dtype=float).reshape(6)
    return np.array([[xx, xy, xz],
                     [xy, yy, yz],
                     [xz, yz, zz]])


def param_vector(pi):
    """Accept InertialParams or any 10-element array-like"""
    x = np.asarray(pi, dtype=float).reshape(-1)
    if x.shape != (10,):
        raise ValueError(f"expected 10 inertial parameters, got {x.shape[0]}")
    return x


@dataclass(frozen=True, eq=False)
class SpatialInertia:
    """6x6 spatial inertia; build it with spatial_inertia_from_params"""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'matrix', _frozen(self.matrix))

    def __matmul__(self, other):
        return self.matrix @ np.asarray(other, dtype=float)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.matrix, dtype=dtype)


def spatial_inertia_from_params(pi):
    """Spatial inertia [[m 1, -S(mc)], [S(mc), I_B]] taken directly from pi"""
    x = param_vector(pi)
    m, mc, I_B = x[0], x[1:4], unvech(x[4:10])
    S_mc = skew(mc)
    return SpatialInertia(np.block([[m * np.eye(3), -S_mc],
                                    [S_mc, I_B]]))


def newton_euler_wrench(pi, a, v):
    """Wrench f = M a^g + v x* M v acting on the body"""
    M = spatial_inertia_from_params(pi).matrix
    a_vec = a.as_vector() if isinstance(a, ProperAcc) else np.asarray(a, dtype=float)
    v_vec = v.as_vector() if isinstance(v, Twist) else np.asarray(v, dtype=float)
    return Wrench.from_vector(M @ a_vec + cross_force(v_vec) @ (M @ v_vec))
