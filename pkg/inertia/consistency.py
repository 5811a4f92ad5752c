"""
Physical consistency checks on inertial parameters

Physical consistency: m >= 0 and I_C positive semidefinite.
Full physical consistency: pi is generated by some nonnegative density,
decided by m >= 0 and L = P^-1 eig(I_C) >= 0, which adds the triangle
inequalities on the principal moments.

Checks return verdicts with a report; they never raise on inconsistent input.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from inertia.inertial_params import MASS_EPS, P_INV, com_inertia
from inertia.spatial_algebra import param_vector, unvech

DEFAULT_TOL = 1e-9


def triangle_residuals(J):
    """(J_y + J_z - J_x, J_x + J_z - J_y, J_x + J_y - J_z), equal to 2 L"""
    Jx, Jy, Jz = np.asarray(J, dtype=float).reshape(3)
    return np.array([Jy + Jz - Jx, Jx + Jz - Jy, Jx + Jy - Jz])


@dataclass(frozen=True, eq=False)
class ConsistencyReport:
    """Per-condition verdicts and residuals of a consistency check"""

    mass_ok: bool
    com_inertia_psd_ok: bool
    triangle_ok: bool
    J: np.ndarray
    L: np.ndarray
    min_eig: float
    worst_triangle_slack: float
    body_triangle_slack: float
    m: float
    tol: float
    zero_mass: bool = False

    @property
    def physically_consistent(self):
        return self.mass_ok and self.com_inertia_psd_ok

    @property
    def fully_consistent(self):
        return self.mass_ok and self.com_inertia_psd_ok and self.triangle_ok

    @property
    def violation(self):
        """Largest amount by which m, eig(I_C) or L go negative (0 if none)"""
        return float(max(0.0, -self.m, -self.min_eig, -float(np.min(self.L))))

    def failed_conditions(self):
        failed = []
        if not self.mass_ok:
            failed.append('mass')
        if not self.com_inertia_psd_ok:
            failed.append('com_inertia_psd')
        if not self.triangle_ok:
            failed.append('triangle')
        return failed

    def as_dict(self):
        return {
            'fully_consistent': self.fully_consistent,
            'physically_consistent': self.physically_consistent,
            'mass_ok': self.mass_ok,
            'com_inertia_psd_ok': self.com_inertia_psd_ok,
            'triangle_ok': self.triangle_ok,
            'J_x': float(self.J[0]),
            'J_y': float(self.J[1]),
            'J_z': float(self.J[2]),
            'L_x': float(self.L[0]),
            'L_y': float(self.L[1]),
            'L_z': float(self.L[2]),
            'min_eig': float(self.min_eig),
            'worst_triangle_slack': float(self.worst_triangle_slack),
            'body_triangle_slack': float(self.body_triangle_slack),
            'violation': self.violation,
            'tol': float(self.tol),
        }

    def format_text(self):
        def mark(ok):
            return 'ok' if ok else 'FAILED'

        verdict = 'fully physically consistent' if self.fully_consistent else (
            'physically consistent only' if self.physically_consistent else 'not physically consistent')
        lines = [
            f"Consistency report (tol = {self.tol:.1e})",
            f"  mass m >= 0                : {mark(self.mass_ok)} (m = {self.m:.6g})",
            f"  I_C positive semidefinite  : {mark(self.com_inertia_psd_ok)} (min eig = {self.min_eig:.6g})",
            f"  triangle inequalities      : {mark(self.triangle_ok)} "
            f"(worst slack = {self.worst_triangle_slack:.6g})",
            f"  principal moments J        : {np.array2string(self.J, precision=6)}",
            f"  second moments L           : {np.array2string(self.L, precision=6)}",
            f"  I_B triangle slack         : {self.body_triangle_slack:.6g}",
            f"  verdict                    : {verdict}",
        ]
        if self.zero_mass:
            lines.insert(1, "  (zero mass: all moments must vanish)")
        return '\n'.join(lines)


def _report(pi, tol):
    x = param_vector(pi)
    m = float(x[0])
    I_B = unvech(x[4:10])
    body_slack = float(np.min(triangle_residuals(np.linalg.eigvalsh(I_B))))

    if m <= MASS_EPS:
        # zero density is the only nonnegative density with zero mass
        J = np.linalg.eigvalsh(I_B)
        L = P_INV @ J
        block_zero = bool(np.max(np.abs(x[1:])) <= tol)
        return ConsistencyReport(
            mass_ok=m >= -tol,
            com_inertia_psd_ok=block_zero,
            triangle_ok=bool(np.min(L) >= -tol),
            J=J, L=L, min_eig=float(J[0]),
            worst_triangle_slack=float(np.min(triangle_residuals(J))),
            body_triangle_slack=body_slack,
            m=m, tol=tol, zero_mass=True,
        )

    J = np.linalg.eigvalsh(com_inertia(x))
    L = P_INV @ J
    return ConsistencyReport(
        mass_ok=True,
        com_inertia_psd_ok=bool(J[0] >= -tol),
        triangle_ok=bool(np.min(L) >= -tol),
        J=J, L=L, min_eig=float(J[0]),
        worst_triangle_slack=float(np.min(triangle_residuals(J))),
        body_triangle_slack=body_slack,
        m=m, tol=tol,
    )


def check_physical(pi, tol=DEFAULT_TOL):
    """Definition of physical consistency: m >= 0 and I_C >= 0"""
    report = _report(pi, tol)
    return report.physically_consistent, report


def check_full_physical(pi, tol=DEFAULT_TOL):
    """Full physical consistency: m >= 0, I_C >= 0 and L >= 0"""
    report = _report(pi, tol)
    return report.fully_consistent, report
