"""
Published identification results used as checker fixtures

Ten rows: five datasets (segment times 10, 5, 2, 1 and 0.5 s), each
identified over R^10 and over the manifold. Values are rounded to three
decimals, so rows close to the boundary of the feasible set can land a few
1e-3 kg m^2 outside it; `classify_row` separates those from real violations.
"""
from __future__ import annotations

from dataclasses import dataclass

from inertia.consistency import check_full_physical
from inertia.inertial_params import InertialParams

R10 = 'R10'
MANIFOLD = 'P'

CONSISTENT = 'consistent'
WITHIN_ROUNDING = 'within rounding'
INCONSISTENT = 'inconsistent'


@dataclass(frozen=True)
class PublishedRow:
    segment_time: float
    manifold: str
    values: tuple
    highlighted: bool = False

    @property
    def label(self):
        return f"{self.segment_time:g}s {self.manifold}"

    @property
    def params(self):
        return InertialParams.from_vector(self.values)


#                 m      mcx    mcy    mcz    ixx    ixy     ixz     iyy    iyz    izz
TABLE_ROWS = (
    PublishedRow(10.0, R10, (1.836, 0.062, 0.001, 0.208, 0.580, 0.593, -0.541, 1.022, 0.190, -0.129), True),
    PublishedRow(10.0, MANIFOLD, (1.836, 0.062, 0.001, 0.208, 0.215, 0.012, -0.064, 0.227, 0.038, 0.028)),
    PublishedRow(5.0, R10, (1.842, 0.061, 0.000, 0.206, 0.128, -0.018, -0.125, 0.125, 0.026, -0.001), True),
    PublishedRow(5.0, MANIFOLD, (1.842, 0.060, 0.000, 0.206, 0.166, 0.001, -0.089, 0.216, 0.001, 0.050)),
    PublishedRow(2.0, R10, (1.852, 0.060, 0.001, 0.206, 0.065, 0.001, -0.035, 0.066, 0.006, 0.007)),
    PublishedRow(2.0, MANIFOLD, (1.852, 0.060, 0.001, 0.206, 0.067, 0.001, -0.030, 0.086, 0.003, 0.014)),
    PublishedRow(1.0, R10, (1.820, 0.060, 0.002, 0.205, 0.032, 0.0014, -0.017, 0.036, 0.002, 0.008)),
    PublishedRow(1.0, MANIFOLD, (1.820, 0.060, 0.002, 0.205, 0.034, 0.001, -0.015, 0.042, 0.001, 0.009)),
    PublishedRow(0.5, R10, (1.843, 0.060, 0.005, 0.204, 0.033, 0.003, -0.014, 0.035, 0.000, 0.008)),
    PublishedRow(0.5, MANIFOLD, (1.844, 0.059, 0.004, 0.204, 0.037, 0.001, -0.013, 0.039, 0.000, 0.008)),
)


@dataclass(frozen=True)
class RowVerdict:
    row: PublishedRow
    fully_consistent: bool
    violation: float
    classification: str
    report: object

    @property
    def matches_highlighting(self):
        """A highlighted row must fail; an unhighlighted one must not be a real violation"""
        if self.row.highlighted:
            return not self.fully_consistent
        return self.classification != INCONSISTENT


def classify_row(row, tol=1e-6, rounding_band=5e-3):
    ok, report = check_full_physical(row.params, tol=tol)
    if ok:
        classification = CONSISTENT
    elif report.violation < rounding_band:
        classification = WITHIN_ROUNDING
    else:
        classification = INCONSISTENT
    return RowVerdict(row, ok, report.violation, classification, report)


def classify_table(rows=TABLE_ROWS, tol=1e-6, rounding_band=5e-3):
    return [classify_row(row, tol, rounding_band) for row in rows]
