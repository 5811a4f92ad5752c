"""
Exception hierarchy for the identification library
"""


class IdentificationError(Exception):
    """Base class for errors raised by the identification library"""
    pass


class InvalidRotation(IdentificationError):
    """Matrix is not a member of SO(3) within tolerance"""
    pass


class AngleNearPi(IdentificationError):
    """Rotation angle too close to pi for an unambiguous logarithm"""
    pass


class NotSymmetric(IdentificationError):
    """Matrix asymmetry exceeds tolerance"""
    pass


class ZeroMass(IdentificationError):
    """Operation needs the center of mass but the mass is (near) zero"""
    pass


class NotConsistent(IdentificationError):
    """Parameters are not fully physically consistent"""

    def __init__(self, condition, report=None):
        self.condition = condition
        self.report = report
        super().__init__(f"parameters are not fully physically consistent: {condition}")


class EmptySet(IdentificationError):
    """No samples to identify from"""
    pass


class OutOfRange(IdentificationError):
    """Argument outside the admissible interval"""
    pass


class DatasetError(IdentificationError):
    """Dataset file could not be parsed"""
    pass


class MissingHeader(DatasetError):
    """Dataset file has no (or the wrong) header row"""
    pass


class MalformedRow(DatasetError):
    """A data row has the wrong arity or a non-numeric field"""

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")
