"""
Input validation for command-line values and solver configuration files
"""
import math

from dotenv import dotenv_values

from inertia.errors import OutOfRange
from inertia.manifold_opt import SolverConfig

METHODS = ('linear', 'manifold')

# config-file key -> (SolverConfig field, type)
SOLVER_KEYS = {
    'MAX_ITERS': ('max_iters', int),
    'GRAD_TOL': ('grad_tol', float),
    'STEP_TOL': ('step_tol', float),
    'DAMPING': ('damping', float),
    'MASS_FLOOR': ('mass_floor', float),
    'MOMENT_FLOOR': ('moment_floor', float),
    'SEED': ('seed', int),
}


class ValidationError(Exception):
    """Custom validation error"""
    pass


def validate_required(value, field_name):
    """Validate required field"""
    if value is None or not str(value).strip():
        raise ValidationError(f"{field_name} is required")
    return str(value).strip()


def validate_number(value, field_name):
    """Validate a finite real number"""
    try:
        number = float(value)
    except (ValueError, TypeError):
        raise ValidationError(f"{field_name}: {value!r} is not a number")
    if not math.isfinite(number):
        raise ValidationError(f"{field_name} must be finite")
    return number


def validate_vector(text, length, field_name):
    """Validate a comma-separated list of `length` numbers"""
    text = validate_required(text, field_name)
    parts = [p for p in text.replace(' ', '').split(',') if p]
    if len(parts) != length:
        raise ValidationError(f"{field_name} needs {length} comma-separated values, got {len(parts)}")
    return [validate_number(p, field_name) for p in parts]


def validate_values(text):
    """Validate the ten inertial parameters m,mcx,mcy,mcz,ixx,ixy,ixz,iyy,iyz,izz"""
    return validate_vector(text, 10, 'values')


def validate_tolerance(value, field_name='tol'):
    """Validate a nonnegative tolerance"""
    tol = validate_number(value, field_name)
    if tol < 0:
        raise ValidationError(f"{field_name} cannot be negative")
    return tol


def validate_nonnegative(value, field_name):
    number = validate_number(value, field_name)
    if number < 0:
        raise ValidationError(f"{field_name} cannot be negative")
    return number


def validate_positive(value, field_name):
    number = validate_number(value, field_name)
    if number <= 0:
        raise ValidationError(f"{field_name} must be positive")
    return number


def validate_solver_config(path, defaults=None):
    """Read a KEY=VALUE solver configuration file on top of `defaults`"""
    values = dotenv_values(path)
    settings = dict((defaults or SolverConfig()).__dict__)
    for key, raw in values.items():
        entry = SOLVER_KEYS.get(key.upper())
        if entry is None:
            raise ValidationError(f"{path}: unknown solver setting {key!r} "
                                  f"(known: {', '.join(SOLVER_KEYS)})")
        name, kind = entry
        number = validate_number(validate_required(raw, key), key)
        if kind is int:
            if number != int(number):
                raise ValidationError(f"{key} must be an integer")
            number = int(number)
        settings[name] = number
    try:
        return SolverConfig(**settings)
    except OutOfRange as exc:
        raise ValidationError(f"{path}: {exc}")
