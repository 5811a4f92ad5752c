"""
Configuration management for the inertial parameter identification tools
"""
import os


def _env_float(name, default):
    return float(os.environ.get(name, default))


def _env_int(name, default):
    return int(os.environ.get(name, default))


class Config:
    """Base configuration class"""

    DEBUG = False
    TESTING = False

    # Logging
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')
    LOG_FILE = os.environ.get('LOG_FILE', 'logs/identification.log')
    LOG_TO_CONSOLE = os.environ.get('LOG_TO_CONSOLE', '').lower() in ('1', 'true', 'yes')

    # Consistency checks (kg m^2)
    CONSISTENCY_TOL = _env_float('CONSISTENCY_TOL', 1e-9)
    TABLE_TOL = _env_float('TABLE_TOL', 1e-6)
    ROUNDING_BAND = _env_float('ROUNDING_BAND', 5e-3)

    # Manifold solver
    MAX_ITERS = _env_int('MAX_ITERS', 500)
    GRAD_TOL = _env_float('GRAD_TOL', 1e-10)
    STEP_TOL = _env_float('STEP_TOL', 1e-12)
    DAMPING = _env_float('DAMPING', 1e-6)
    MASS_FLOOR = _env_float('MASS_FLOOR', 1e-9)
    MOMENT_FLOOR = _env_float('MOMENT_FLOOR', 1e-12)
    SEED = _env_int('SEED', 0)

    # Synthetic experiments
    SAMPLE_RATE = _env_float('SAMPLE_RATE', 100.0)
    SEGMENT_TIME = _env_float('SEGMENT_TIME', 0.5)
    DURATION = _env_float('DURATION', 60.0)
    ORIENTATION_SPREAD = _env_float('ORIENTATION_SPREAD', 0.8)
    POSITION_SPREAD = _env_float('POSITION_SPREAD', 0.1)
    DATA_DIR = os.environ.get('DATA_DIR', 'data')


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'DEBUG')


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    LOG_FILE = os.environ.get('TEST_LOG_FILE', 'logs/test.log')
    # Short experiments keep the CLI tests fast
    DURATION = 10.0
    MAX_ITERS = 200


# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}
