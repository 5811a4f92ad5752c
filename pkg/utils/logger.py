"""
Logging configuration for the identification tools
"""
import logging
import os
from logging.handlers import RotatingFileHandler

LOGGER_NAME = 'identification'
LIBRARY_LOGGERS = ('inertia', 'harness')


def setup_logging(settings):
    """Setup application logging"""
    log_file = settings.LOG_FILE
    log_dir = os.path.dirname(log_file)

    # Create logs directory if it doesn't exist
    if log_dir and not os.path.exists(log_dir):
        os.makedirs(log_dir)

    log_level = getattr(logging, str(settings.LOG_LEVEL).upper(), logging.INFO)

    formatter = logging.Formatter(
        '[%(asctime)s] %(levelname)s in %(module)s: %(message)s'
    )

    # File handler with rotation
    file_handler = RotatingFileHandler(
        log_file,
        maxBytes=10240000,  # 10MB
        backupCount=10
    )
    file_handler.setFormatter(formatter)
    file_handler.setLevel(log_level)
    handlers = [file_handler]

    # Console handler for development
    if settings.DEBUG or settings.LOG_TO_CONSOLE:
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        console_handler.setLevel(log_level)
        handlers.append(console_handler)

    for name in (LOGGER_NAME,) + LIBRARY_LOGGERS:
        logger = logging.getLogger(name)
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()
        for handler in handlers:
            logger.addHandler(handler)
        logger.setLevel(log_level)

    app_logger = logging.getLogger(LOGGER_NAME)
    app_logger.info('Identification tools startup')
    return app_logger


def log_error(error, context=None, command=None):
    """Log error with context"""
    error_msg = f"Error: {str(error)}"
    if context:
        error_msg += f" | Context: {context}"
    if command:
        error_msg += f" | Command: {command}"

    logging.getLogger(LOGGER_NAME).error(error_msg)


def log_activity(action, details=None):
    """Log user activity"""
    activity_msg = f"Activity: {action}"
    if details:
        activity_msg += f" | Details: {details}"

    logging.getLogger(LOGGER_NAME).info(activity_msg)
