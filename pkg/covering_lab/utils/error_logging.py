import logging
import os
from logging.handlers import TimedRotatingFileHandler

from decouple import config

from covering_lab.utils.sentry import SentryService

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def log_directory() -> str:
    return config('COVERING_LOG_DIR', default='logs')


# Function to set up the logger
def setup_logger(file_name='error', level=logging.ERROR):
    logger = logging.getLogger(f'covering_lab-{file_name}')
    logger.setLevel(level)

    # Prevent duplicate handlers if the logger already exists
    if not logger.handlers:
        directory = log_directory()
        os.makedirs(directory, exist_ok=True)
        file_handler = TimedRotatingFileHandler(os.path.join(directory, f'{file_name}.log'),
                                                when='midnight', interval=1, backupCount=7, delay=True)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        file_handler.suffix = "%Y-%m-%d"
        logger.addHandler(file_handler)

    return logger


logger = setup_logger('error', logging.getLevelName(config('COVERING_LOG_LEVEL', default='INFO').upper()))

run_logger = setup_logger('runs', logging.INFO)


def log_exception(exception: Exception):
    logger.error("An error occurred: %s", exception, exc_info=exception)
    try:
        SentryService.get_instance().capture_exception(exception)
    except RuntimeError:
        pass


def log_critical(exception: Exception):
    logger.critical("Critical error occurred: %s", exception, exc_info=exception)
    try:
        SentryService.get_instance().capture_exception(exception)
    except RuntimeError:
        pass


def log_warning(message, *args):
    logger.warning(message, *args)


def log_message(message, *args):
    logger.info(message, *args)


def log_debug(message, *args):
    logger.debug(message, *args)


def log_run(command: str, seed: int, outcome: str, **details):
    extra = ' '.join(f'{key}={value}' for key, value in sorted(details.items()))
    run_logger.info(f"command={command} seed={seed} outcome={outcome} {extra}".rstrip())
