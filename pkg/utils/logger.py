import logging
logging.basicConfig(level=logging.INFO)

from datetime import datetime

_logger = logging.getLogger("hmatrix")


def get_curr_time_stamp():
    """
    """
    curr = datetime.now()
    return curr.strftime("%H:%M:%S")

def info(msg):

    #
    time_stamp = get_curr_time_stamp()
    _logger.info(f"{time_stamp} - {msg}")

def warning(msg):

    #
    time_stamp = get_curr_time_stamp()
    _logger.warning(f"{time_stamp} - {msg}")

def error(msg):

    #
    time_stamp = get_curr_time_stamp()
    _logger.error(f"{time_stamp} - {msg}")

def debug(msg):

    # Formatting is skipped unless the recursion-level chatter is wanted
    if _logger.isEnabledFor(logging.DEBUG):
        _logger.debug(f"{get_curr_time_stamp()} - {msg}")

def set_level(level: str):
    """
    Adjust verbosity, e.g. set_level("DEBUG") or set_level("WARNING")
    """
    _logger.setLevel(getattr(logging, level.upper()))
