import logging
import logging.handlers
import time


def log(logger, format, **kwargs):
    logger = logging.getLogger(logger)
    props = {
        "date": time.strftime("%m/%d/%Y %X"),
    }
    props.update(kwargs)
    msg = format.format(**props)
    logger.info(msg)
