import logging
import logging.handlers
import os
import sys

LOGGERS = ("theory", "simulations")


def init_logs(app):
    loggers = {name: logging.getLogger(name) for name in LOGGERS}
    for logger in loggers.values():
        logger.setLevel(logging.INFO)
        # repeated app creation in one process must not stack handlers
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()

    log_dir = app.config["LOG_FOLDER"]
    if not os.path.exists(log_dir):
        os.makedirs(log_dir)

    logs = {name: os.path.join(log_dir, "{}.log".format(name)) for name in LOGGERS}

    try:
        for log in logs.values():
            if not os.path.exists(log):
                open(log, "a").close()

        for name, logger in loggers.items():
            handler = logging.handlers.RotatingFileHandler(
                logs[name], maxBytes=10485760, backupCount=5
            )
            logger.addHandler(handler)
    except IOError:
        pass

    # stdout carries CSV and JSON output
    stderr = logging.StreamHandler(stream=sys.stderr)

    for logger in loggers.values():
        logger.addHandler(stderr)
        logger.propagate = 0


def init_cli(app):
    from SkewLab.cli import _cli

    app.register_blueprint(_cli, cli_group=None)
