#!/usr/bin/python3

import logging
import sys

from .cli import run
from .config import DEBUG, LOG_FORMAT, LOG_LEVEL


def setup_logging(level: str) -> None:
    """Send log records to stderr so stdout only carries results"""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level)


def main():
    setup_logging('DEBUG' if DEBUG else LOG_LEVEL)
    sys.exit(run(sys.argv[1:]))

if __name__ == "__main__":
    main()
