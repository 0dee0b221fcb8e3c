"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import print_function, absolute_import, unicode_literals

import logging

from nlfd.version import __version__  # noqa

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def set_logging(name="nlfd", level=logging.DEBUG):
    """
    replace the handlers of logger `name` with one stderr handler;
    `level` filters at the logger, the handler passes everything
    """
    logger = logging.getLogger(name)
    logger.handlers = []
    logger.setLevel(level)

    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)


# library default; the command line entry point resets it from the settings
set_logging(level=logging.WARNING)
