"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import print_function, absolute_import, unicode_literals

import logging
import os

from six.moves import configparser

from nlfd.constants import (DEFAULT_SETTINGS_FILE, DEFAULT_SETTINGS_SECTION,
                            GENERAL_SETTINGS_SECTION, DEFAULT_OUTPUT_DIR, DEFAULT_THREADS,
                            DEFAULT_SEED)
from nlfd.exceptions import NlfdValidationException


logger = logging.getLogger(__name__)

TRUE_STRINGS = ('1', 'true')


def _as_bool(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value != 0
    try:
        return value.strip().lower() in TRUE_STRINGS
    except AttributeError:
        return False


class Configuration(object):
    """
    user settings for one lab instance

    Lookup order for every setting: keyword arguments, then parsed command
    line, then the ini file section, then the built-in default.
    """

    def __init__(self, conf_file=DEFAULT_SETTINGS_FILE, conf_section=DEFAULT_SETTINGS_SECTION,
                 cli_args=None, **kwargs):
        """
        :param conf_file: str, ini file path; None or a missing file means no file
        :param conf_section: str, section holding this instance's settings
        :param cli_args: argparse.Namespace or None
        :param kwargs: overrides keyed by command line argument name
        """
        self.ini = configparser.ConfigParser()
        if conf_file and os.access(conf_file, os.R_OK) and os.path.isfile(conf_file):
            self.ini.read(conf_file)
            if not self.ini.has_section(conf_section):
                logger.warning("no section [%s] in %s, using defaults",
                               conf_section, conf_file)
        self.conf_section = conf_section
        self.args = cli_args
        self.kwargs = kwargs

    def _lookup(self, key, section, default=None):
        sources = (
            lambda: self.kwargs.get(key),
            lambda: getattr(self.args, key, None),
            lambda: self.ini.get(section, key) if self.ini.has_option(section, key) else None,
        )
        for source in sources:
            found = source()
            if found is not None:
                return found
        return default

    def _lookup_int(self, key, default, minimum=None):
        raw = self._lookup(key, self.conf_section, default=default)
        try:
            number = int(raw)
        except (TypeError, ValueError):
            raise NlfdValidationException("setting %s must be an integer, got %r" % (key, raw))
        if minimum is not None and number < minimum:
            raise NlfdValidationException("setting %s must be at least %d, got %d" %
                                          (key, minimum, number))
        return number

    def get_output_dir(self):
        """
        directory scenario artifacts are written to; a scenario's own
        output_dir wins over this

        :return: str
        """
        return self._lookup("output_dir", self.conf_section, default=DEFAULT_OUTPUT_DIR)

    def get_threads(self):
        """
        worker threads for assembly, application and independent runs

        :return: int
        """
        return self._lookup_int("threads", DEFAULT_THREADS, minimum=1)

    def get_seed(self):
        return self._lookup_int("seed", DEFAULT_SEED, minimum=0)

    def get_verbose(self):
        return _as_bool(self._lookup("verbose", GENERAL_SETTINGS_SECTION, default=False))

    def get_quiet(self):
        return _as_bool(self._lookup("quiet", GENERAL_SETTINGS_SECTION, default=False))

    def get_log_level(self):
        """
        --verbose -> DEBUG, --quiet -> WARNING, INFO otherwise
        """
        if self.get_verbose():
            return logging.DEBUG
        if self.get_quiet():
            return logging.WARNING
        return logging.INFO

    def to_dict(self):
        return {
            "output_dir": self.get_output_dir(),
            "threads": self.get_threads(),
            "seed": self.get_seed(),
        }
