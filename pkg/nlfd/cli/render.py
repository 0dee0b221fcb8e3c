"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import print_function, absolute_import, unicode_literals

import logging
import subprocess
import sys

from nlfd.constants import CLI_SUMMARY_COLS


logger = logging.getLogger(__name__)


def get_terminal_size():
    """
    get size of console: rows x columns

    :return: tuple, (int, int); (0, 0) when not attached to a terminal
    """
    try:
        rows, columns = subprocess.check_output(['stty', 'size'],
                                                stderr=subprocess.STDOUT).split()
    except (subprocess.CalledProcessError, OSError, ValueError):
        logger.debug("not attached to terminal")
        return 0, 0
    return int(rows), int(columns)


class TablePrinter(object):
    """
    print a list of row mappings as an aligned table; the first row is the
    header, which goes to stderr so that stdout stays greppable

        name       | status  | measured
        -----------+---------+----------
        mass       | passed  | 1.2e-05
    """

    def __init__(self, table, col_list, out=None, err=None):
        """
        :param table: list of dicts, header first
        :param col_list: list of strs, columns to display
        """
        if not table:
            raise ValueError("table needs at least a header row")
        self.header = table[0]
        self.data = table[1:]
        self.col_list = col_list
        self.out = out or sys.stdout
        self.err = err or sys.stderr
        self.col_widths = self._widths(get_terminal_size()[1])

    def longest_value(self, col):
        """ +2 for the spaces around the separator """
        try:
            return max(len("%s" % row[col]) for row in [self.header] + self.data) + 2
        except KeyError:
            logger.error("there is no column %r", col)
            raise

    def _widths(self, terminal_width):
        widths = [self.longest_value(col) for col in self.col_list]
        free = terminal_width - sum(widths) - (len(widths) - 1)
        if terminal_width > 0 and free > 0:
            share, remainder = divmod(free, len(widths))
            widths = [w + share + (1 if i < remainder else 0) for i, w in enumerate(widths)]
        logger.debug("column widths %s", widths)
        return dict(zip(self.col_list, widths))

    def format_row(self, row):
        return "|".join(" %-*s " % (self.col_widths[col] - 2, row[col])
                        for col in self.col_list).rstrip()

    def separator(self):
        return "+".join("-" * self.col_widths[col] for col in self.col_list)

    def render(self):
        print(self.format_row(self.header), file=self.err)
        print(self.separator(), file=self.err)
        for row in self.data:
            print(self.format_row(row), file=self.out)


def render_report(report, col_list=CLI_SUMMARY_COLS, out=None, err=None):
    """
    :param report: nlfd.verify.report.DiagnosticsReport
    """
    header = dict((col, col.upper()) for col in col_list)
    if not len(report):
        return
    TablePrinter([header] + report.summary_rows(), col_list, out=out, err=err).render()
