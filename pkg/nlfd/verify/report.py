"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import print_function, absolute_import, unicode_literals

import logging
import os

import numpy as np

from nlfd.constants import (CHECK_PASSED, CHECK_FAILED, CHECK_NOT_APPLICABLE, CHECKS_DIR,
                            CURVES_DIR)
from nlfd.exceptions import NlfdValidationException
from nlfd.utils import config_hash, to_jsonable, write_json


logger = logging.getLogger(__name__)


class CheckRecord(object):
    """
    outcome of one check

    measured and artifacts are plain mappings; curves maps a curve name to
    (column names, rows) and is written as CSV next to the JSON record
    """

    def __init__(self, name, tag, status, measured=None, tolerance=None, artifacts=None,
                 curves=None, message=None):
        if status not in (CHECK_PASSED, CHECK_FAILED, CHECK_NOT_APPLICABLE):
            raise NlfdValidationException("unknown check status %r" % (status,))
        self.name = name
        self.tag = tag
        self.status = status
        self.measured = dict(measured or {})
        self.tolerance = tolerance
        self.artifacts = dict(artifacts or {})
        self.curves = dict(curves or {})
        self.message = message

    @classmethod
    def from_flag(cls, name, tag, passed, **kwargs):
        return cls(name, tag, CHECK_PASSED if passed else CHECK_FAILED, **kwargs)

    @classmethod
    def not_applicable(cls, name, tag, message, **kwargs):
        return cls(name, tag, CHECK_NOT_APPLICABLE, message=message, **kwargs)

    @property
    def passed(self):
        return self.status == CHECK_PASSED

    @property
    def failed(self):
        return self.status == CHECK_FAILED

    def to_dict(self):
        return to_jsonable({
            "name": self.name,
            "tag": self.tag,
            "status": self.status,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "artifacts": self.artifacts,
            "curves": sorted(self.curves),
            "message": self.message,
        })

    def summary_row(self):
        """ strings for cli.render.TablePrinter """
        headline = self.measured.get("headline")
        if headline is None and self.measured:
            key = sorted(self.measured)[0]
            headline = "%s=%s" % (key, _short(self.measured[key]))
        return {
            "name": self.name,
            "tag": self.tag,
            "status": self.status,
            "measured": _short(headline) if headline is not None else "-",
            "tolerance": _short(self.tolerance) if self.tolerance is not None else "-",
        }

    def __repr__(self):
        return "CheckRecord(%r, %r, %s)" % (self.name, self.tag, self.status)


def _short(value):
    if isinstance(value, float):
        return "%.4g" % value
    return "%s" % (value,)


class DiagnosticsReport(object):
    """
    append-only list of check records plus run metadata
    """

    def __init__(self, metadata=None):
        self.metadata = dict(metadata or {})
        self._records = []

    @classmethod
    def for_run(cls, grid, kernel, nonlinearity, config=None, **extra):
        metadata = {
            "grid": grid.to_dict(),
            "kernel": kernel.to_dict(),
            "nonlinearity": nonlinearity.to_dict(),
        }
        if config is not None:
            metadata["config"] = config
        metadata["hashes"] = {key: config_hash(value) for key, value in metadata.items()}
        metadata.update(extra)
        return cls(metadata)

    def add(self, record):
        if any(r.name == record.name for r in self._records):
            raise NlfdValidationException("report already holds a record named %r" %
                                          record.name)
        logger.info("check %s [%s]: %s", record.name, record.tag, record.status)
        self._records.append(record)
        return record

    def extend(self, records):
        for record in records:
            self.add(record)

    @property
    def records(self):
        return tuple(self._records)

    def get(self, name):
        for record in self._records:
            if record.name == name:
                return record
        raise KeyError(name)

    @property
    def failed_records(self):
        return [r for r in self._records if r.failed]

    @property
    def passed(self):
        return not self.failed_records

    def summary_rows(self):
        return [r.summary_row() for r in self._records]

    def to_dict(self):
        return to_jsonable({
            "metadata": self.metadata,
            "passed": self.passed,
            "records": [r.to_dict() for r in self._records],
        })

    def write(self, directory):
        """
        directory/checks/<name>.json for every record and
        directory/curves/<name>.<curve>.csv for every curve

        :return: list of written paths
        """
        checks_dir = os.path.join(directory, CHECKS_DIR)
        curves_dir = os.path.join(directory, CURVES_DIR)
        for path in (checks_dir, curves_dir):
            if not os.path.isdir(path):
                os.makedirs(path)
        written = []
        for record in self._records:
            path = os.path.join(checks_dir, "%s.json" % record.name)
            payload = record.to_dict()
            payload["metadata"] = self.metadata
            write_json(payload, path)
            written.append(path)
            for curve, (columns, rows) in sorted(record.curves.items()):
                path = os.path.join(curves_dir, "%s.%s.csv" % (record.name, curve))
                np.savetxt(path, np.atleast_2d(np.asarray(rows, dtype=float)), delimiter=",",
                           header=",".join(columns), comments="", fmt="%.17g")
                written.append(path)
        logger.debug("report written: %d files under %s", len(written), directory)
        return written

    def __len__(self):
        return len(self._records)

    def __repr__(self):
        return "DiagnosticsReport(%d records, passed=%s)" % (len(self._records), self.passed)
