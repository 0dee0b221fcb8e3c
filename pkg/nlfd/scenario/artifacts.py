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

from nlfd.constants import MANIFEST_FILE, MASS_FILE, SNAPSHOTS_DIR
from nlfd.grid import write_binary
from nlfd.scenario.config import save_config
from nlfd.utils import config_hash, write_json


logger = logging.getLogger(__name__)


class ArtifactWriter(object):
    """
    owns one output directory:

        manifest.json
        mass.csv
        snapshots/0000.bin ...
        checks/<check>.json
        curves/<check>.<curve>.csv
        scenario.yaml
    """

    def __init__(self, output_dir):
        self.output_dir = output_dir
        self.written = []

    def _path(self, *parts):
        path = os.path.join(self.output_dir, *parts)
        directory = os.path.dirname(path)
        if not os.path.isdir(directory):
            os.makedirs(directory)
        return path

    def write_snapshots(self, trajectory):
        paths = []
        for index, (t, field) in enumerate(trajectory.snapshots):
            path = self._path(SNAPSHOTS_DIR, "%04d.bin" % index)
            write_binary(field, path, time=t)
            paths.append(path)
        self.written.extend(paths)
        return paths

    def write_mass(self, trajectory):
        path = self._path(MASS_FILE)
        data = np.column_stack([trajectory.times, trajectory.masses(), trajectory.leaked])
        np.savetxt(path, data, delimiter=",", header="time,mass,leaked", comments="",
                   fmt="%.17g")
        self.written.append(path)
        return path

    def write_manifest(self, trajectory, scenario=None, report=None, extra=None):
        manifest = trajectory.to_manifest()
        manifest["snapshots"] = [os.path.join(SNAPSHOTS_DIR, "%04d.bin" % i)
                                 for i in range(len(trajectory))]
        if scenario is not None:
            manifest["scenario"] = scenario
            manifest["scenario_hash"] = config_hash(scenario)
        if report is not None:
            manifest["checks"] = {r.name: r.status for r in report.records}
            manifest["passed"] = report.passed
        manifest.update(extra or {})
        path = self._path(MANIFEST_FILE)
        write_json(manifest, path)
        self.written.append(path)
        return path

    def write_scenario(self, config):
        path = self._path("scenario.yaml")
        save_config(config, path)
        self.written.append(path)
        return path

    def write_report(self, report):
        paths = report.write(self.output_dir)
        self.written.extend(paths)
        return paths

    def write_run(self, trajectory, config=None, report=None):
        """ everything for one scenario run """
        self.write_snapshots(trajectory)
        self.write_mass(trajectory)
        if report is not None:
            self.write_report(report)
        if config is not None:
            self.write_scenario(config)
        self.write_manifest(trajectory, scenario=config.to_dict() if config else None,
                            report=report)
        logger.info("wrote %d artifacts to %s", len(self.written), self.output_dir)
        return list(self.written)
