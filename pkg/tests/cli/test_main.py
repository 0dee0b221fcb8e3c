"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import absolute_import, unicode_literals

import json
import logging
import os

import pytest
from flexmock import flexmock

import nlfd.api
from nlfd.api import Laboratory, ScenarioOutcome
from nlfd.cli.main import cli, main
from nlfd.constants import (EXIT_OK, EXIT_CHECK_FAILURE, EXIT_CONFIGURATION_ERROR,
                            EXIT_RUNTIME_FAILURE)
from nlfd.exceptions import NlfdException
from nlfd.verify.report import CheckRecord, DiagnosticsReport


@pytest.fixture
def base_args(tmpdir):
    # keep the user's ini file out of the picture
    return ["--config-file", str(tmpdir.join("missing.conf"))]


def failed_outcome(output_dir):
    report = DiagnosticsReport()
    report.add(CheckRecord.from_flag("mass_conservation", "mass-conservation", False,
                                     measured={"headline": 0.5}, tolerance=1e-3))
    return ScenarioOutcome("small", report, output_dir=output_dir)


class TestParser(object):
    def test_run_arguments(self):
        _, args = cli(["--threads", "2", "run", "--config", "s.yaml", "--set", "seed=1",
                       "--set", "grid.points_per_axis=32", "--out", "out"])
        assert args.threads == 2
        assert args.scenario == "s.yaml"
        assert args.overrides == ["seed=1", "grid.points_per_axis=32"]
        assert args.out == "out"

    def test_verbose_defaults_to_unset(self):
        _, args = cli(["suite", "quick"])
        assert args.verbose is None
        assert args.quiet is None
        assert args.SUITE == "quick"

    def test_verbose_and_quiet_exclusive(self):
        with pytest.raises(SystemExit):
            cli(["--verbose", "--quiet", "suite", "quick"])


class TestRun(object):
    def test_passes(self, tmpdir, base_args, scenario_file, capsys):
        out = str(tmpdir.join("out"))
        assert main(base_args + ["run", "--config", scenario_file, "--out", out]) == EXIT_OK
        with open(os.path.join(out, "manifest.json")) as fp:
            manifest = json.load(fp)
        assert manifest["checks"] == {"mass_conservation": "passed"}
        stdout, stderr = capsys.readouterr()
        assert "mass_conservation" in stdout
        assert "artifacts written to %s" % out in stderr

    def test_override(self, tmpdir, base_args, scenario_file):
        out = str(tmpdir.join("out"))
        argv = base_args + ["run", "--config", scenario_file, "--out", out,
                            "--set", "name=renamed", "--set", "solver.snapshot_times=[0.2]"]
        assert main(argv) == EXIT_OK
        with open(os.path.join(out, "manifest.json")) as fp:
            manifest = json.load(fp)
        assert manifest["scenario"]["name"] == "renamed"
        assert manifest["times"] == [0.0, 0.2]

    def test_missing_scenario(self, tmpdir, base_args):
        argv = base_args + ["run", "--config", str(tmpdir.join("nothing.yaml"))]
        assert main(argv) == EXIT_CONFIGURATION_ERROR

    def test_invalid_override(self, base_args, scenario_file, caplog):
        caplog.set_level(logging.ERROR, logger="nlfd")
        argv = base_args + ["run", "--config", scenario_file, "--set", "grid.dim=5"]
        assert main(argv) == EXIT_CONFIGURATION_ERROR
        assert "Invalid scenario" in caplog.text
        assert ".grid.dim" in caplog.text

    def test_malformed_override(self, base_args, scenario_file):
        argv = base_args + ["run", "--config", scenario_file, "--set", "no-equals-sign"]
        assert main(argv) == EXIT_CONFIGURATION_ERROR

    def test_failed_checks(self, tmpdir, base_args, scenario_file):
        (flexmock(Laboratory)
            .should_receive('run_scenario')
            .and_return(failed_outcome(str(tmpdir)))
            .once())
        assert main(base_args + ["run", "--config", scenario_file]) == EXIT_CHECK_FAILURE

    def test_runtime_failure(self, base_args, scenario_file, caplog):
        caplog.set_level(logging.ERROR, logger="nlfd")
        (flexmock(Laboratory)
            .should_receive('run_scenario')
            .and_raise(NlfdException("solver blew up")))
        assert main(base_args + ["run", "--config", scenario_file]) == EXIT_RUNTIME_FAILURE
        assert "Runtime failure: solver blew up" in caplog.text

    def test_runtime_failure_verbose_raises(self, base_args, scenario_file):
        (flexmock(Laboratory)
            .should_receive('run_scenario')
            .and_raise(NlfdException("solver blew up")))
        with pytest.raises(NlfdException):
            main(base_args + ["--verbose", "run", "--config", scenario_file])


class TestBarenblatt(object):
    def test_no_profile_below_critical_exponent(self, base_args, caplog):
        caplog.set_level(logging.ERROR, logger="nlfd")
        flexmock(nlfd.api).should_receive('compute_profile').never()
        argv = base_args + ["barenblatt", "--m", "0.4", "--sigma", "0.5"]
        # m_c = (1 - 0.5) / 1 = 0.5
        assert main(argv) == EXIT_CONFIGURATION_ERROR
        assert "do not exist when m <= m_c" in caplog.text

    def test_writes_profile(self, tmpdir, base_args, capsys):
        out = str(tmpdir.join("profile.csv"))
        profile = flexmock(cycles=12, converged=True)
        (flexmock(Laboratory)
            .should_receive('compute_barenblatt')
            .with_args(1.0, 0.75, 1.0, dim=1, half_width=50.0, points_per_axis=1024, out=out)
            .and_return(profile)
            .once())
        argv = base_args + ["barenblatt", "--m", "0.75", "--sigma", "1", "--out", out]
        assert main(argv) == EXIT_OK
        stdout, _ = capsys.readouterr()
        assert "12 cycles, converged=True" in stdout


class TestSuite(object):
    def test_unknown_suite(self, base_args):
        assert main(base_args + ["suite", "everything"]) == EXIT_CONFIGURATION_ERROR

    def test_outcomes(self, tmpdir, base_args, caplog, capsys):
        caplog.set_level(logging.ERROR, logger="nlfd")
        passed = DiagnosticsReport()
        passed.add(CheckRecord.from_flag("energy_identity", "energy-identity", True))
        (flexmock(Laboratory)
            .should_receive('run_suite')
            .with_args("quick", output_dir=str(tmpdir))
            .and_return([ScenarioOutcome("energy", passed), failed_outcome(str(tmpdir))])
            .once())
        argv = base_args + ["suite", "quick", "--out", str(tmpdir)]
        assert main(argv) == EXIT_CHECK_FAILURE
        _, stderr = capsys.readouterr()
        assert "== energy: passed" in stderr
        assert "== small: FAILED" in stderr
        assert "failed entries: small" in caplog.text

    @pytest.mark.slow
    def test_quick_suite_passes(self, tmpdir, base_args, capsys):
        out = str(tmpdir.join("quick"))
        assert main(base_args + ["suite", "quick", "--out", out]) == EXIT_OK
        _, stderr = capsys.readouterr()
        assert "FAILED" not in stderr
        assert os.listdir(out)


def test_no_command(base_args, capsys):
    assert main(base_args) == EXIT_CONFIGURATION_ERROR
    stdout, _ = capsys.readouterr()
    assert "usage" in stdout


def test_bad_threads(base_args, caplog):
    caplog.set_level(logging.ERROR, logger="nlfd")
    assert main(base_args + ["--threads", "0", "suite", "quick"]) == EXIT_CONFIGURATION_ERROR
    assert "Configuration error" in caplog.text
