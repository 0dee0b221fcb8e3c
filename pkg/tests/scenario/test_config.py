"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import absolute_import, unicode_literals

import pytest
import yaml

from nlfd.exceptions import NlfdValidationException, ScenarioValidationException
from nlfd.grid import Grid
from nlfd.kernel import FractionalPowerKernel
from nlfd.nonlinearity import PurePower
from nlfd.scenario.config import (ScenarioConfig, config_from_dict, load_config, loads_config,
                                  save_config)
from nlfd.solver import SolverConfig
from tests.constants import SMALL_SCENARIO, TEST_SCENARIO_NAME, TEST_SEED


def small_raw():
    return yaml.safe_load(SMALL_SCENARIO)


def errors_for(raw):
    with pytest.raises(ScenarioValidationException) as exc_info:
        config_from_dict(raw)
    return exc_info.value.errors


class TestLoad(object):
    def test_loads(self):
        config = loads_config(SMALL_SCENARIO)
        assert isinstance(config, ScenarioConfig)
        assert config.name == TEST_SCENARIO_NAME
        assert config.seed == TEST_SEED
        assert config.check_ids == ["mass_conservation"]
        assert config.checks[0].options == {}

    def test_builders(self):
        config = loads_config(SMALL_SCENARIO)
        grid = config.build_grid()
        assert isinstance(grid, Grid)
        assert grid.points_per_axis == 64
        kernel = config.build_kernel()
        assert isinstance(kernel, FractionalPowerKernel)
        assert kernel.sigma == 1.0
        assert isinstance(config.build_nonlinearity(), PurePower)
        solver = config.build_solver_config()
        assert isinstance(solver, SolverConfig)
        assert solver.t_end == 0.2

    def test_defaults(self):
        config = loads_config(SMALL_SCENARIO)
        assert config.output_dir is None
        assert config.threads is None
        assert config.grid.boundary_mode == "exterior_zero"
        assert config.initial_datum.scale == 1.0

    def test_load_file_with_overrides(self, scenario_file):
        config = load_config(scenario_file, overrides=["kernel.sigma=0.5", "name=other",
                                                       "solver.t_end=1"])
        assert config.kernel.sigma == 0.5
        assert config.name == "other"
        assert config.solver.t_end == 1

    def test_override_is_validated(self, scenario_file):
        with pytest.raises(ScenarioValidationException) as exc_info:
            load_config(scenario_file, overrides=["nonlinearity.m=1.5"])
        assert any("nonlinearity.m" in error for error in exc_info.value.errors)

    def test_missing_file(self, tmpdir):
        with pytest.raises(NlfdValidationException) as exc_info:
            load_config(str(tmpdir.join("missing.yaml")))
        assert not isinstance(exc_info.value, ScenarioValidationException)

    @pytest.mark.parametrize('text', [
        "- a\n- b\n",
        "just text\n",
    ])
    def test_not_a_mapping(self, text):
        with pytest.raises(ScenarioValidationException) as exc_info:
            loads_config(text)
        assert exc_info.value.errors == ["at top level: a scenario must be a mapping"]

    def test_malformed_yaml(self):
        with pytest.raises(ScenarioValidationException) as exc_info:
            loads_config("grid: [1, 2\n")
        assert exc_info.value.errors[0].startswith("malformed YAML")

    def test_save_and_load(self, tmpdir):
        config = loads_config(SMALL_SCENARIO)
        path = str(tmpdir.join("saved.yaml"))
        save_config(config, path)
        assert load_config(path) == config


class TestValidation(object):
    def test_every_error_reported(self):
        raw = small_raw()
        raw["nonlinearity"]["m"] = 1.5
        raw["kernel"]["sigma"] = 2.5
        del raw["solver"]
        errors = errors_for(raw)
        assert any(".nonlinearity.m" in error for error in errors)
        assert any(".kernel.sigma" in error for error in errors)
        assert any("solver" in error and "required" in error for error in errors)
        assert len(errors) == len(set(errors))

    def test_unknown_key(self):
        raw = small_raw()
        raw["grid"]["spacing"] = 0.1
        errors = errors_for(raw)
        assert "grid.spacing: unknown key" in errors

    def test_snapshot_after_end(self):
        raw = small_raw()
        raw["solver"]["snapshot_times"] = [0.1, 0.5]
        assert "solver.snapshot_times: must not exceed t_end" in errors_for(raw)

    @pytest.mark.parametrize(('check', 'relation'), [
        ("smoothing", ">"),
        ("tail_control", ">"),
        ("asymptotics", ">"),
        ("decay_rate", ">="),
    ])
    def test_check_needs_regime(self, check, relation):
        raw = small_raw()
        raw["kernel"]["sigma"] = 0.5
        raw["nonlinearity"]["m"] = 0.4
        raw["checks"] = [{"id": check}]
        expected = "checks[0]: %s needs m %s m_c = 0.5, got m = 0.4" % (check, relation)
        assert expected in errors_for(raw)

    def test_critical_exponent_allows_decay_rate(self):
        raw = small_raw()
        raw["kernel"]["sigma"] = 0.5
        raw["nonlinearity"]["m"] = 0.5
        raw["checks"] = [{"id": "decay_rate"}]
        assert config_from_dict(raw).check_ids == ["decay_rate"]

    def test_from_file_needs_path(self):
        raw = small_raw()
        raw["initial_datum"] = {"kind": "from_file"}
        assert "initial_datum.path: required for from_file data" in errors_for(raw)

    def test_odd_points_per_axis(self):
        raw = small_raw()
        raw["grid"]["points_per_axis"] = 63
        assert any(".grid.points_per_axis" in error for error in errors_for(raw))

    def test_unknown_check(self):
        raw = small_raw()
        raw["checks"] = [{"id": "everything"}]
        assert any(".checks[0].id" in error for error in errors_for(raw))

    def test_check_params(self):
        raw = small_raw()
        raw["checks"] = [{"id": "positivity_harnack", "params": {"radius": 5.0, "p": 1.0}}]
        config = config_from_dict(raw)
        assert config.checks[0].options == {"radius": 5.0, "p": 1.0}
        config.checks[0].options["radius"] = 1.0
        assert config.checks[0].params["radius"] == 5.0
