"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""

from __future__ import absolute_import

from flexmock import flexmock
from nlfd.constants import SCENARIO_SCHEMA
from nlfd.exceptions import NlfdValidationException, ScenarioValidationException
from nlfd.utils.yaml import load_schema, parse_yaml, read_yaml_file, validation_errors
from tests.constants import SMALL_SCENARIO

import json
import logging
import os
import pkg_resources
import pytest
import yaml


def test_read_yaml_file_ioerrors(tmpdir):
    config_path = os.path.join(str(tmpdir), 'nosuchfile.yaml')
    with pytest.raises(NlfdValidationException) as exc_info:
        read_yaml_file(config_path)
    assert "cannot read" in str(exc_info.value)


def test_read_yaml_file(tmpdir):
    config_path = os.path.join(str(tmpdir), 'scenario.yaml')
    with open(config_path, 'w') as fp:
        fp.write(SMALL_SCENARIO)
    data = read_yaml_file(config_path)

    assert data == yaml.safe_load(SMALL_SCENARIO)
    assert validation_errors(data, load_schema(SCENARIO_SCHEMA)) == []


def test_load_schema():
    schema = load_schema(SCENARIO_SCHEMA)
    assert schema["type"] == "object"
    assert "grid" in schema["required"]


def test_load_schema_bad_package(caplog):
    with pytest.raises(ImportError):
        load_schema(SCENARIO_SCHEMA, package='bad_package')
    assert 'schema package bad_package cannot be imported' in caplog.text


def test_load_schema_bad_extract(caplog):
    class FakeProvider(object):
        def get_resource_stream(self, pkg, rsc):
            raise IOError

    # pkg_resources.resource_stream() cannot be mocked directly
    # Instead mock the module-level function it calls.
    (flexmock(pkg_resources)
        .should_receive('get_provider')
        .and_return(FakeProvider()))

    with pytest.raises(IOError):
        load_schema(SCENARIO_SCHEMA)
    assert "cannot open schema" in caplog.text


def test_load_schema_bad_decode(caplog):
    (flexmock(json)
        .should_receive('load')
        .and_raise(ValueError))

    with pytest.raises(ValueError):
        load_schema(SCENARIO_SCHEMA)
    assert "is not valid JSON" in caplog.text


def test_parse_yaml_malformed():
    with pytest.raises(ScenarioValidationException) as exc_info:
        parse_yaml("grid: [1, 2")
    assert exc_info.value.errors[0].startswith("malformed YAML")


@pytest.mark.parametrize(('config', 'expected'), [
    ("""\
        name: lonely
        grid: {half_width: 10.0, points_per_axis: 64}
        kernel: {family: fractional_power, sigma: 1.0}
        nonlinearity: {family: pure_power, m: 0.75}
        initial_datum: {kind: bump}
        solver: {t_end: 1.0}
        colour: red""",
     ["at top level: 'additionalProperties' check failed "
      "(Additional properties are not allowed ('colour' was unexpected))"]),
    ("""\
        name: lonely
        grid: {half_width: 10.0, points_per_axis: 64}
        kernel: {family: fractional_power, sigma: 1.0}
        nonlinearity: {family: pure_power, m: 0.75}
        initial_datum: {kind: bump}""",
     ["at top level: 'required' check failed "
      "('solver' is a required property)"]),
])
def test_validation_error_messages(config, expected, caplog):
    caplog.set_level(logging.DEBUG, logger="nlfd")
    errors = validation_errors(parse_yaml(config), load_schema(SCENARIO_SCHEMA))

    assert errors == expected
    assert "validation error" in caplog.text


def test_validation_errors_collects_all():
    errors = validation_errors({"grid": {"dim": 3, "half_width": -1.0, "points_per_axis": 64}},
                               load_schema(SCENARIO_SCHEMA))
    assert any(error.startswith(".grid.dim:") for error in errors)
    assert any(error.startswith(".grid.half_width:") for error in errors)
    assert len([error for error in errors if error.startswith("at top level")]) == 4
