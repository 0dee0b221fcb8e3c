"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""


from __future__ import absolute_import, unicode_literals

from pkg_resources import resource_stream
from nlfd.exceptions import NlfdValidationException, ScenarioValidationException

import codecs
import json
import jsonschema
import logging
import yaml


logger = logging.getLogger(__name__)


def load_schema(schema, package=None):
    """
    :param schema: string, file path to the JSON schema inside the package
    :param package: string, package name containing the schema
    """
    package = package or "nlfd"
    try:
        stream = codecs.getreader("utf-8")(resource_stream(package, schema))
    except ImportError:
        logger.error("schema package %s cannot be imported", package)
        raise
    except (IOError, TypeError):
        logger.error("cannot open schema %s from %s", schema, package)
        raise

    try:
        return json.load(stream)
    except ValueError:
        logger.error("schema %s is not valid JSON", schema)
        raise


def parse_yaml(yaml_data):
    try:
        return yaml.safe_load(yaml_data)
    except yaml.YAMLError as ex:
        raise ScenarioValidationException(["malformed YAML: %s" % ex], cause=ex)


def validation_errors(data, schema):
    """
    :return: list of str, every schema violation of data (empty when valid)
    """
    try:
        jsonschema.Draft7Validator.check_schema(schema)
    except jsonschema.SchemaError:
        logger.error('invalid schema, cannot validate')
        raise
    validator = jsonschema.Draft7Validator(schema=schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    messages = []
    for error in errors:
        message = get_error_message(error)
        logger.debug("validation error: %s", message)
        messages.append(message)
    return messages


def read_yaml_file(file_path):
    """
    :param file_path: string, path to a YAML document
    :return: parsed document, not validated
    """
    try:
        with open(file_path) as f:
            yaml_data = f.read()
    except IOError as ex:
        raise NlfdValidationException("cannot read %s: %s" % (file_path, ex), cause=ex)
    return parse_yaml(yaml_data)


def get_error_message(error):
    """
    one line per violation: dotted path, failing keyword, and the
    deduplicated sub-errors of anyOf/oneOf when there are any
    """
    location = "".join(
        "[%d]" % step if isinstance(step, int) else ".%s" % step
        for step in error.absolute_path
    ) or "at top level"
    details = sorted(set(sub.message for sub in error.context or []))
    summary = ", ".join(details) or error.message
    return "%s: '%s' check failed (%s)" % (location, error.validator, summary)
