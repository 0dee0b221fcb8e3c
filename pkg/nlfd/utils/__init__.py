"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import print_function, absolute_import, unicode_literals

import copy
import json
import logging
from hashlib import sha256

import numpy as np
import six
from yaml import YAMLError, safe_load

from nlfd.exceptions import NlfdValidationException


logger = logging.getLogger(__name__)


def graceful_chain_set(d, value, *args):
    """
    set d[args[0]][args[1]]... = value, creating intermediate mappings

    :return: d
    """
    t = d
    for arg in args[:-1]:
        child = t.get(arg)
        if child is None:
            child = t[arg] = {}
        elif not isinstance(child, dict):
            raise NlfdValidationException("cannot descend into %r: %r is not a mapping" %
                                          (".".join(args), arg))
        t = child
    t[args[-1]] = value
    return d


def parse_override(override):
    """
    "a.b.c=VALUE" -> (["a", "b", "c"], value), VALUE read with YAML scalar rules

    >>> parse_override("solver.t_end=10")
    (['solver', 't_end'], 10)
    """
    key, sep, raw = override.partition("=")
    key = key.strip()
    if not sep or not key:
        raise NlfdValidationException("override %r is not of the form KEY=VALUE" % override)
    path = key.split(".")
    if not all(path):
        raise NlfdValidationException("override key %r has an empty component" % key)
    try:
        value = safe_load(raw) if raw.strip() else None
    except YAMLError as ex:
        raise NlfdValidationException("cannot parse value of override %r" % override, cause=ex)
    return path, value


def apply_overrides(raw, overrides):
    """
    apply dotted overrides on a copy of a raw (not yet validated) mapping

    :param raw: dict
    :param overrides: list of "KEY=VALUE" strings
    :return: dict
    """
    result = copy.deepcopy(raw) if raw else {}
    for override in overrides or []:
        path, value = parse_override(override)
        logger.debug("override %s = %r", ".".join(path), value)
        graceful_chain_set(result, value, *path)
    return result


def _jsonable(obj):
    if isinstance(obj, dict):
        return {six.text_type(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def to_jsonable(obj):
    """ numpy scalars/arrays to plain python, non-finite floats to strings """
    return _jsonable(obj)


def canonical_json(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))


def config_hash(obj):
    """ sha256 of the canonical JSON form """
    return sha256(canonical_json(obj).encode('utf-8')).hexdigest()


def write_json(obj, path):
    with open(path, "w") as fp:
        json.dump(to_jsonable(obj), fp, indent=2, sort_keys=True)
        fp.write("\n")
