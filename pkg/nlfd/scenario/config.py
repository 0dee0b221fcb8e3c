"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.


Scenario files: YAML checked against schemas/scenario.json, parsed into
ParamsBase sections, then checked semantically by building every component.
All problems are reported at once.
"""
from __future__ import print_function, absolute_import, unicode_literals

import logging

import yaml

from nlfd.barenblatt import critical_exponent
from nlfd.constants import (SCENARIO_SCHEMA, DEFAULT_SEED,
                            BOUNDARY_EXTERIOR_ZERO, KERNEL_FRACTIONAL_POWER,
                            NONLINEARITY_PURE_POWER, SNAPSHOT_INTERPOLATE, NEWTON_TOLERANCE,
                            NEWTON_MAX_ITERATIONS, EXTINCTION_FLOOR)
from nlfd.exceptions import NlfdValidationException, ScenarioValidationException
from nlfd.grid import make_grid
from nlfd.kernel import check_admissible, make_kernel, validate_hj
from nlfd.nonlinearity import make_nonlinearity, validate_hphi
from nlfd.scenario.params_meta import Param, ParamsBase
from nlfd.solver import SolverConfig
from nlfd.utils import apply_overrides
from nlfd.utils.yaml import load_schema, parse_yaml, read_yaml_file, validation_errors


logger = logging.getLogger(__name__)


# checks whose statement needs a self-similar exponent (m > m_c)
SELF_SIMILAR_CHECKS = ("smoothing", "tail_control", "asymptotics")
# checks built on the mass-conserving regime (m >= m_c)
MASS_CONSERVING_CHECKS = ("decay_rate",)


def _build_errors(path, builder):
    """
    :return: (object or None, list of error strings)
    """
    try:
        return builder(), []
    except NlfdValidationException as ex:
        return None, ["%s: %s" % (path, ex)]
    except (TypeError, ValueError) as ex:
        # malformed values are already reported by the schema
        logger.debug("%s: cannot build (%s)", path, ex)
        return None, []


class GridParams(ParamsBase):
    dim = Param("dim", default=1)
    half_width = Param("half_width", required=True)
    points_per_axis = Param("points_per_axis", required=True)
    boundary_mode = Param("boundary_mode", default=BOUNDARY_EXTERIOR_ZERO)

    def build(self):
        return make_grid(self.dim, self.half_width, self.points_per_axis, self.boundary_mode)

    def validate(self, path=""):
        return _build_errors(path, self.build)[1]


class KernelParams(ParamsBase):
    family = Param("family", default=KERNEL_FRACTIONAL_POWER)
    sigma = Param("sigma", required=True)
    params = Param("params")

    def build(self, dim):
        return make_kernel(self.family, dim, self.sigma, **(self.params or {}))


class NonlinearityParams(ParamsBase):
    family = Param("family", default=NONLINEARITY_PURE_POWER)
    m = Param("m", required=True)
    params = Param("params")

    def build(self):
        return make_nonlinearity(self.family, self.m, **(self.params or {}))

    def validate(self, path=""):
        nonlinearity, errors = _build_errors(path, self.build)
        if nonlinearity is not None:
            report = validate_hphi(nonlinearity)
            if not report.ok:
                errors.append("%s: phi^(1+A) must be concave and phi within its power "
                              "envelope, got %r" % (path, report.to_dict()))
        return errors


class InitialDatumParams(ParamsBase):
    kind = Param("kind", required=True)
    center = Param("center", default=0.0)
    radius = Param("radius", default=1.0)
    height = Param("height", default=1.0)
    scale = Param("scale", default=1.0)
    mass = Param("mass", default=1.0)
    t0 = Param("t0", default=1.0)
    separation = Param("separation", default=4.0)
    path = Param("path")

    def validate(self, path=""):
        if self.kind == "from_file" and not self.path:
            return ["%s.path: required for from_file data" % path]
        return []


class SolverParams(ParamsBase):
    t_end = Param("t_end", required=True)
    dt_initial = Param("dt_initial", default=1e-3)
    dt_min = Param("dt_min", default=1e-10)
    dt_max = Param("dt_max")
    newton_tol = Param("newton_tol", default=NEWTON_TOLERANCE)
    newton_max_iter = Param("newton_max_iter", default=NEWTON_MAX_ITERATIONS)
    snapshot_times = Param("snapshot_times")
    extinction_floor = Param("extinction_floor", default=EXTINCTION_FLOOR)
    snapshot_mode = Param("snapshot_mode", default=SNAPSHOT_INTERPOLATE)

    def build(self):
        return SolverConfig(t_end=self.t_end, dt_initial=self.dt_initial, dt_min=self.dt_min,
                            dt_max=self.dt_max, newton_tol=self.newton_tol,
                            newton_max_iter=self.newton_max_iter,
                            snapshot_times=self.snapshot_times,
                            extinction_floor=self.extinction_floor,
                            snapshot_mode=self.snapshot_mode)

    def validate(self, path=""):
        return _build_errors(path, self.build)[1]


class CheckParams(ParamsBase):
    id = Param("id", required=True)
    params = Param("params")

    @property
    def options(self):
        return dict(self.params or {})


class ScenarioConfig(ParamsBase):
    name = Param("name", default="scenario")
    description = Param("description")
    seed = Param("seed", default=DEFAULT_SEED)
    threads = Param("threads")
    output_dir = Param("output_dir")
    grid = Param("grid", required=True, section=GridParams)
    kernel = Param("kernel", required=True, section=KernelParams)
    nonlinearity = Param("nonlinearity", required=True, section=NonlinearityParams)
    initial_datum = Param("initial_datum", required=True, section=InitialDatumParams)
    solver = Param("solver", required=True, section=SolverParams)
    checks = Param("checks", section=CheckParams, many=True)

    def validate(self, path=""):
        errors = []
        if self.grid is None or self.kernel is None or self.nonlinearity is None:
            return errors
        dim = self.grid.dim
        kernel, kernel_errors = _build_errors("kernel", lambda: self.kernel.build(dim))
        errors.extend(kernel_errors)
        if kernel is not None:
            _, admissible = _build_errors(
                "kernel", lambda: check_admissible(kernel, validate_hj(kernel, seed=self.seed)))
            errors.extend(admissible)
        if self.solver is not None and self.solver.snapshot_times:
            if any(t > self.solver.t_end for t in self.solver.snapshot_times
                   if isinstance(t, (int, float))):
                errors.append("solver.snapshot_times: must not exceed t_end")

        m = self.nonlinearity.m
        sigma = self.kernel.sigma
        if isinstance(m, (int, float)) and isinstance(sigma, (int, float)) and dim in (1, 2):
            m_c = critical_exponent(dim, sigma)
            for index, check in enumerate(self.checks or []):
                if check is None:
                    continue
                if check.id in SELF_SIMILAR_CHECKS and not m > m_c:
                    errors.append("checks[%d]: %s needs m > m_c = %g, got m = %g" %
                                  (index, check.id, m_c, m))
                if check.id in MASS_CONSERVING_CHECKS and m < m_c:
                    errors.append("checks[%d]: %s needs m >= m_c = %g, got m = %g" %
                                  (index, check.id, m_c, m))
        return errors

    def build_grid(self):
        return self.grid.build()

    def build_kernel(self):
        return self.kernel.build(self.grid.dim)

    def build_nonlinearity(self):
        return self.nonlinearity.build()

    def build_solver_config(self):
        return self.solver.build()

    @property
    def check_ids(self):
        return [check.id for check in self.checks or []]


def config_from_dict(raw):
    """
    schema errors and semantic errors, all of them, in one exception

    :return: ScenarioConfig
    """
    errors = validation_errors(raw, load_schema(SCENARIO_SCHEMA))
    config, semantic = ScenarioConfig.from_dict(raw)
    for message in semantic:
        if message not in errors:
            errors.append(message)
    if errors:
        raise ScenarioValidationException(errors)
    return config


def load_config(path, overrides=None):
    """
    :param path: YAML scenario file
    :param overrides: list of "dotted.key=VALUE" strings applied before validation
    :return: ScenarioConfig
    """
    logger.debug("loading scenario %s", path)
    raw = read_yaml_file(path)
    if raw is not None and not isinstance(raw, dict):
        raise ScenarioValidationException(["at top level: a scenario must be a mapping"])
    return config_from_dict(apply_overrides(raw or {}, overrides))


def loads_config(text, overrides=None):
    raw = parse_yaml(text)
    if raw is not None and not isinstance(raw, dict):
        raise ScenarioValidationException(["at top level: a scenario must be a mapping"])
    return config_from_dict(apply_overrides(raw or {}, overrides))


def save_config(config, path):
    with open(path, "w") as fp:
        yaml.safe_dump(config.to_dict(), fp, default_flow_style=False)
