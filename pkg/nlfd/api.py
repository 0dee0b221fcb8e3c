"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import print_function, unicode_literals, absolute_import

import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from functools import wraps

import numpy as np

from nlfd.barenblatt import (SelfSimilarParams, compute_profile, effective_diffusivity,
                             run_rescaled_family, similarity_exponent)
from nlfd.conf import Configuration
from nlfd.constants import ASYMPTOTICS_LADDER
from nlfd.exceptions import NlfdException, NlfdValidationException
from nlfd.grid import integrate, make_grid
from nlfd.kernel import FractionalPowerKernel
from nlfd.nonlinearity import PurePower
from nlfd.operator import DiscreteOperator, assemble_quadrature
from nlfd.scenario.artifacts import ArtifactWriter
from nlfd.scenario.config import config_from_dict, load_config
from nlfd.scenario.initial_data import materialize_initial_datum
from nlfd.scenario.suites import SuiteEntry, get_suite
from nlfd.solver import run
from nlfd.verify import checks, operator_checks
from nlfd.verify.report import DiagnosticsReport


def labapi(func):
    """
    public Laboratory methods raise only NlfdException; anything else is
    wrapped with its cause and traceback attached
    """
    @wraps(func)
    def wrap_errors(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except NlfdException:
            raise
        except Exception as ex:
            # mock expectation errors must reach the test runner untouched
            if getattr(ex, "__module__", None) == "flexmock":
                raise
            raise NlfdException(cause=ex, traceback=sys.exc_info()[2])

    return wrap_errors


logger = logging.getLogger(__name__)


class RunContext(object):
    """ everything a scenario check may look at """

    def __init__(self, config, grid, kernel, nonlinearity, op, u0, trajectory, threads, seed):
        self.config = config
        self.grid = grid
        self.kernel = kernel
        self.nonlinearity = nonlinearity
        self.op = op
        self.u0 = u0
        self.trajectory = trajectory
        self.threads = threads
        self.seed = seed

    @property
    def m(self):
        return self.nonlinearity.m

    @property
    def sigma(self):
        return self.kernel.sigma

    @property
    def dim(self):
        return self.grid.dim

    def first_positive_time(self):
        times = [t for t in self.trajectory.times if t > 0]
        if not times:
            raise NlfdValidationException("trajectory has no snapshot at t > 0")
        return times[0]

    def self_similar_params(self):
        return SelfSimilarParams(self.dim, self.m, self.sigma, integrate(self.u0),
                                 kappa=effective_diffusivity(self.kernel, self.nonlinearity))


class ScenarioOutcome(object):
    def __init__(self, name, report, trajectory=None, output_dir=None):
        self.name = name
        self.report = report
        self.trajectory = trajectory
        self.output_dir = output_dir

    @property
    def passed(self):
        return self.report.passed

    def __repr__(self):
        return "ScenarioOutcome(%r, passed=%s)" % (self.name, self.passed)


def _map(fn, items, threads):
    items = list(items)
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(fn, items))
    return [fn(item) for item in items]


def _q(value):
    return np.inf if value in ("inf", "infinity", float("inf")) else float(value)


class Laboratory(object):
    """
    library facade behind every command line operation
    """

    def __init__(self, configuration=None, **kwargs):
        """
        :param configuration: nlfd.conf.Configuration, built from kwargs when omitted
        :param kwargs: threads, seed, output_dir (highest priority)
        """
        self.configuration = configuration or Configuration(conf_file=None, **kwargs)
        self.threads = self.configuration.get_threads()
        self.seed = self.configuration.get_seed()
        self.output_dir = self.configuration.get_output_dir()

    # scenario checks; each takes (context, **options) and returns a CheckRecord

    def _check_mass_conservation(self, ctx, **options):
        return checks.check_mass_conservation(ctx.trajectory, **options)

    def _check_smoothing(self, ctx, **options):
        return checks.check_smoothing(ctx.trajectory, ctx.m, ctx.sigma, ctx.dim, **options)

    def _check_positivity_harnack(self, ctx, t=None, p=1.0, radius=None, center=0.0, A=None,
                                  on_solution=False):
        t = t if t is not None else ctx.first_positive_time()
        radius = radius if radius is not None else ctx.grid.half_width
        return checks.check_positivity_harnack(
            ctx.trajectory.field_at(t), ctx.nonlinearity, p, radius, center, t, A=A,
            sigma=ctx.sigma, floor=ctx.trajectory.extinction_floor, on_solution=on_solution)

    def _check_monotonicity(self, ctx, **options):
        return checks.check_monotonicity(ctx.trajectory, ctx.nonlinearity, **options)

    def _check_tail_control(self, ctx, radii=None, **options):
        half_width = ctx.grid.half_width
        radii = radii or [half_width / 16.0, half_width / 8.0, half_width / 4.0]
        alpha = similarity_exponent(ctx.dim, ctx.m, ctx.sigma)
        return checks.check_tail_control(ctx.trajectory, radii, alpha, ctx.m, **options)

    def _check_extinction(self, ctx, **options):
        return checks.check_extinction(ctx.trajectory, ctx.m, ctx.sigma, ctx.dim, **options)

    def _check_asymptotics(self, ctx, ladder=ASYMPTOTICS_LADDER, radius=None, **options):
        params = ctx.self_similar_params()
        profile = compute_profile(params, ctx.grid, threads=ctx.threads)
        family = run_rescaled_family(ctx.grid, ctx.kernel, ctx.nonlinearity, ctx.u0, params,
                                     ladder=ladder, threads=ctx.threads)
        return checks.check_asymptotics(family, params, profile, radius=radius, ladder=ladder,
                                        **options)

    def _check_decay_rate(self, ctx, t=None, radii=None, **options):
        t = t if t is not None else ctx.trajectory.times[-1]
        if radii is None:
            radii = list(np.geomspace(2.0, 0.9 * ctx.grid.half_width, 8))
        return checks.check_decay_rate(ctx.trajectory.field_at(t), integrate(ctx.u0), radii,
                                       ctx.sigma, m=ctx.m, **options)

    def _check_supersolution(self, ctx, **options):
        return checks.check_supersolution(ctx.trajectory, ctx.op, ctx.nonlinearity, **options)

    def _check_energy_bound(self, ctx, horizon=None):
        horizon = horizon if horizon is not None else ctx.trajectory.times[-1]
        return checks.check_energy_bound(ctx.trajectory, ctx.op, ctx.nonlinearity, horizon)

    def _check_comparison(self, ctx, pairs=50, seed=None, **options):
        data = checks.random_ordered_data(ctx.grid, pairs,
                                          seed=ctx.seed if seed is None else seed)
        solver_config = ctx.config.build_solver_config()

        def evolve(pair):
            lower, upper = pair
            return (run(ctx.grid, ctx.kernel, ctx.nonlinearity, lower, solver_config, op=ctx.op),
                    run(ctx.grid, ctx.kernel, ctx.nonlinearity, upper, solver_config, op=ctx.op))

        return checks.check_comparison(_map(evolve, data, ctx.threads), **options)

    def _check_spectral_consistency(self, ctx, **options):
        options.setdefault("sigma", ctx.sigma)
        return self.run_operator_check("spectral_consistency", **options)

    def _check_energy_identity(self, ctx, samples=10, **options):
        return operator_checks.check_energy_identity(ctx.op, samples=samples, seed=ctx.seed,
                                                     **options)

    def _check_stroock_varopoulos(self, ctx, **options):
        options.setdefault("seed", ctx.seed)
        return operator_checks.check_stroock_varopoulos(ctx.op, ctx.nonlinearity, **options)

    def _check_cutoff_scaling(self, ctx, q="inf", **options):
        options.setdefault("threads", ctx.threads)
        return operator_checks.check_cutoff_scaling(ctx.kernel, _q(q), **options)

    def _run_check(self, ctx, check):
        options = check.options
        name = options.pop("name", None)
        runner = getattr(self, "_check_%s" % check.id, None)
        if runner is None:
            raise NlfdValidationException("unknown check %r" % check.id)
        logger.debug("running check %s with %r", check.id, options)
        try:
            record = runner(ctx, **options)
        except TypeError as ex:
            raise NlfdValidationException("bad parameters for check %r: %s" % (check.id, ex))
        if name:
            record.name = name
        return record

    @labapi
    def run_operator_check(self, check_id, sigma=1.0, points_per_axis=256, half_width=50.0,
                           m=0.5, name=None, **options):
        """
        operator-level checks that need no scenario

        :param check_id: spectral_eigenrelation, spectral_consistency,
                         energy_identity, stroock_varopoulos or cutoff_scaling
        """
        if check_id == "spectral_eigenrelation":
            record = operator_checks.check_spectral_eigenrelation(sigma, **options)
        elif check_id == "spectral_consistency":
            record = operator_checks.check_spectral_consistency(
                sigma, points_per_axis=points_per_axis, half_width=half_width,
                threads=self.threads, **options)
        elif check_id in ("energy_identity", "stroock_varopoulos"):
            grid = make_grid(1, half_width, points_per_axis)
            op = DiscreteOperator(grid, FractionalPowerKernel(1, sigma), threads=self.threads)
            options.setdefault("seed", self.seed)
            if check_id == "energy_identity":
                record = operator_checks.check_energy_identity(op, **options)
            else:
                record = operator_checks.check_stroock_varopoulos(op, PurePower(m), **options)
        elif check_id == "cutoff_scaling":
            q = _q(options.pop("q", "inf"))
            record = operator_checks.check_cutoff_scaling(
                FractionalPowerKernel(1, sigma), q, points_per_axis=points_per_axis,
                threads=self.threads, **options)
        else:
            raise NlfdValidationException("unknown operator check %r" % (check_id,))
        if name:
            record.name = name
        return record

    @labapi
    def run_scenario(self, config, output_dir=None, write=True):
        """
        solve one scenario, run its checks and write the artifact layout

        :param config: ScenarioConfig, a raw mapping or a path to a YAML file
        :return: ScenarioOutcome
        """
        if isinstance(config, dict):
            config = config_from_dict(config)
        elif not hasattr(config, "build_grid"):
            config = load_config(config)
        threads = config.threads or self.threads
        seed = config.seed if config.seed is not None else self.seed
        grid = config.build_grid()
        kernel = config.build_kernel()
        nonlinearity = config.build_nonlinearity()
        solver_config = config.build_solver_config()
        logger.info("scenario %s: %r, %r, %r", config.name, grid, kernel, nonlinearity)

        op = assemble_quadrature(grid, kernel, threads=threads, seed=seed)
        u0 = materialize_initial_datum(config.initial_datum, grid, kernel=kernel,
                                       nonlinearity=nonlinearity, threads=threads)
        trajectory = run(grid, kernel, nonlinearity, u0, solver_config, op=op, threads=threads,
                         metadata={"scenario": config.name, "seed": seed})
        ctx = RunContext(config, grid, kernel, nonlinearity, op, u0, trajectory, threads, seed)

        report = DiagnosticsReport.for_run(grid, kernel, nonlinearity, config=config.to_dict(),
                                           scenario=config.name, seed=seed)
        report.extend(_map(lambda check: self._run_check(ctx, check), config.checks or [],
                           threads))

        output_dir = output_dir or config.output_dir or os.path.join(self.output_dir,
                                                                     config.name)
        if write:
            ArtifactWriter(output_dir).write_run(trajectory, config=config, report=report)
        return ScenarioOutcome(config.name, report, trajectory, output_dir)

    @labapi
    def compute_barenblatt(self, mass, m, sigma, dim=1, half_width=50.0, points_per_axis=1024,
                           kappa=1.0, out=None):
        """
        :return: BarenblattProfile; written as CSV to `out` when given
        """
        params = SelfSimilarParams(dim, m, sigma, mass, kappa=kappa)
        grid = make_grid(dim, half_width, points_per_axis)
        profile = compute_profile(params, grid, threads=self.threads)
        if out:
            directory = os.path.dirname(out)
            if directory and not os.path.isdir(directory):
                os.makedirs(directory)
            profile.export_csv(out)
            logger.info("profile written to %s", out)
        return profile

    def _run_entry(self, entry, output_dir):
        if entry.kind == SuiteEntry.OPERATOR:
            report = DiagnosticsReport({"suite_entry": entry.name})
            options = dict(entry.payload.get("params") or {})
            report.add(self.run_operator_check(entry.payload["id"], **options))
            report.write(os.path.join(output_dir, entry.name))
            return ScenarioOutcome(entry.name, report,
                                   output_dir=os.path.join(output_dir, entry.name))
        return self.run_scenario(entry.payload, output_dir=os.path.join(output_dir, entry.name))

    @labapi
    def run_suite(self, name, output_dir=None):
        """
        :return: list of ScenarioOutcome, one per suite entry
        """
        entries = get_suite(name)
        output_dir = output_dir or os.path.join(self.output_dir, name)
        logger.info("suite %s: %d entries", name, len(entries))
        return _map(lambda entry: self._run_entry(entry, output_dir), entries, self.threads)
