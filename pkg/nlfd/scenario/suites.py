"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.


Predefined scenario sets. "quick" is a smoke run on small grids; "acceptance"
reproduces every quantitative claim at desk scale (N = 1, n <= 4096).
"""
from __future__ import print_function, absolute_import, unicode_literals

import copy
import logging

from nlfd.barenblatt import critical_exponent
from nlfd.constants import SUITE_QUICK, SUITE_ACCEPTANCE
from nlfd.exceptions import NlfdValidationException


logger = logging.getLogger(__name__)


class SuiteEntry(object):
    """
    one item of a suite: a scenario (raw mapping, validated when run) or an
    operator-level check (check id plus options)
    """

    SCENARIO = "scenario"
    OPERATOR = "operator"

    def __init__(self, name, kind, payload):
        if kind not in (self.SCENARIO, self.OPERATOR):
            raise NlfdValidationException("unknown suite entry kind %r" % (kind,))
        self.name = name
        self.kind = kind
        self.payload = payload

    def __repr__(self):
        return "SuiteEntry(%r, %r)" % (self.name, self.kind)


def _scenario(name, sigma, m, half_width, n, t_end, checks, initial_datum=None, kernel=None,
              nonlinearity=None, snapshot_times=None, dt_max=None, dt_initial=1e-3):
    raw = {
        "name": name,
        "grid": {"dim": 1, "half_width": half_width, "points_per_axis": n},
        "kernel": kernel or {"family": "fractional_power", "sigma": sigma},
        "nonlinearity": nonlinearity or {"family": "pure_power", "m": m},
        "initial_datum": initial_datum or {"kind": "bump", "center": 0.0, "radius": 1.0,
                                           "height": 1.0},
        "solver": {"t_end": t_end, "dt_initial": dt_initial, "dt_min": 1e-12,
                   "snapshot_times": snapshot_times or [t_end]},
        "checks": [c if isinstance(c, dict) else {"id": c} for c in checks],
    }
    if dt_max is not None:
        raw["solver"]["dt_max"] = dt_max
    return SuiteEntry(name, SuiteEntry.SCENARIO, raw)


def _operator(name, check, **options):
    return SuiteEntry(name, SuiteEntry.OPERATOR, {"id": check, "params": options})


def _geometric(start, stop, count):
    ratio = (float(stop) / start) ** (1.0 / (count - 1))
    # the last point is exactly `stop`, never a rounding step past t_end
    return [start * ratio ** i for i in range(count - 1)] + [float(stop)]


def quick_suite():
    return [
        _operator("eigenrelation", "spectral_eigenrelation", sigma=1.0),
        _operator("spectral", "spectral_consistency", sigma=1.0, points_per_axis=1024,
                  tolerance=1e-2),
        _operator("energy", "energy_identity", sigma=1.0, points_per_axis=256),
        _operator("stroock-varopoulos", "stroock_varopoulos", sigma=1.0, m=0.5,
                  points_per_axis=128, samples=10),
        _operator("cutoff", "cutoff_scaling", sigma=1.0, q="inf", points_per_axis=256),
        _scenario("mass", 1.0, 0.75, 200.0, 1024, 0.5, ["mass_conservation"],
                  snapshot_times=[0.1, 0.25, 0.5],
                  initial_datum={"kind": "gaussian", "center": 0.0, "scale": 1.0,
                                 "mass": 1.0}),
        _scenario("positivity", 1.0, 0.75, 20.0, 256, 0.1,
                  [{"id": "positivity_harnack", "params": {"radius": 19.0, "p": 1.0}}]),
        _scenario("monotonicity", 1.0, 0.5, 20.0, 128, 1.0, ["monotonicity"],
                  snapshot_times=[0.25, 0.5, 0.75, 1.0], dt_max=0.01),
        _scenario("comparison", 1.0, 0.75, 10.0, 64, 0.5,
                  [{"id": "comparison", "params": {"pairs": 5}}],
                  snapshot_times=[0.1, 0.25, 0.5]),
    ]


def acceptance_suite():
    entries = []
    for sigma in (0.5, 1.0, 1.5):
        entries.append(_operator("eigenrelation-%g" % sigma, "spectral_eigenrelation",
                                 sigma=sigma))
        entries.append(_operator("spectral-%g" % sigma, "spectral_consistency", sigma=sigma,
                                 points_per_axis=2048))
    entries.append(_operator("energy", "energy_identity", sigma=1.0, points_per_axis=1024))
    entries.append(_operator("stroock-varopoulos", "stroock_varopoulos", sigma=1.0, m=0.5,
                             points_per_axis=256, samples=100))
    for sigma, q in ((1.0, "inf"), (0.5, 1.0), (1.0, 1.0)):
        entries.append(_operator("cutoff-%g-%s" % (sigma, q), "cutoff_scaling", sigma=sigma,
                                 q=q, points_per_axis=512))

    gaussian = {"kind": "gaussian", "center": 0.0, "scale": 1.0, "mass": 1.0}
    long_times = [1.0, 2.5, 5.0, 7.5, 10.0]
    # leak over [0, t] is about kappa(0) int_0^t int phi(u), kappa(0) ~ L^-sigma;
    # for sigma = 1 that is 0.23 at L = 100, so L = 5000 stays under 1%
    entries.append(_scenario(
        "mass-1-0.75", 1.0, 0.75, 5000.0, 4096, 10.0, ["mass_conservation"],
        initial_datum=dict(gaussian, scale=5.0), snapshot_times=long_times))
    # for sigma = 0.5 the solution carries most of its mass past |x| = 100 before
    # t = 10: the long run bounds the drift only, the short one the leak as well
    for m in (critical_exponent(1, 0.5), 0.75):
        entries.append(_scenario(
            "mass-0.5-%g" % m, 0.5, m, 100.0, 4096, 10.0,
            [{"id": "mass_conservation", "params": {"leak_tolerance": None}}],
            initial_datum=gaussian, snapshot_times=long_times))
        entries.append(_scenario(
            "mass-0.5-%g-short" % m, 0.5, m, 100.0, 4096, 0.01, ["mass_conservation"],
            initial_datum=gaussian, snapshot_times=[0.0025, 0.005, 0.01], dt_initial=1e-4))

    entries.append(_scenario(
        "extinction", 0.5, 0.3, 50.0, 1024, 50.0, ["extinction"],
        snapshot_times=_geometric(0.05, 50.0, 25)))
    entries.append(_scenario(
        "no-extinction", 0.5, 0.75, 50.0, 1024, 50.0, ["extinction", "mass_conservation"],
        snapshot_times=_geometric(0.5, 50.0, 12)))

    for m in (0.75, 0.5):
        entries.append(_scenario(
            "smoothing-%g" % m, 1.0, m, 200.0, 4096, 1000.0, ["smoothing"],
            snapshot_times=_geometric(1.0, 1000.0, 16), dt_max=20.0))

    entries.append(_scenario(
        "positivity", 1.0, 0.75, 20.0, 1024, 0.1,
        [{"id": "positivity_harnack", "params": {"radius": 20.0, "p": 1.0}},
         {"id": "positivity_harnack", "params": {"radius": 20.0, "p": 1.0 / 0.75,
                                                 "on_solution": True,
                                                 "name": "positivity_solution"}}]))
    entries.append(_scenario(
        "monotonicity", 1.0, 0.5, 50.0, 1024, 4.0, ["monotonicity", "supersolution"],
        snapshot_times=[0.5, 1.0, 1.5, 2.0, 3.0, 4.0], dt_max=0.01))
    # one snapshot: the constant needed at a fixed t goes like R^{-1/4} far from the
    # bump, while across times it grows with the running mean of int u^m
    entries.append(_scenario(
        "tail", 1.0, 0.75, 200.0, 4096, 1.0,
        [{"id": "tail_control", "params": {"radii": [10.0, 20.0, 40.0]}}]))

    ladder = [1, 4, 16, 64, 256]
    entries.append(_scenario(
        "asymptotics-pure", 1.0, 0.75, 200.0, 4096, 1.0,
        [{"id": "asymptotics", "params": {"ladder": ladder}}], initial_datum=gaussian))
    entries.append(_scenario(
        "asymptotics-general", 1.0, 0.75, 200.0, 4096, 1.0,
        [{"id": "asymptotics", "params": {"ladder": ladder}}], initial_datum=gaussian,
        kernel={"family": "convolution_modulated", "sigma": 1.0, "params": {"epsilon": 0.5}},
        nonlinearity={"family": "perturbed_power", "m": 0.75,
                      "params": {"epsilon": 0.1, "A": 0.2}}))
    entries.append(_scenario(
        "comparison", 1.0, 0.75, 10.0, 128, 1.0,
        [{"id": "comparison", "params": {"pairs": 50}}],
        snapshot_times=[0.1, 0.25, 0.5, 1.0]))
    return entries


SUITES = {
    SUITE_QUICK: quick_suite,
    SUITE_ACCEPTANCE: acceptance_suite,
}


def get_suite(name):
    """
    :return: list of SuiteEntry (fresh copies)
    """
    try:
        factory = SUITES[name]
    except KeyError:
        raise NlfdValidationException("unknown suite %r, expected one of %s" %
                                      (name, sorted(SUITES)))
    return copy.deepcopy(factory())
