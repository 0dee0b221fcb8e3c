"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import print_function, absolute_import, unicode_literals, division

import logging
import os

import numpy as np

from nlfd.barenblatt import (SelfSimilarParams, compute_profile, effective_diffusivity,
                             reconstruct)
from nlfd.exceptions import GridMismatchException, NlfdValidationException
from nlfd.grid import Field, integrate, read_binary, read_csv


logger = logging.getLogger(__name__)


GAUSSIAN_SUPPORT_SCALES = 8.0

initial_data_kinds = {}


def register_initial_datum(kind):
    def decorator(fn):
        initial_data_kinds[kind] = fn
        return fn
    return decorator


def _center(center, grid):
    point = np.broadcast_to(np.asarray(center, dtype=float), (grid.dim,))
    return np.array(point)


def _check_support(grid, center, extent, kind):
    if np.max(np.abs(center)) + extent > grid.half_width:
        raise NlfdValidationException(
            "%s datum with support radius %g around %s exceeds the box [-%g, %g]^%d" %
            (kind, extent, center.tolist(), grid.half_width, grid.half_width, grid.dim))


def _normalized(field, mass):
    total = integrate(field)
    if mass == 0 or total == 0:
        return Field.zeros(field.grid)
    return field.scaled(mass / total)


@register_initial_datum("bump")
def bump(spec, grid, **kwargs):
    """ height times the indicator of the open ball B_radius(center) """
    center = _center(spec.center, grid)
    _check_support(grid, center, spec.radius, "bump")
    inside = grid.radii(center) < spec.radius
    return Field(grid, spec.height * inside)


@register_initial_datum("gaussian")
def gaussian(spec, grid, **kwargs):
    """ exp(-|x - center|^2 / (2 scale^2)) normalized to the requested mass """
    center = _center(spec.center, grid)
    _check_support(grid, center, GAUSSIAN_SUPPORT_SCALES * spec.scale, "gaussian")
    values = np.exp(-0.5 * (grid.radii(center) / spec.scale) ** 2)
    return _normalized(Field(grid, values), spec.mass)


@register_initial_datum("two_bumps")
def two_bumps(spec, grid, **kwargs):
    """ two bumps at center -+ separation/2 along the first axis """
    center = _center(spec.center, grid)
    shift = np.zeros(grid.dim)
    shift[0] = 0.5 * spec.separation
    values = np.zeros(grid.cell_count)
    for offset in (-shift, shift):
        _check_support(grid, center + offset, spec.radius, "two_bumps")
        values += grid.radii(center + offset) < spec.radius
    return Field(grid, spec.height * np.minimum(values, 1.0))


@register_initial_datum("barenblatt")
def barenblatt(spec, grid, kernel=None, nonlinearity=None, threads=1, **kwargs):
    """
    B_M(., t0) of the limit equation of (kernel, nonlinearity)
    """
    if kernel is None or nonlinearity is None:
        raise NlfdValidationException("barenblatt data needs the kernel and the nonlinearity")
    params = SelfSimilarParams(grid.dim, nonlinearity.m, kernel.sigma, spec.mass,
                               kappa=effective_diffusivity(kernel, nonlinearity))
    profile = compute_profile(params, grid, threads=threads)
    return reconstruct(profile, params, spec.t0)


@register_initial_datum("from_file")
def from_file(spec, grid, **kwargs):
    """ binary snapshots (.bin) or CSV fields, which must match the grid """
    _, extension = os.path.splitext(spec.path)
    if extension == ".csv":
        return read_csv(spec.path, grid)
    field, _ = read_binary(spec.path, boundary_mode=grid.boundary_mode)
    if not field.grid.same_as(grid):
        raise GridMismatchException("%s holds a field on %r, expected %r" %
                                    (spec.path, field.grid, grid))
    return field


def materialize_initial_datum(spec, grid, kernel=None, nonlinearity=None, threads=1):
    """
    :param spec: InitialDatumParams
    :return: nonnegative Field
    """
    try:
        builder = initial_data_kinds[spec.kind]
    except KeyError:
        raise NlfdValidationException("unknown initial datum %r, expected one of %s" %
                                      (spec.kind, sorted(initial_data_kinds)))
    field = builder(spec, grid, kernel=kernel, nonlinearity=nonlinearity, threads=threads)
    if np.min(field.values) < 0:
        raise NlfdValidationException("initial datum %r has negative values" % spec.kind)
    logger.info("initial datum %s: mass %.12g, max %.6g", spec.kind, integrate(field),
                field.norm_inf())
    return field
