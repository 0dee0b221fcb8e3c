"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.


Checks on the discrete operator itself, independent of any time evolution.
"""
from __future__ import print_function, absolute_import, unicode_literals, division

import logging

import numpy as np
from scipy.special import roots_jacobi

from nlfd.constants import (SPECTRAL_AGREEMENT_TOLERANCE, ENERGY_IDENTITY_TOLERANCE,
                            CUTOFF_SLOPE_TOLERANCE, BOUNDARY_PERIODIC, DEFAULT_SEED)
from nlfd.exceptions import NlfdValidationException
from nlfd.grid import Field, make_grid
from nlfd.kernel import FractionalPowerKernel
from nlfd.operator import (DiscreteOperator, apply_spectral, apply_spectral_padded,
                           cutoff_scaling_check)
from nlfd.verify.report import CheckRecord


logger = logging.getLogger(__name__)


TAG_SPECTRAL = "spectral-consistency"
TAG_ENERGY_IDENTITY = "energy-identity"
TAG_STROOCK_VAROPOULOS = "stroock-varopoulos"
TAG_CUTOFF = "cutoff-scaling"

EIGENRELATION_TOLERANCE = 1e-10
STROOCK_VAROPOULOS_SLACK = 1e-9


def check_spectral_eigenrelation(sigma, modes=(1, 2, 3, 4), points_per_axis=64,
                                 tolerance=EIGENRELATION_TOLERANCE):
    """
    cos(j x) -> |j|^sigma cos(j x) on the periodic box [-pi, pi)
    """
    grid = make_grid(1, np.pi, points_per_axis, boundary_mode=BOUNDARY_PERIODIC)
    x = grid.coordinates()[:, 0]
    errors = []
    for j in modes:
        result = apply_spectral(grid, Field(grid, np.cos(j * x)), sigma).values
        errors.append(float(np.max(np.abs(result - abs(j) ** sigma * np.cos(j * x)))))
    worst = max(errors)
    return CheckRecord.from_flag(
        "spectral_eigenrelation_%g" % sigma, TAG_SPECTRAL, worst <= tolerance,
        measured={"headline": worst, "max_error": worst, "sigma": sigma},
        tolerance=tolerance,
        curves={"modes": (["mode", "max_error"], list(zip(modes, errors)))})


def quadrature_spectral_error(sigma, points_per_axis, half_width=50.0, threads=1):
    """
    relative L-infinity distance on the central half-box between the
    quadrature operator and the zero-padded spectral multiplier, applied to
    a standard Gaussian
    """
    grid = make_grid(1, half_width, points_per_axis)
    op = DiscreteOperator(grid, FractionalPowerKernel(1, sigma), threads=threads)
    gaussian = Field.from_function(grid, lambda x: np.exp(-0.5 * np.sum(x ** 2, axis=-1)))
    quadrature = op.apply(gaussian).values
    spectral = apply_spectral_padded(grid, gaussian, sigma).values
    central = np.abs(grid.coordinates()[:, 0]) < 0.5 * half_width
    return float(np.max(np.abs(quadrature - spectral)[central]) /
                 np.max(np.abs(spectral[central])))


def check_spectral_consistency(sigma, points_per_axis=2048, half_width=50.0, threads=1,
                               tolerance=SPECTRAL_AGREEMENT_TOLERANCE):
    """
    agreement at points_per_axis, and a smaller error than at half the resolution
    """
    coarse = quadrature_spectral_error(sigma, points_per_axis // 2, half_width, threads)
    fine = quadrature_spectral_error(sigma, points_per_axis, half_width, threads)
    logger.info("spectral consistency sigma=%g: %.3e (n=%d), %.3e (n=%d)", sigma, coarse,
                points_per_axis // 2, fine, points_per_axis)
    return CheckRecord.from_flag(
        "spectral_consistency_%g" % sigma, TAG_SPECTRAL, fine <= tolerance and fine < coarse,
        measured={"headline": fine, "relative_error": fine, "coarse_error": coarse,
                  "sigma": sigma},
        tolerance=tolerance,
        curves={"refinement": (["points_per_axis", "relative_error"],
                               [(points_per_axis // 2, coarse), (points_per_axis, fine)])})


def check_energy_identity(op, samples=10, seed=DEFAULT_SEED,
                          tolerance=ENERGY_IDENTITY_TOLERANCE):
    """
    <L f, g> = E(f, g) on random fields, relative to sqrt(E(f, f) E(g, g))
    """
    rng = np.random.RandomState(seed)
    count = op.grid.cell_count
    worst = 0.0
    for _ in range(samples):
        f = rng.randn(count)
        g = rng.randn(count)
        lhs = op.inner(op.apply_values(f), g)
        rhs = op.energy(f, g)
        scale = np.sqrt(op.energy(f, f) * op.energy(g, g))
        worst = max(worst, abs(lhs - rhs) / scale)
    return CheckRecord.from_flag(
        "energy_identity", TAG_ENERGY_IDENTITY, worst <= tolerance,
        measured={"headline": worst, "max_relative_gap": worst, "samples": samples},
        tolerance=tolerance)


def f_epsilon(s, p, epsilon):
    """ (s + eps)^{p-1} - eps^{p-1} """
    return (s + epsilon) ** (p - 1.0) - epsilon ** (p - 1.0)


def h_epsilon(s, p, epsilon, m, c, nodes=32):
    """
    sqrt(c (p - 1)) int_0^s (r + eps)^{(p-2)/2} r^{(m-1)/2} dr by Gauss-Jacobi,
    which absorbs the r^{(m-1)/2} endpoint singularity
    """
    s = np.asarray(s, dtype=float)
    x, weights = roots_jacobi(nodes, 0.0, (m - 1.0) / 2.0)
    r = 0.5 * s[..., np.newaxis] * (1.0 + x)
    smooth = (r + epsilon) ** ((p - 2.0) / 2.0)
    integral = (0.5 * s) ** ((m + 1.0) / 2.0) * np.sum(weights * smooth, axis=-1)
    return np.sqrt(c * (p - 1.0)) * integral


def check_stroock_varopoulos(op, nonlinearity, p=2.0, epsilon=0.1, samples=100,
                             seed=DEFAULT_SEED, slack=STROOCK_VAROPOULOS_SLACK):
    """
    E(F(u), G(u)) >= E(H(u), H(u)) with F = f_eps, G = phi, H = h_eps, on
    nonnegative random fields; (H')^2 <= F' G' holds through the lower
    envelope constant c of phi
    """
    if not p > 1:
        raise NlfdValidationException("p must exceed 1, got %r" % (p,))
    c = nonlinearity.envelope[0]
    m = nonlinearity.m
    rng = np.random.RandomState(seed)
    grid = op.grid
    bump = np.exp(-0.5 * np.sum((grid.coordinates() / (0.25 * grid.half_width)) ** 2, axis=-1))
    worst = np.inf
    for _ in range(samples):
        u = rng.rand(grid.cell_count) * bump
        lhs = op.energy(f_epsilon(u, p, epsilon), nonlinearity.phi(u))
        hu = h_epsilon(u, p, epsilon, m, c)
        rhs = op.energy(hu, hu)
        worst = min(worst, (lhs - rhs) / lhs)
    return CheckRecord.from_flag(
        "stroock_varopoulos", TAG_STROOCK_VAROPOULOS, worst >= -slack,
        measured={"headline": float(worst), "min_relative_margin": float(worst), "p": p,
                  "epsilon": epsilon, "samples": samples},
        tolerance=slack)


def check_cutoff_scaling(kernel, q, radii=(4.0, 8.0, 16.0, 32.0), points_per_axis=512,
                         threads=1, tolerance=CUTOFF_SLOPE_TOLERANCE):
    """
    fitted log-log slope of ||L phi_R||_q against R equals -sigma + N/q
    """
    table = cutoff_scaling_check(kernel, q, radii=radii, points_per_axis=points_per_axis,
                                 threads=threads)
    gap = abs(table["slope"] - table["expected"])
    label = "inf" if np.isinf(q) else "%g" % q
    return CheckRecord.from_flag(
        "cutoff_scaling_%g_%s" % (kernel.sigma, label), TAG_CUTOFF, gap <= tolerance,
        measured={"headline": table["slope"], "slope": table["slope"],
                  "expected": table["expected"], "q": label},
        tolerance=tolerance,
        curves={"norms": (["radius", "norm"], table["rows"])})
