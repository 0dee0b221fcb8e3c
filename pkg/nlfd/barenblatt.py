"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.


Self-similar (Barenblatt) profiles of the fractional fast diffusion equation

    B_t + kappa (-Delta)^{sigma/2} B^m = 0,  B(0) = M delta_0,

and the rescalings u_k(x, t) = k^alpha u(k^{alpha/N} x, k t).

The profile is computed as the fixed point of the rescaled flow; no closed form
is assumed.
"""
from __future__ import print_function, absolute_import, unicode_literals, division

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from nlfd.constants import (PROFILE_TOLERANCE, PROFILE_MAX_CYCLES, PROFILE_SEED_WIDTH_CELLS,
                            ASYMPTOTICS_LADDER)
from nlfd.exceptions import NlfdValidationException, NoBarenblattException
from nlfd.grid import Field, integrate
from nlfd.kernel import FractionalPowerKernel
from nlfd.nonlinearity import PurePower
from nlfd.operator import DiscreteOperator
from nlfd.solver import SolverConfig, run


logger = logging.getLogger(__name__)


def critical_exponent(dim, sigma):
    """ m_c = (N - sigma)_+ / N """
    return max(dim - sigma, 0.0) / dim


def similarity_exponent(dim, m, sigma):
    """ alpha = N / (N(m - 1) + sigma), defined for m > m_c only """
    m_c = critical_exponent(dim, sigma)
    if not m > m_c:
        raise NoBarenblattException(
            "Barenblatt solutions do not exist when m <= m_c: m = %g, m_c = %g" % (m, m_c))
    return dim / (dim * (m - 1.0) + sigma)


def effective_diffusivity(kernel, nonlinearity):
    """
    kappa = c1 c2 / mu_{N,sigma} of the limit equation
    """
    if kernel.c1 is None:
        raise NlfdValidationException("kernel %s has no far-field limit constant" % kernel.KIND)
    return kernel.c1 * nonlinearity.c2 / kernel.mu


class SelfSimilarParams(object):
    def __init__(self, dim, m, sigma, mass, kappa=1.0):
        if not mass > 0:
            raise NlfdValidationException("mass must be positive, got %r" % (mass,))
        if not kappa > 0:
            raise NlfdValidationException("kappa must be positive, got %r" % (kappa,))
        self.dim = int(dim)
        self.m = float(m)
        self.sigma = float(sigma)
        self.mass = float(mass)
        self.kappa = float(kappa)
        self.alpha = similarity_exponent(self.dim, self.m, self.sigma)

    @property
    def m_c(self):
        return critical_exponent(self.dim, self.sigma)

    def limit_problem(self):
        """
        :return: (kernel, nonlinearity) of the limit equation
        """
        return (FractionalPowerKernel(self.dim, self.sigma),
                PurePower(self.m, coefficient=self.kappa))

    def to_dict(self):
        return {
            "dim": self.dim,
            "m": self.m,
            "sigma": self.sigma,
            "mass": self.mass,
            "kappa": self.kappa,
            "alpha": self.alpha,
            "m_c": self.m_c,
        }

    def __repr__(self):
        return "SelfSimilarParams(%r)" % self.to_dict()


def sample_field(field, points, warn=True):
    """
    piecewise (multi)linear interpolation of a field at arbitrary points,
    zero outside the hull of its cell centers

    :param points: ndarray (P, N)
    :return: ndarray (P,)
    """
    grid = field.grid
    axis = grid.axis_coordinates()
    interpolator = RegularGridInterpolator((axis,) * grid.dim, field.reshaped(),
                                           bounds_error=False, fill_value=0.0)
    points = np.asarray(points, dtype=float).reshape(-1, grid.dim)
    outside = np.any(np.abs(points) > grid.half_width, axis=-1)
    if warn and np.any(outside):
        logger.warning("%d of %d sample points fall outside the source box [-%g, %g]^%d; "
                       "extrapolating by zero", int(np.sum(outside)), len(points),
                       grid.half_width, grid.half_width, grid.dim)
    return interpolator(points)


class BarenblattProfile(Field):
    """
    B_M(., 1) sampled on a grid, with its radial table and convergence history
    """

    def __init__(self, grid, values, params, history=None, converged=False):
        super(BarenblattProfile, self).__init__(grid, values)
        self.params = params
        self.history = list(history or [])
        self.converged = converged

    @property
    def cycles(self):
        return len(self.history)

    def radial_table(self):
        """
        :return: (radii, values); for N = 2 values are averaged over rings of width h
        """
        grid = self.grid
        radii = grid.radii()
        if grid.dim == 1:
            positive = grid.coordinates()[:, 0] > 0
            order = np.argsort(radii[positive])
            return radii[positive][order], self.values[positive][order]
        h = grid.spacing
        bins = np.floor(radii / h).astype(int)
        usable = bins < grid.points_per_axis // 2
        counts = np.bincount(bins[usable])
        sums = np.bincount(bins[usable], weights=self.values[usable])
        filled = counts > 0
        centers = np.bincount(bins[usable], weights=radii[usable])[filled] / counts[filled]
        return centers, sums[filled] / counts[filled]

    def value_at_radius(self, r):
        radii, values = self.radial_table()
        return np.interp(r, radii, values, left=values[0], right=0.0)

    def export_csv(self, path):
        """ radius, value rows with the parameters in the header """
        radii, values = self.radial_table()
        header = "\n".join(["%s=%r" % item for item in sorted(self.params.to_dict().items())] +
                           ["converged=%r" % self.converged, "radius,value"])
        np.savetxt(path, np.column_stack([radii, values]), delimiter=",", header=header,
                   comments="# ", fmt="%.17g")


def _seed(grid, mass):
    width = PROFILE_SEED_WIDTH_CELLS * grid.spacing
    bump = np.exp(-0.5 * (grid.radii() / width) ** 2)
    return Field(grid, bump * mass / (grid.cell_volume * np.sum(bump)))


def _profile_config(t_end, grid):
    return SolverConfig(t_end=t_end, dt_initial=1e-4 * t_end, dt_min=1e-12 * t_end,
                        dt_max=0.05 * t_end, snapshot_times=[t_end])


def compute_profile(params, grid, tolerance=PROFILE_TOLERANCE, max_cycles=PROFILE_MAX_CYCLES,
                    threads=1):
    """
    fixed point of evolve-then-renormalize: start from a concentrated bump of
    mass M, evolve to t = 1, then repeatedly evolve for one time unit and
    apply v -> 2^alpha v(2^{alpha/N} .) until successive profiles differ by
    less than tolerance * M in L1. Each renormalized profile is scaled back
    to mass M; the mass it had lost is kept in the history.

    :return: BarenblattProfile (converged flag False after max_cycles)
    """
    if grid.dim != params.dim:
        raise NlfdValidationException("grid dimension does not match the parameters")
    kernel, nonlinearity = params.limit_problem()
    op = DiscreteOperator(grid, kernel, threads=threads)

    current = run(grid, kernel, nonlinearity, _seed(grid, params.mass),
                  _profile_config(1.0, grid), op=op).fields[-1]
    history = []
    converged = False
    for cycle in range(max_cycles):
        evolved = run(grid, kernel, nonlinearity, current, _profile_config(1.0, grid),
                      op=op).fields[-1]
        renormalized = rescale_solution(evolved, 2.0, params, warn=False)
        lost = 1.0 - integrate(renormalized) / params.mass
        renormalized = renormalized.scaled(params.mass / integrate(renormalized))
        change = grid.cell_volume * np.sum(np.abs(renormalized.values - current.values))
        history.append({"cycle": cycle + 1, "l1_change": change / params.mass,
                        "lost_mass_fraction": lost})
        logger.info("profile cycle %d: L1 change %.3e, lost mass %.3e", cycle + 1,
                    change / params.mass, lost)
        current = renormalized
        if change < tolerance * params.mass:
            converged = True
            break
    if not converged:
        logger.warning("profile did not converge in %d cycles (last change %.3e)",
                       max_cycles, history[-1]["l1_change"] if history else float('nan'))
    return BarenblattProfile(grid, current.values, params, history, converged)


def reconstruct(profile, params, t, grid=None):
    """
    B(x, t) = t^{-alpha} B(x t^{-alpha/N}, 1) sampled on grid (default: the profile grid)
    """
    if not t > 0:
        raise NlfdValidationException("reconstruction needs t > 0, got %r" % (t,))
    grid = grid or profile.grid
    factor = t ** (-params.alpha / params.dim)
    values = sample_field(profile, grid.coordinates() * factor, warn=False)
    return Field(grid, t ** (-params.alpha) * values)


def rescale_solution(u_snapshot, k, params, grid=None, warn=True):
    """
    u_k(x) = k^alpha u(k^{alpha/N} x) for a snapshot u(., k t), sampled on grid
    (default: the snapshot grid); zero outside the source box
    """
    if not k >= 1:
        raise NlfdValidationException("rescaling factor k must be >= 1, got %r" % (k,))
    grid = grid or u_snapshot.grid
    if k == 1 and grid.same_as(u_snapshot.grid):
        return u_snapshot
    factor = k ** (params.alpha / params.dim)
    values = sample_field(u_snapshot, grid.coordinates() * factor, warn=warn)
    return Field(grid, k ** params.alpha * values)


def deposit_rescaled(field, k, params, grid):
    """
    k^alpha u(k^{alpha/N} x) as a mass-exact cloud-in-cell deposit on grid:
    each source cell's mass moves to x / k^{alpha/N} and is shared linearly
    between the neighbouring target cells
    """
    source = field.grid
    factor = k ** (-params.alpha / params.dim)
    positions = source.coordinates() * factor
    masses = field.values * source.cell_volume
    h = grid.spacing
    n = grid.points_per_axis
    # fractional index relative to the first cell center
    fractional = (positions + grid.half_width) / h - 0.5
    base = np.floor(fractional).astype(int)
    offset = fractional - base
    deposited = np.zeros(grid.shape)
    dropped = 0.0
    for corner in range(2 ** grid.dim):
        bits = [(corner >> d) & 1 for d in range(grid.dim)]
        index = base + np.array(bits)
        weight = np.prod(np.where(np.array(bits) == 1, offset, 1.0 - offset), axis=-1)
        inside = np.all((index >= 0) & (index < n), axis=-1)
        dropped += np.sum(weight[~inside] * masses[~inside])
        np.add.at(deposited, tuple(index[inside].T), weight[inside] * masses[inside])
    if dropped > 0:
        logger.warning("cloud-in-cell deposit drops mass %.3g outside the target box", dropped)
    return Field(grid, deposited.ravel() / grid.cell_volume)


def run_rescaled_family(grid, kernel, nonlinearity, u0, params, ladder=ASYMPTOTICS_LADDER,
                        config=None, threads=1):
    """
    solve the rescaled problems (J_k, phi_k, u_{0,k}) up to t = 1 for every k
    of the ladder, independently and in parallel

    :return: dict k -> Field u_k(., 1)
    """
    config = config or _profile_config(1.0, grid)

    def solve(k):
        kernel_k = kernel.rescale(k, params.alpha)
        nonlinearity_k = nonlinearity.rescale(k, params.alpha)
        initial = deposit_rescaled(u0, k, params, grid)
        trajectory = run(grid, kernel_k, nonlinearity_k, initial, config)
        return k, trajectory.fields[-1]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(solve, ladder))
    else:
        results = [solve(k) for k in ladder]
    return dict(results)


def trace_deviations(profile, params, test_function, times):
    """
    |int B(x, t) phi(x) dx - M phi(0)| for each t, using the change of variables
    int B(y, 1) phi(t^{alpha/N} y) dy so no resampling is involved

    :param test_function: callable on an (P, N) array of points
    """
    grid = profile.grid
    origin = float(np.asarray(test_function(np.zeros((1, grid.dim)))).ravel()[0])
    deviations = []
    for t in times:
        scaled = grid.coordinates() * t ** (params.alpha / params.dim)
        integral = grid.cell_volume * np.sum(profile.values * test_function(scaled))
        deviations.append(abs(integral - params.mass * origin))
    return deviations


def measure_tail_decay(profile, inner=0.25, outer=0.75):
    """
    empirical log-log slope of the radial profile between inner * L and outer * L

    :return: dict with the slope and the radius range used
    """
    radii, values = profile.radial_table()
    L = profile.grid.half_width
    window = (radii >= inner * L) & (radii <= outer * L) & (values > 0)
    if np.sum(window) < 2:
        raise NlfdValidationException("not enough positive tail samples to fit a decay rate")
    slope = float(np.polyfit(np.log(radii[window]), np.log(values[window]), 1)[0])
    return {"slope": slope, "r_min": float(radii[window][0]), "r_max": float(radii[window][-1])}
