"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.


Discrete realizations of the nonlocal operator

    (L f)_i = sum_j w_ij (f_i - f_j) + kappa_i f_i

on a Grid, the matching energy form, and the spectral fractional Laplacian
used to cross-check it.

Weights:
  * pairs more than NEAR_FIELD_CELLS cells apart (Chebyshev distance) use
    w_ij = J(x_i, x_j) h^N;
  * closer pairs integrate J over the partner cell with tensor Gauss-Legendre
    nodes, averaged over both orientations so W stays symmetric;
  * the self cell is replaced by a second-difference stencil on the axis
    neighbours whose coefficient matches the second moment of J, so the
    scheme acts exactly on quadratics;
  * kappa_i is the kernel mass outside the box (exterior_zero mode), plus the
    stencil coefficients of neighbours that fall outside it.
"""
from __future__ import print_function, absolute_import, unicode_literals, division

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.linalg
import scipy.sparse.linalg
from scipy import fft as spfft
from scipy.integrate import quad
from scipy.special import beta as beta_function, roots_legendre, zeta

from nlfd.constants import (NEAR_FIELD_CELLS, NEAR_FIELD_NODES, DENSE_CELL_LIMIT,
                            ASSEMBLY_BLOCK_ROWS, PERIODIC_IMAGES_1D, PERIODIC_IMAGES_2D,
                            EXTERIOR_ANGLE_NODES, CG_RELATIVE_TOLERANCE, BOUNDARY_PERIODIC,
                            DEFAULT_SEED)
from nlfd.exceptions import NlfdValidationException, NlfdException
from nlfd.grid import Field, make_grid
from nlfd.kernel import check_admissible, validate_hj


logger = logging.getLogger(__name__)


def _cell_rule(dim, nodes=NEAR_FIELD_NODES):
    """
    tensor Gauss-Legendre rule on [-1/2, 1/2]^N, weights summing to one

    :return: (offsets (Q, N), weights (Q,))
    """
    xi, omega = roots_legendre(nodes)
    xi = 0.5 * xi
    omega = 0.5 * omega
    if dim == 1:
        return xi[:, np.newaxis], omega
    a, b = np.meshgrid(xi, xi, indexing='ij')
    wa, wb = np.meshgrid(omega, omega, indexing='ij')
    return np.stack([a.ravel(), b.ravel()], axis=-1), (wa * wb).ravel()


def _self_cell_moment(dim, sigma):
    """
    integral of z_1^2 |z|^{-(N+sigma)} over the unit cell [-1/2, 1/2]^N
    """
    if dim == 1:
        return 2.0 * 0.5 ** (2.0 - sigma) / (2.0 - sigma)
    # polar coordinates over the eight triangles of the square, then halve for z_1^2
    value, _ = quad(lambda theta: (2.0 * np.cos(theta)) ** (sigma - 2.0), 0.0, np.pi / 4.0)
    return 0.5 * 8.0 * value / (2.0 - sigma)


def _halfplane_tail(distance, sigma):
    """ integral of |z|^{-(2+sigma)} over a half-plane at the given distance """
    return beta_function(0.5, (1.0 + sigma) / 2.0) * distance ** (-sigma) / sigma


def _quadrant_tail(d1, d2, sigma, nodes=EXTERIOR_ANGLE_NODES):
    """
    integral of |z|^{-(2+sigma)} over {z_1 > d1, z_2 > d2}, vectorized over d1, d2
    """
    xi, omega = roots_legendre(nodes)
    kink = np.arctan2(d2, d1)

    def integrate(lo, hi, fn):
        half = 0.5 * (hi - lo)
        theta = (lo + half)[..., np.newaxis] + half[..., np.newaxis] * xi
        return half * np.sum(omega * fn(theta), axis=-1)

    below = integrate(np.zeros_like(kink), kink,
                      lambda t: (np.cos(t) / d1[..., np.newaxis]) ** sigma)
    above = integrate(kink, np.full_like(kink, np.pi / 2.0),
                      lambda t: (np.sin(t) / d2[..., np.newaxis]) ** sigma)
    return (below + above) / sigma


def exterior_integral(grid, kernel):
    """
    kappa_i = int over R^N minus the box of J(x_i, y) dy

    Exact for the normalized power kernel; other families are scaled by their
    far-field ratio c1 / mu (1 when they declare no limit).
    """
    coords = grid.coordinates()
    L = grid.half_width
    sigma = kernel.sigma
    scale = kernel.mu * kernel.tail_ratio
    if grid.dim == 1:
        x = coords[:, 0]
        return scale * ((L - x) ** (-sigma) + (L + x) ** (-sigma)) / sigma
    right = L - coords[:, 0]
    left = L + coords[:, 0]
    top = L - coords[:, 1]
    bottom = L + coords[:, 1]
    halfplanes = sum(_halfplane_tail(d, sigma) for d in (right, left, top, bottom))
    corners = (_quadrant_tail(right, top, sigma) + _quadrant_tail(right, bottom, sigma) +
               _quadrant_tail(left, top, sigma) + _quadrant_tail(left, bottom, sigma))
    return scale * (halfplanes - corners)


def smooth_cutoff(s):
    """
    C-infinity cutoff: 1 on [0, 1], 0 on [2, inf), decreasing in between
    """
    s = np.asarray(s, dtype=float)

    def bump(t):
        with np.errstate(divide='ignore', over='ignore'):
            return np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)

    rise = bump(2.0 - s)
    fall = bump(s - 1.0)
    return rise / (rise + fall)


class DiscreteOperator(object):
    """
    Assembled L on a grid. Immutable once built.

    Dense storage keeps the full symmetric W with the second-difference stencil
    folded in; above DENSE_CELL_LIMIT cells rows are regenerated block by block
    on every application.
    """

    def __init__(self, grid, kernel, threads=1, near_cells=NEAR_FIELD_CELLS,
                 dense_limit=DENSE_CELL_LIMIT, block_rows=ASSEMBLY_BLOCK_ROWS):
        if grid.dim != kernel.dim:
            raise NlfdValidationException("kernel dimension %d does not match grid dimension %d" %
                                          (kernel.dim, grid.dim))
        if grid.periodic and not kernel.TRANSLATION_INVARIANT:
            raise NlfdValidationException("periodic assembly needs a convolution kernel, got %s" %
                                          kernel.KIND)
        self._grid = grid
        self._kernel = kernel
        self._threads = max(1, int(threads))
        self._near = int(near_cells)
        self._block_rows = int(block_rows)
        self._dense = grid.cell_count <= dense_limit

        n = grid.points_per_axis
        index = np.stack(np.unravel_index(np.arange(grid.cell_count), grid.shape), axis=-1)
        self._index = index
        self._strides = np.array([n ** (grid.dim - 1 - d) for d in range(grid.dim)])
        self._rule = _cell_rule(grid.dim)

        self._weights = None
        self._stencil = None
        self._rowsum = None
        self._leak = None
        self._assemble()

    @property
    def grid(self):
        return self._grid

    @property
    def kernel(self):
        return self._kernel

    @property
    def sigma(self):
        return self._kernel.sigma

    @property
    def near_cells(self):
        return self._near

    @property
    def dense(self):
        return self._dense

    @property
    def weights(self):
        """ dense W, or None for matrix-free operators """
        return self._weights

    @property
    def leak(self):
        return self._leak

    @property
    def rowsum(self):
        return self._rowsum

    @property
    def diagonal(self):
        return self._rowsum + self._leak

    # assembly

    def _blocks(self):
        count = self._grid.cell_count
        return [np.arange(start, min(start + self._block_rows, count))
                for start in range(0, count, self._block_rows)]

    def _map_blocks(self, fn):
        blocks = self._blocks()
        if self._threads == 1 or len(blocks) == 1:
            return [fn(rows) for rows in blocks]
        with ThreadPoolExecutor(max_workers=self._threads) as executor:
            return list(executor.map(fn, blocks))

    def _offsets(self, rows):
        offsets = self._index[np.newaxis, :, :] - self._index[rows][:, np.newaxis, :]
        if self._grid.periodic:
            n = self._grid.points_per_axis
            offsets = (offsets + n // 2) % n - n // 2
        return offsets

    def _cell_average(self, points, centers, moment_axis=None):
        """
        mean of J(p, c + h xi) (times z_d^2 when moment_axis is set) over the cell rule
        """
        nodes, omega = self._rule
        h = self._grid.spacing
        y = centers[:, np.newaxis, :] + h * nodes[np.newaxis, :, :]
        p = points[:, np.newaxis, :]
        values = self._kernel.evaluate(np.broadcast_to(p, y.shape), y)
        if moment_axis is not None:
            values = values * (y[..., moment_axis] - p[..., moment_axis]) ** 2
        return values.dot(omega)

    def _row_block(self, rows, with_moments=False):
        """
        base weights of the given rows (no second-difference stencil)

        :return: ndarray (len(rows), cells), and with_moments the per-axis second
                 moment defects (len(rows), N)
        """
        grid = self._grid
        kernel = self._kernel
        h = grid.spacing
        volume = grid.cell_volume
        dim = grid.dim
        coords = grid.coordinates()

        offsets = self._offsets(rows)
        chebyshev = np.max(np.abs(offsets), axis=-1)
        x = coords[rows]
        y = x[:, np.newaxis, :] + h * offsets
        xb = np.broadcast_to(x[:, np.newaxis, :], y.shape)
        block = np.zeros(chebyshev.shape)

        far = chebyshev > self._near
        far_values = kernel.evaluate(xb[far], y[far])
        block[far] = far_values * volume

        near = (chebyshev > 0) & ~far
        bi, bj = np.nonzero(near)
        xs = x[bi]
        ys = y[bi, bj]
        forward = self._cell_average(xs, ys)
        backward = self._cell_average(ys, xs)
        block[bi, bj] = 0.5 * (forward + backward) * volume

        if grid.periodic:
            block += self._image_weights(xb, y, chebyshev)

        if not with_moments:
            return block

        # second-moment defect of the quadrature against the exact integral of z_d^2 J
        defects = np.zeros((len(rows), dim))
        p = dim + kernel.sigma
        z_far = y[far] - xb[far]
        r2_far = np.sum(z_far ** 2, axis=-1)
        self_moment = (kernel.mu * kernel.local_coefficient(x) *
                       _self_cell_moment(dim, kernel.sigma) * h ** (2.0 - kernel.sigma))
        for d in range(dim):
            exact_near = self._cell_average(xs, ys, moment_axis=d) * volume
            near_defect = exact_near - block[bi, bj] * (ys[:, d] - xs[:, d]) ** 2
            # midpoint rule error of z_d^2 J on far cells: h^{N+2}/24 Laplacian
            shape = 2.0 + p * (p - 2.0 - dim) * z_far[:, d] ** 2 / r2_far
            far_defect = far_values * shape * h ** (dim + 2) / 24.0
            defects[:, d] = self_moment
            np.add.at(defects[:, d], bi, near_defect)
            np.add.at(defects[:, d], np.nonzero(far)[0], far_defect)
        return block, defects

    def _image_weights(self, xb, y, chebyshev):
        grid = self._grid
        kernel = self._kernel
        period = 2.0 * grid.half_width
        volume = grid.cell_volume
        extra = np.zeros(chebyshev.shape)
        pairs = chebyshev > 0
        xp = xb[pairs]
        yp = y[pairs]
        if grid.dim == 1:
            images = [np.array([q]) for q in range(-PERIODIC_IMAGES_1D, PERIODIC_IMAGES_1D + 1)
                      if q != 0]
        else:
            span = range(-PERIODIC_IMAGES_2D, PERIODIC_IMAGES_2D + 1)
            images = [np.array([a, b]) for a in span for b in span if (a, b) != (0, 0)]
        total = np.zeros(xp.shape[0])
        for q in images:
            total += kernel.evaluate(xp, yp + period * q)
        if grid.dim == 1:
            s = 1.0 + kernel.sigma
            u = (yp[:, 0] - xp[:, 0]) / period
            tail = zeta(s, u + PERIODIC_IMAGES_1D + 1) + zeta(s, PERIODIC_IMAGES_1D + 1 - u)
            total += kernel.mu * kernel.tail_ratio * period ** (-s) * tail
        extra[pairs] = total * volume
        return extra

    def _stencil_neighbours(self):
        """
        :return: list over axes of (neighbour index for +1, inside mask)
        """
        n = self._grid.points_per_axis
        result = []
        for d in range(self._grid.dim):
            step = self._index[:, d] + 1
            inside = step < n
            if self._grid.periodic:
                inside = np.ones_like(inside)
            neighbour = np.arange(self._grid.cell_count) + self._strides[d]
            if self._grid.periodic:
                neighbour = neighbour - np.where(step >= n, n * self._strides[d], 0)
            result.append((np.where(inside, neighbour, -1), inside))
        return result

    def _assemble(self):
        grid = self._grid
        logger.info("assembling %s operator on %r (%s)", self._kernel.KIND, grid,
                    "dense" if self._dense else "matrix-free")
        outputs = self._map_blocks(lambda rows: self._row_block(rows, with_moments=True))
        defects = np.concatenate([out[1] for out in outputs])
        coefficient = defects / (2.0 * grid.spacing ** 2)

        # symmetric edge weights of the second-difference stencil, +e_d direction
        stencil = []
        leak = np.zeros(grid.cell_count)
        for d, (neighbour, inside) in enumerate(self._stencil_neighbours()):
            edge = np.zeros(grid.cell_count)
            edge[inside] = 0.5 * (coefficient[inside, d] + coefficient[neighbour[inside], d])
            stencil.append((neighbour, inside, edge))
            if not grid.periodic:
                # the missing -e_d and +e_d neighbours of boundary cells
                leak += np.where(inside, 0.0, coefficient[:, d])
                first = self._index[:, d] == 0
                leak += np.where(first, coefficient[:, d], 0.0)

        if self._dense:
            weights = np.concatenate([out[0] for out in outputs])
            for neighbour, inside, edge in stencil:
                rows = np.nonzero(inside)[0]
                weights[rows, neighbour[rows]] += edge[rows]
                weights[neighbour[rows], rows] += edge[rows]
            weights = 0.5 * (weights + weights.T)
            np.fill_diagonal(weights, 0.0)
            negative = weights < 0
            if np.any(negative):
                logger.warning("clipping %d negative stencil weights", int(np.sum(negative)))
                weights[negative] = 0.0
            self._weights = weights
            self._rowsum = weights.sum(axis=1)
        else:
            rowsum = np.concatenate([out[0].sum(axis=1) for out in outputs])
            for neighbour, inside, edge in stencil:
                rows = np.nonzero(inside)[0]
                rowsum[rows] += edge[rows]
                np.add.at(rowsum, neighbour[rows], edge[rows])
            self._rowsum = rowsum
        self._stencil = stencil

        if not grid.periodic:
            leak = leak + exterior_integral(grid, self._kernel)
            self._leak = leak
        else:
            self._leak = np.zeros(grid.cell_count)
        self._rowsum.flags.writeable = False
        self._leak.flags.writeable = False

    # application

    def _values(self, field):
        if isinstance(field, Field):
            self._grid.check_same(field.grid)
            return field.values
        values = np.asarray(field, dtype=float)
        if values.shape != (self._grid.cell_count,):
            raise NlfdValidationException("expected %d values, got shape %s" %
                                          (self._grid.cell_count, values.shape))
        return values

    def _stencil_matvec(self, values):
        out = np.zeros(np.shape(values), dtype=float)
        for neighbour, inside, edge in self._stencil:
            rows = np.nonzero(inside)[0]
            out[rows] += edge[rows] * values[neighbour[rows]]
            np.add.at(out, neighbour[rows], edge[rows] * values[rows])
        return out

    def weight_matvec(self, values):
        """ W f as a raw array """
        if self._dense:
            return self._weights.dot(values)
        parts = self._map_blocks(lambda rows: self._row_block(rows).dot(values))
        return np.concatenate(parts) + self._stencil_matvec(values)

    def apply_values(self, values):
        values = self._values(values)
        return self.diagonal * values - self.weight_matvec(values)

    def apply(self, field):
        """
        :return: Field, L f
        """
        self._grid.check_same(field.grid)
        return Field(self._grid, self.apply_values(field.values))

    def inner(self, f, g):
        """ h^N sum f g """
        return float(self._grid.cell_volume * np.dot(self._values(f), self._values(g)))

    def energy(self, f, g):
        """
        h^N [ 1/2 sum_ij w_ij (f_i - f_j)(g_i - g_j) + sum_i kappa_i f_i g_i ],
        summed pair by pair
        """
        f = self._values(f)
        g = self._values(g)

        def block_energy(rows):
            if self._dense:
                block = self._weights[rows]
            else:
                block = self._row_block(rows)
            df = f[rows, np.newaxis] - f[np.newaxis, :]
            dg = g[rows, np.newaxis] - g[np.newaxis, :]
            return np.sum(block * df * dg)

        pairwise = sum(self._map_blocks(block_energy))
        if not self._dense:
            for neighbour, inside, edge in self._stencil:
                rows = np.nonzero(inside)[0]
                pairwise += 2.0 * np.sum(edge[rows] * (f[rows] - f[neighbour[rows]]) *
                                         (g[rows] - g[neighbour[rows]]))
        total = 0.5 * pairwise + np.sum(self._leak * f * g)
        return float(self._grid.cell_volume * total)

    def solve(self, diagonal, rhs, dt):
        """
        solve (diag(diagonal) + dt L) x = rhs

        Dense operators go through a Cholesky-backed solve, matrix-free ones
        through Jacobi-preconditioned conjugate gradients.
        """
        diagonal = np.asarray(diagonal, dtype=float)
        rhs = np.asarray(rhs, dtype=float)
        main = diagonal + dt * self.diagonal
        if self._dense:
            system = -dt * self._weights
            system[np.diag_indices_from(system)] = main
            return scipy.linalg.solve(system, rhs, assume_a='pos', check_finite=False)

        count = self._grid.cell_count
        system = scipy.sparse.linalg.LinearOperator(
            (count, count), dtype=float,
            matvec=lambda v: main * v - dt * self.weight_matvec(v))
        preconditioner = scipy.sparse.linalg.LinearOperator(
            (count, count), dtype=float, matvec=lambda v: v / main)
        solution, info = scipy.sparse.linalg.cg(system, rhs, rtol=CG_RELATIVE_TOLERANCE,
                                                 M=preconditioner, maxiter=10 * count)
        if info != 0:
            raise NlfdException("conjugate gradients did not converge (info=%d)" % info)
        return solution

    def export_csv(self, path):
        """ per cell: coordinates, row sum, kappa, diagonal """
        grid = self._grid
        columns = ["x%d" % d for d in range(grid.dim)] + ["rowsum", "leak", "diagonal"]
        data = np.column_stack([grid.coordinates(), self._rowsum, self._leak, self.diagonal])
        np.savetxt(path, data, delimiter=",", header=",".join(columns), comments="",
                   fmt="%.17g")

    def __repr__(self):
        return "DiscreteOperator(%r, %r, dense=%s)" % (self._grid, self._kernel, self._dense)


def assemble_quadrature(grid, kernel, threads=1, validate=True, seed=DEFAULT_SEED):
    """
    :param validate: sample the kernel hypotheses first and refuse kernels that
                     do not qualify for their sigma
    :return: DiscreteOperator
    """
    if validate:
        check_admissible(kernel, validate_hj(kernel, seed=seed))
    return DiscreteOperator(grid, kernel, threads=threads)


def apply(op, field):
    return op.apply(field)


def energy(op, f, g):
    return op.energy(f, g)


def wave_numbers(grid):
    """
    :return: |xi| on the rfftn layout of the grid
    """
    n = grid.points_per_axis
    h = grid.spacing
    axes = [2.0 * np.pi * spfft.fftfreq(n, d=h) for _ in range(grid.dim - 1)]
    axes.append(2.0 * np.pi * spfft.rfftfreq(n, d=h))
    mesh = np.meshgrid(*axes, indexing='ij')
    return np.sqrt(sum(k ** 2 for k in mesh))


def apply_spectral(grid, field, sigma):
    """
    Fourier multiplier |xi|^sigma on a periodic grid
    """
    if not grid.periodic:
        raise NlfdValidationException("spectral application needs a periodic grid")
    values = field.values if isinstance(field, Field) else np.asarray(field, dtype=float)
    if isinstance(field, Field):
        grid.check_same(field.grid)
    shaped = values.reshape(grid.shape)
    transformed = spfft.rfftn(shaped)
    multiplier = wave_numbers(grid) ** sigma
    result = spfft.irfftn(transformed * multiplier, s=grid.shape)
    return Field(grid, result.ravel())


def apply_spectral_padded(grid, field, sigma, padding=4):
    """
    apply the spectral multiplier on a periodic box `padding` times wider,
    with the field extended by zero, and restrict back to the grid
    """
    if padding < 1 or int(padding) != padding:
        raise NlfdValidationException("padding must be a positive integer")
    n = grid.points_per_axis
    big = make_grid(grid.dim, grid.half_width * padding, n * padding,
                    boundary_mode=BOUNDARY_PERIODIC)
    start = (n * padding - n) // 2
    window = tuple(slice(start, start + n) for _ in range(grid.dim))
    extended = np.zeros(big.shape)
    extended[window] = np.asarray(
        field.values if isinstance(field, Field) else field, dtype=float).reshape(grid.shape)
    result = apply_spectral(big, Field(big, extended.ravel()), sigma)
    return Field(grid, result.reshaped()[window].ravel())


def _norm(values, q, volume):
    if np.isinf(q):
        return float(np.max(np.abs(values)))
    return float((volume * np.sum(np.abs(values) ** q)) ** (1.0 / q))


def cutoff_scaling_check(kernel, q, radii=(4.0, 8.0, 16.0, 32.0), box_factor=16.0,
                         points_per_axis=512, threads=1):
    """
    ||L phi_R||_q for phi_R(x) = psi(|x| / R) on a self-similar grid family
    (half-width box_factor * R, fixed points per axis)

    :return: dict with rows [(R, norm)], fitted log-log slope and the
             expected slope -sigma + N/q
    """
    rows = []
    for radius in radii:
        grid = make_grid(kernel.dim, box_factor * radius, points_per_axis)
        op = DiscreteOperator(grid, kernel, threads=threads)
        cutoff = smooth_cutoff(grid.radii() / radius)
        rows.append((float(radius), _norm(op.apply_values(cutoff), q, grid.cell_volume)))
    log_r = np.log([r for r, _ in rows])
    log_norm = np.log([value for _, value in rows])
    slope = float(np.polyfit(log_r, log_norm, 1)[0])
    expected = -kernel.sigma + (0.0 if np.isinf(q) else kernel.dim / float(q))
    logger.info("cutoff scaling q=%s: slope %.4f, expected %.4f", q, slope, expected)
    return {"rows": rows, "slope": slope, "expected": expected, "q": q}
