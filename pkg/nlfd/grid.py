"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.


Uniform cell-centered lattices on [-L, L]^N and sampled scalar fields.
"""
from __future__ import print_function, absolute_import, unicode_literals, division

import io
import logging

import numpy as np

from nlfd.constants import (BOUNDARY_MODES, BOUNDARY_EXTERIOR_ZERO, BOUNDARY_PERIODIC,
                            SUPPORTED_DIMENSIONS, MIN_POINTS_PER_AXIS)
from nlfd.exceptions import (NlfdValidationException, GridMismatchException,
                             DegenerateBallException)


logger = logging.getLogger(__name__)

BINARY_HEADER_INTS = np.dtype('<i8')
BINARY_HEADER_FLOATS = np.dtype('<f8')
BINARY_HEADER_SIZE = 2 * 8 + 2 * 8


class Grid(object):
    """
    Cell-centered lattice of n^N cells over the box [-L, L]^N.

    Cells are flattened row-major, the first axis varying slowest. The spacing
    is always derived from L and n, never stored independently.
    """

    def __init__(self, dim, half_width, points_per_axis, boundary_mode=BOUNDARY_EXTERIOR_ZERO):
        errors = []
        if dim not in SUPPORTED_DIMENSIONS:
            errors.append("dim must be one of %s, got %r" % (SUPPORTED_DIMENSIONS, dim))
        if not half_width > 0:
            errors.append("half_width must be positive, got %r" % (half_width,))
        if int(points_per_axis) != points_per_axis or points_per_axis % 2:
            errors.append("points_per_axis must be an even integer, got %r" % (points_per_axis,))
        elif points_per_axis < MIN_POINTS_PER_AXIS:
            errors.append("points_per_axis must be at least %d, got %r" %
                          (MIN_POINTS_PER_AXIS, points_per_axis))
        if boundary_mode not in BOUNDARY_MODES:
            errors.append("boundary_mode must be one of %s, got %r" %
                          (BOUNDARY_MODES, boundary_mode))
        if errors:
            raise NlfdValidationException("; ".join(errors))

        self._dim = int(dim)
        self._half_width = float(half_width)
        self._n = int(points_per_axis)
        self._boundary_mode = boundary_mode
        self._coordinates = None

    @property
    def dim(self):
        return self._dim

    @property
    def half_width(self):
        return self._half_width

    @property
    def points_per_axis(self):
        return self._n

    @property
    def boundary_mode(self):
        return self._boundary_mode

    @property
    def periodic(self):
        return self._boundary_mode == BOUNDARY_PERIODIC

    @property
    def spacing(self):
        return 2.0 * self._half_width / self._n

    @property
    def cell_volume(self):
        return self.spacing ** self._dim

    @property
    def cell_count(self):
        return self._n ** self._dim

    @property
    def shape(self):
        return (self._n,) * self._dim

    def axis_coordinates(self):
        """
        cell centers along one axis, x_i = -L + (i + 1/2) h

        :return: ndarray, shape (n,)
        """
        return -self._half_width + (np.arange(self._n) + 0.5) * self.spacing

    def coordinates(self):
        """
        cell centers of every cell, in flattening order

        :return: read-only ndarray, shape (n^N, N)
        """
        if self._coordinates is None:
            axes = [self.axis_coordinates()] * self._dim
            mesh = np.meshgrid(*axes, indexing='ij')
            coords = np.stack([m.ravel() for m in mesh], axis=-1)
            coords.flags.writeable = False
            self._coordinates = coords
        return self._coordinates

    def radii(self, center=None):
        coords = self.coordinates()
        if center is not None:
            coords = coords - np.asarray(center, dtype=float).reshape(1, -1)
        return np.sqrt(np.sum(coords ** 2, axis=-1))

    def same_as(self, other):
        return (isinstance(other, Grid) and
                self._dim == other.dim and
                self._n == other.points_per_axis and
                self._half_width == other.half_width and
                self._boundary_mode == other.boundary_mode)

    def check_same(self, other):
        if not self.same_as(other):
            raise GridMismatchException("grid mismatch: %r vs %r" % (self, other))

    def to_dict(self):
        return {
            "dim": self._dim,
            "half_width": self._half_width,
            "points_per_axis": self._n,
            "boundary_mode": self._boundary_mode,
        }

    def __eq__(self, other):
        return self.same_as(other)

    def __ne__(self, other):
        return not self.same_as(other)

    def __hash__(self):
        return hash((self._dim, self._half_width, self._n, self._boundary_mode))

    def __repr__(self):
        return ("Grid(dim={self.dim}, half_width={self.half_width!r}, "
                "points_per_axis={self.points_per_axis}, "
                "boundary_mode={self.boundary_mode!r})".format(self=self))


class Field(object):
    """ one finite value per cell of a grid; read-only once built """

    def __init__(self, grid, values):
        values = np.array(values, dtype=float).ravel()
        if values.shape != (grid.cell_count,):
            raise NlfdValidationException("field needs %d values, got %d" %
                                          (grid.cell_count, values.size))
        if not np.all(np.isfinite(values)):
            raise NlfdValidationException("field values must be finite")
        values.flags.writeable = False
        self._grid = grid
        self._values = values

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.cell_count))

    @classmethod
    def from_function(cls, grid, fn):
        """
        :param fn: callable taking an (n^N, N) array of cell centers
        """
        return cls(grid, fn(grid.coordinates()))

    @property
    def grid(self):
        return self._grid

    @property
    def values(self):
        return self._values

    def reshaped(self):
        return self._values.reshape(self._grid.shape)

    def with_values(self, values):
        return Field(self._grid, values)

    def scaled(self, factor):
        return Field(self._grid, factor * self._values)

    def norm_inf(self):
        return float(np.max(np.abs(self._values))) if self._values.size else 0.0

    def norm(self, p):
        if np.isinf(p):
            return self.norm_inf()
        return float((self._grid.cell_volume * np.sum(np.abs(self._values) ** p)) ** (1.0 / p))

    def __repr__(self):
        return "Field(%r, max=%.6g)" % (self._grid, self.norm_inf())


def make_grid(dim, half_width, points_per_axis, boundary_mode=BOUNDARY_EXTERIOR_ZERO):
    return Grid(dim, half_width, points_per_axis, boundary_mode)


def integrate(field):
    """ midpoint rule, h^N times the sum of the values """
    return float(field.grid.cell_volume * np.sum(field.values))


def ball_restriction(field, center, radius):
    """
    indices of the cells whose centers lie in the open ball B_radius(center)

    :param field: Field or Grid
    :param center: sequence of N floats (a float is accepted for N = 1)
    :param radius: float
    :return: sorted ndarray of int
    """
    grid = field.grid if isinstance(field, Field) else field
    if not radius > 0:
        raise NlfdValidationException("ball radius must be positive, got %r" % (radius,))
    if radius < grid.spacing / 2.0:
        raise DegenerateBallException("ball of radius %g is below half a cell (h = %g)" %
                                      (radius, grid.spacing))
    center = np.atleast_1d(np.asarray(center, dtype=float))
    indices = np.flatnonzero(grid.radii(center) < radius)
    if indices.size == 0:
        raise DegenerateBallException("no cell center within %g of %s" % (radius, center))
    return indices


def write_csv(field, path_or_buf, time=None):
    """ one row per cell: coordinates then value """
    grid = field.grid
    columns = ["x%d" % axis for axis in range(grid.dim)] + ["value"]
    header = ",".join(columns)
    if time is not None:
        header = "time=%r\n%s" % (float(time), header)
    data = np.column_stack([grid.coordinates(), field.values])
    np.savetxt(path_or_buf, data, delimiter=",", header=header, comments="# ", fmt="%.17g")


def read_csv(path, grid):
    data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    if data.shape[1] != grid.dim + 1:
        raise GridMismatchException("CSV has %d columns, grid needs %d" %
                                    (data.shape[1], grid.dim + 1))
    if not np.allclose(data[:, :grid.dim], grid.coordinates(), rtol=0, atol=grid.spacing * 1e-6):
        raise GridMismatchException("CSV coordinates do not match %r" % (grid,))
    return Field(grid, data[:, -1])


def write_binary(field, path_or_buf, time=0.0):
    """
    header: dim, n (int64), L, time (float64); payload: float64, row-major
    """
    grid = field.grid
    payload = (np.array([grid.dim, grid.points_per_axis], dtype=BINARY_HEADER_INTS).tobytes() +
               np.array([grid.half_width, time], dtype=BINARY_HEADER_FLOATS).tobytes() +
               field.values.astype(BINARY_HEADER_FLOATS).tobytes())
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(payload)
    else:
        with open(path_or_buf, "wb") as f:
            f.write(payload)


def read_binary(path_or_buf, boundary_mode=BOUNDARY_EXTERIOR_ZERO):
    """
    :return: (Field, float time)
    """
    if hasattr(path_or_buf, "read"):
        raw = path_or_buf.read()
    else:
        with open(path_or_buf, "rb") as f:
            raw = f.read()
    if len(raw) < BINARY_HEADER_SIZE:
        raise NlfdValidationException("binary field truncated: %d bytes" % len(raw))
    dim, n = np.frombuffer(raw[:16], dtype=BINARY_HEADER_INTS)
    half_width, time = np.frombuffer(raw[16:32], dtype=BINARY_HEADER_FLOATS)
    grid = Grid(int(dim), float(half_width), int(n), boundary_mode)
    values = np.frombuffer(raw[32:], dtype=BINARY_HEADER_FLOATS)
    return Field(grid, values), float(time)


def field_to_csv_string(field, time=None):
    buf = io.StringIO()
    write_csv(field, buf, time=time)
    return buf.getvalue()
