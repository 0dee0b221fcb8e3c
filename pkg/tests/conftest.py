"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import absolute_import, unicode_literals, print_function

import logging

import numpy as np
import pytest

from nlfd.grid import Field, make_grid
from nlfd.kernel import FractionalPowerKernel
from nlfd.nonlinearity import PurePower
from nlfd.operator import DiscreteOperator
from nlfd.solver import SolverConfig
from tests.constants import SMALL_SCENARIO


logger = logging.getLogger("nlfd.tests")


@pytest.fixture
def grid_1d():
    return make_grid(1, 10.0, 64)


@pytest.fixture
def grid_2d():
    return make_grid(2, 4.0, 16)


@pytest.fixture
def kernel_1d():
    return FractionalPowerKernel(1, 1.0)


@pytest.fixture
def phi():
    return PurePower(0.75)


@pytest.fixture
def op_1d(grid_1d, kernel_1d):
    return DiscreteOperator(grid_1d, kernel_1d)


@pytest.fixture
def bump_1d(grid_1d):
    return Field.from_function(grid_1d, lambda x: (np.abs(x[:, 0]) < 1.0).astype(float))


@pytest.fixture
def gaussian_1d(grid_1d):
    return Field.from_function(grid_1d, lambda x: np.exp(-x[:, 0] ** 2))


@pytest.fixture
def short_config():
    return SolverConfig(t_end=0.2, dt_initial=1e-3, snapshot_times=[0.05, 0.1, 0.2])


@pytest.fixture
def scenario_file(tmpdir):
    path = tmpdir.join("scenario.yaml")
    path.write(SMALL_SCENARIO)
    return str(path)
