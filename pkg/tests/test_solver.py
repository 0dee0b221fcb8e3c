"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import absolute_import, unicode_literals

import numpy as np
import pytest
from flexmock import flexmock

import nlfd.solver
from nlfd.constants import EVENT_DT_FLOOR, EVENT_EXTINCTION, EVENT_NEWTON_FAILURE
from nlfd.exceptions import GridMismatchException, NewtonFailure, NlfdValidationException
from nlfd.grid import Field, integrate, make_grid
from nlfd.kernel import FractionalPowerKernel
from nlfd.nonlinearity import PerturbedPower, PurePower
from nlfd.operator import DiscreteOperator
from nlfd.solver import SolverConfig, Trajectory, run, solve_step, step


class TestSolverConfig(object):
    def test_defaults(self):
        config = SolverConfig(t_end=2.0)
        assert config.dt_max == 2.0
        assert config.snapshot_times == [2.0]

    def test_zero_snapshot_dropped(self):
        config = SolverConfig(t_end=1.0, snapshot_times=[0.5, 0.0, 1.0])
        assert config.snapshot_times == [0.5, 1.0]

    @pytest.mark.parametrize('kwargs', [
        {"t_end": 0.0},
        {"t_end": 1.0, "dt_initial": 2.0},
        {"t_end": 1.0, "dt_min": 0.1, "dt_initial": 0.01},
        {"t_end": 1.0, "snapshot_times": [1.5]},
        {"t_end": 1.0, "newton_tol": 0.0},
        {"t_end": 1.0, "newton_max_iter": 0},
        {"t_end": 1.0, "extinction_floor": 0.0},
        {"t_end": 1.0, "snapshot_mode": "nearest"},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(NlfdValidationException):
            SolverConfig(**kwargs)


class TestTrajectory(object):
    def test_from_fields(self, bump_1d):
        trajectory = Trajectory.from_fields([0.0, 1.0], [bump_1d, bump_1d.scaled(0.5)])
        assert trajectory.times == [0.0, 1.0]
        assert len(trajectory) == 2
        assert trajectory.masses()[1] == pytest.approx(0.5 * integrate(bump_1d))
        assert trajectory.field_at(1.0).norm_inf() == 0.5

    def test_missing_time(self, bump_1d):
        trajectory = Trajectory.from_fields([0.0], [bump_1d])
        with pytest.raises(NlfdValidationException):
            trajectory.field_at(0.5)

    def test_times_increase(self, bump_1d):
        trajectory = Trajectory.from_fields([1.0], [bump_1d])
        with pytest.raises(NlfdValidationException):
            trajectory.add_snapshot(1.0, bump_1d)

    def test_grid_checked(self, bump_1d):
        trajectory = Trajectory.from_fields([0.0], [bump_1d])
        with pytest.raises(GridMismatchException):
            trajectory.add_snapshot(1.0, Field.zeros(make_grid(1, 10.0, 32)))

    def test_empty(self):
        with pytest.raises(NlfdValidationException):
            Trajectory.from_fields([], [])


class TestStep(object):
    def test_zero_stays_zero(self, op_1d, phi):
        u, w, iterations = solve_step(op_1d, phi, np.zeros(64), 0.1)
        assert iterations == 0
        assert not np.any(u)

    def test_mass_balance(self, op_1d, phi, bump_1d):
        u_next, w_next, _ = solve_step(op_1d, phi, bump_1d.values, 0.01)
        h = op_1d.grid.cell_volume
        flux = 0.01 * h * np.dot(op_1d.leak, w_next)
        assert h * np.sum(u_next) + flux == pytest.approx(integrate(bump_1d), rel=1e-9)
        np.testing.assert_allclose(w_next, phi.phi(u_next), rtol=1e-8, atol=1e-12)

    def test_ordered(self, op_1d, phi, bump_1d):
        lower = step(op_1d, phi, bump_1d.scaled(0.5), 0.05)
        upper = step(op_1d, phi, bump_1d, 0.05)
        assert np.all(upper.values - lower.values >= -1e-10)
        assert np.min(lower.values) >= 0

    def test_negative_data(self, op_1d, phi, bump_1d):
        with pytest.raises(NlfdValidationException):
            step(op_1d, phi, bump_1d.scaled(-1.0), 0.05)

    def test_matrix_free_2d(self, grid_2d, phi):
        kernel = FractionalPowerKernel(2, 1.0)
        dense = DiscreteOperator(grid_2d, kernel)
        matrix_free = DiscreteOperator(grid_2d, kernel, dense_limit=0)
        bump = Field.from_function(grid_2d,
                                   lambda x: (np.sum(x ** 2, axis=-1) < 1.0).astype(float))
        expected = step(dense, phi, bump, 0.01)
        result = step(matrix_free, phi, bump, 0.01)
        np.testing.assert_allclose(result.values, expected.values, rtol=1e-6, atol=1e-9)

    def test_newton_budget(self, op_1d, phi, bump_1d):
        with pytest.raises(NewtonFailure):
            solve_step(op_1d, phi, bump_1d.values, 1.0, tol=1e-300, max_iter=1)


class TestRun(object):
    @pytest.mark.parametrize('nonlinearity', [PurePower(0.75), PerturbedPower(0.6, epsilon=0.3)])
    def test_mass_and_leak(self, grid_1d, kernel_1d, bump_1d, short_config, nonlinearity):
        trajectory = run(grid_1d, kernel_1d, nonlinearity, bump_1d, short_config)
        assert trajectory.times == [0.0, 0.05, 0.1, 0.2]
        initial = integrate(bump_1d)
        for mass, leaked in zip(trajectory.masses(), trajectory.leaked):
            assert mass + leaked == pytest.approx(initial, rel=1e-8)
        assert trajectory.leaked[-1] > 0
        assert all(np.min(f.values) >= 0 for f in trajectory.fields)
        assert trajectory.statistics["accepted_steps"] > 0
        assert not trajectory.partial

    def test_maximum_decreases(self, grid_1d, kernel_1d, phi, bump_1d, short_config):
        trajectory = run(grid_1d, kernel_1d, phi, bump_1d, short_config)
        maxima = [f.norm_inf() for f in trajectory.fields]
        assert all(b <= a + 1e-12 for a, b in zip(maxima, maxima[1:]))

    def test_hit_mode(self, grid_1d, kernel_1d, phi, bump_1d):
        config = SolverConfig(t_end=0.2, dt_initial=0.03, snapshot_times=[0.05, 0.2],
                              snapshot_mode="hit")
        trajectory = run(grid_1d, kernel_1d, phi, bump_1d, config)
        assert trajectory.times == [0.0, 0.05, 0.2]

    def test_extinct_datum(self, grid_1d, kernel_1d, phi, bump_1d):
        config = SolverConfig(t_end=0.2, snapshot_times=[0.1, 0.2], extinction_floor=2.0)
        trajectory = run(grid_1d, kernel_1d, phi, bump_1d, config)
        assert trajectory.extinction_time == 0.0
        assert trajectory.times == [0.0, 0.1, 0.2]
        assert trajectory.fields[-1].norm_inf() == 0.0

    def test_dt_floor(self, grid_1d, kernel_1d, phi, bump_1d):
        (flexmock(nlfd.solver)
            .should_receive('solve_step')
            .and_raise(NewtonFailure(5, 1.0)))
        config = SolverConfig(t_end=0.2, dt_initial=1e-3, dt_min=1e-4)
        trajectory = run(grid_1d, kernel_1d, phi, bump_1d, config)
        assert trajectory.partial
        assert EVENT_DT_FLOOR in [name for _, name in trajectory.events]
        assert EVENT_NEWTON_FAILURE in [name for _, name in trajectory.events]
        assert EVENT_EXTINCTION not in [name for _, name in trajectory.events]
        assert trajectory.times == [0.0]

    def test_negative_datum(self, grid_1d, kernel_1d, phi, bump_1d):
        with pytest.raises(NlfdValidationException):
            run(grid_1d, kernel_1d, phi, bump_1d.scaled(-1.0), SolverConfig(t_end=0.1))

    def test_manifest(self, grid_1d, kernel_1d, phi, bump_1d, short_config):
        trajectory = run(grid_1d, kernel_1d, phi, bump_1d, short_config,
                         metadata={"scenario": "unit"})
        manifest = trajectory.to_manifest()
        assert manifest["metadata"]["scenario"] == "unit"
        assert manifest["metadata"]["kernel"]["family"] == "fractional_power"
        assert manifest["times"] == trajectory.times
        assert len(manifest["mass"]) == 4
