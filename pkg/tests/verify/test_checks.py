"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import absolute_import, unicode_literals, division

import numpy as np
import pytest

from nlfd.barenblatt import BarenblattProfile, SelfSimilarParams, similarity_exponent
from nlfd.constants import CHECK_NOT_APPLICABLE
from nlfd.exceptions import InsufficientDataException, NlfdValidationException
from nlfd.grid import Field, integrate
from nlfd.solver import Trajectory
from nlfd.verify import checks


def with_mass(field, mass):
    return field.scaled(mass / integrate(field))


def scaled_series(field, times, scale):
    return Trajectory.from_fields(times, [field.scaled(scale(t)) for t in times])


class TestMassConservation(object):
    def test_constant_mass(self, gaussian_1d):
        trajectory = scaled_series(gaussian_1d, [0.0, 0.5, 1.0], lambda t: 1.0)
        record = checks.check_mass_conservation(trajectory)
        assert record.passed
        assert record.measured["relative_drift"] == 0.0
        assert len(record.curves["mass"][1]) == 3

    def test_leaked_mass_is_accounted(self, gaussian_1d):
        fields = [with_mass(gaussian_1d, 1.0), with_mass(gaussian_1d, 0.995)]
        trajectory = Trajectory.from_fields([0.0, 1.0], fields, leaked=[0.0, 0.005])
        record = checks.check_mass_conservation(trajectory)
        assert record.passed
        assert record.measured["relative_drift"] < 1e-12
        assert record.measured["leaked_fraction"] == pytest.approx(0.005)

    @pytest.mark.parametrize(('final_mass', 'leaked'), [
        (0.9, 0.0),
        (0.95, 0.05),
    ])
    def test_failure(self, gaussian_1d, final_mass, leaked):
        fields = [with_mass(gaussian_1d, 1.0), with_mass(gaussian_1d, final_mass)]
        trajectory = Trajectory.from_fields([0.0, 1.0], fields, leaked=[0.0, leaked])
        assert checks.check_mass_conservation(trajectory).failed

    def test_partial_run_fails(self, gaussian_1d):
        trajectory = scaled_series(gaussian_1d, [0.0, 1.0], lambda t: 1.0)
        trajectory.partial = True
        record = checks.check_mass_conservation(trajectory)
        assert record.failed
        assert record.measured["partial"] is True

    def test_unbounded_leak_reports_fraction(self, gaussian_1d):
        fields = [with_mass(gaussian_1d, 1.0), with_mass(gaussian_1d, 0.6)]
        trajectory = Trajectory.from_fields([0.0, 1.0], fields, leaked=[0.0, 0.4])
        assert checks.check_mass_conservation(trajectory).failed
        record = checks.check_mass_conservation(trajectory, leak_tolerance=None)
        assert record.passed
        assert record.measured["leaked_fraction"] == pytest.approx(0.4)
        assert record.tolerance["leaked_fraction"] is None


class TestSmoothing(object):
    alpha = similarity_exponent(1, 0.75, 1.0)
    times = [0.0, 0.01, 0.1, 1.0, 2.0, 5.0, 10.0]

    def test_exact_rate(self, gaussian_1d):
        trajectory = scaled_series(gaussian_1d, self.times,
                                   lambda t: t ** -self.alpha if t > 0 else 1.0)
        record = checks.check_smoothing(trajectory, 0.75, 1.0, 1)
        assert record.passed
        assert record.measured["fitted_alpha"] == pytest.approx(self.alpha, rel=1e-10)
        assert np.isfinite(record.measured["max_scaled_sup"])
        assert record.measured["bounded"] is True

    def test_wrong_rate(self, gaussian_1d):
        trajectory = scaled_series(gaussian_1d, self.times,
                                   lambda t: 1.0 / t if t > 0 else 1.0)
        record = checks.check_smoothing(trajectory, 0.75, 1.0, 1)
        assert record.failed
        assert record.measured["fitted_alpha"] == pytest.approx(1.0, rel=1e-10)

    def test_early_bump_above_envelope(self, gaussian_1d):
        # the final decade alone sees the exact rate
        def scale(t):
            if t == 0:
                return 1.0
            return 10.0 * t ** -self.alpha if t == 0.1 else t ** -self.alpha
        record = checks.check_smoothing(scaled_series(gaussian_1d, self.times, scale),
                                        0.75, 1.0, 1)
        assert record.failed
        assert record.measured["fitted_alpha"] == pytest.approx(self.alpha, rel=1e-10)
        assert record.measured["bounded"] is False
        assert record.measured["max_scaled_sup"] == pytest.approx(
            10.0 * record.measured["fitted_envelope"], rel=1e-10)

    def test_needs_two_decades(self, gaussian_1d):
        trajectory = scaled_series(gaussian_1d, [0.0, 0.1, 1.0], lambda t: 1.0)
        with pytest.raises(InsufficientDataException):
            checks.check_smoothing(trajectory, 0.75, 1.0, 1)

    def test_zero_solution(self, grid_1d):
        trajectory = Trajectory.from_fields([0.0, 1.0], [Field.zeros(grid_1d)] * 2)
        record = checks.check_smoothing(trajectory, 0.75, 1.0, 1)
        assert record.status == CHECK_NOT_APPLICABLE


class TestPositivityHarnack(object):
    @pytest.mark.parametrize(('dim', 'sigma', 'expected'), [
        (1, 1.0, np.inf),
        (1, 0.5, 2.0),
        (2, 1.0, 2.0),
        (2, 1.5, 4.0),
    ])
    def test_admissible_p_range(self, dim, sigma, expected):
        low, high = checks.admissible_p_range(dim, sigma)
        assert low == 1.0
        assert high == pytest.approx(expected)

    @pytest.mark.parametrize('on_solution', [True, False])
    def test_positive_field(self, gaussian_1d, phi, on_solution):
        record = checks.check_positivity_harnack(gaussian_1d, phi, 1.0, 2.0, 0.0, 1.0,
                                                 sigma=1.0, on_solution=on_solution)
        assert record.passed
        assert record.measured["c_measured"] > 0
        varpi = phi.phi_prime(gaussian_1d.norm_inf())
        assert record.measured["eta"] == pytest.approx(1.0 / (phi.A * varpi))

    def test_hole_in_the_middle(self, bump_1d, phi):
        field = bump_1d.with_values(1.0 - bump_1d.values)
        record = checks.check_positivity_harnack(field, phi, 1.0, 2.0, 0.0, 1.0)
        assert record.failed
        assert record.measured["inner_min"] == 0.0

    def test_p_outside_range(self, gaussian_1d, phi):
        with pytest.raises(NlfdValidationException):
            checks.check_positivity_harnack(gaussian_1d, phi, 3.0, 2.0, 0.0, 1.0, sigma=0.5)

    def test_needs_positive_time(self, gaussian_1d, phi):
        with pytest.raises(NlfdValidationException):
            checks.check_positivity_harnack(gaussian_1d, phi, 1.0, 2.0, 0.0, 0.0)


class TestMonotonicity(object):
    times = [0.0, 0.5, 1.0, 2.0]

    def test_decaying_solution(self, gaussian_1d, phi):
        trajectory = scaled_series(gaussian_1d, self.times, lambda t: 1.0 / (1.0 + t))
        record = checks.check_monotonicity(trajectory, phi)
        assert record.passed
        assert record.measured["max_violation"] == 0.0
        assert len(record.curves["violation"][1]) == 2

    def test_growing_solution(self, gaussian_1d, phi):
        trajectory = scaled_series(gaussian_1d, self.times, lambda t: t ** 5)
        record = checks.check_monotonicity(trajectory, phi)
        assert record.failed
        assert record.measured["max_violation"] > 0.1

    def test_needs_three_snapshots(self, gaussian_1d, phi):
        trajectory = scaled_series(gaussian_1d, [0.0, 1.0, 2.0], lambda t: 1.0)
        with pytest.raises(InsufficientDataException):
            checks.check_monotonicity(trajectory, phi)


class TestTailControl(object):
    alpha = similarity_exponent(1, 0.75, 1.0)

    def series(self, bump, tail):
        far = (np.abs(bump.grid.coordinates()[:, 0]) > 8.0).astype(float)
        times = [0.0, 0.1, 1.0, 2.0]
        return Trajectory.from_fields(
            times, [bump.with_values(bump.values + tail(t) * far) for t in times])

    def test_compact_support_stays_inside(self, bump_1d):
        trajectory = self.series(bump_1d, lambda t: 0.0)
        record = checks.check_tail_control(trajectory, [1.0, 2.0, 3.0], self.alpha, 0.75)
        assert record.passed
        assert record.measured["minimal_C"] == 0.0
        assert record.measured["radius_slope"] is None

    def test_linear_tail_single_radius(self, bump_1d):
        trajectory = self.series(bump_1d, lambda t: 0.01 * t)
        record = checks.check_tail_control(trajectory, [2.0], self.alpha, 0.75)
        assert record.passed
        assert record.measured["fitted_C"] > 0
        assert record.measured["minimal_C"] == pytest.approx(record.measured["fitted_C"],
                                                             rel=1e-9)

    def test_flat_tail_fails_slope(self, bump_1d):
        trajectory = self.series(bump_1d, lambda t: 0.01 * t)
        record = checks.check_tail_control(trajectory, [1.0, 2.0, 3.0], self.alpha, 0.75)
        assert record.failed
        # the same tail mass against a shrinking R^{-N/alpha} needs a growing C
        assert record.measured["uniform"] is False
        assert record.measured["radius_slope"] == pytest.approx(0.0, abs=1e-10)

    def test_doubled_constant_fails(self, bump_1d):
        trajectory = self.series(bump_1d, lambda t: 0.01 * t if t <= 0.1 else 0.02 * t)
        record = checks.check_tail_control(trajectory, [2.0], self.alpha, 0.75)
        assert record.failed
        assert record.measured["uniform"] is False
        assert record.measured["minimal_C"] == pytest.approx(2.0 * record.measured["fitted_C"],
                                                             rel=1e-9)

    def test_constant_not_uniform(self, bump_1d):
        trajectory = self.series(bump_1d, lambda t: 0.01 * t ** 3)
        record = checks.check_tail_control(trajectory, [1.0, 2.0, 3.0], self.alpha, 0.75)
        assert record.failed
        assert record.measured["minimal_C"] > 4.0 * record.measured["fitted_C"]

    def test_no_mass(self, grid_1d):
        trajectory = Trajectory.from_fields([0.0, 1.0], [Field.zeros(grid_1d)] * 2)
        record = checks.check_tail_control(trajectory, [1.0], self.alpha, 0.75)
        assert record.status == CHECK_NOT_APPLICABLE


class TestExtinction(object):
    def test_supercritical_no_extinction(self, gaussian_1d):
        trajectory = scaled_series(gaussian_1d, [0.0, 1.0, 2.0], lambda t: 1.0 / (1.0 + t))
        record = checks.check_extinction(trajectory, 0.75, 1.0, 1)
        assert record.passed
        assert record.measured["anomaly"] is False
        assert record.measured["extinction_time"] is None

    def test_supercritical_extinction_is_anomaly(self, gaussian_1d):
        trajectory = scaled_series(gaussian_1d, [0.0, 1.0, 2.0], lambda t: 1.0 - t / 2.0)
        record = checks.check_extinction(trajectory, 0.75, 1.0, 1)
        assert record.failed
        assert record.measured["extinction_time"] == 2.0

    def test_supercritical_zero_datum(self, grid_1d):
        trajectory = Trajectory.from_fields([0.0, 1.0], [Field.zeros(grid_1d)] * 2)
        assert checks.check_extinction(trajectory, 0.75, 1.0, 1).passed

    @staticmethod
    def subcritical(grid, levels):
        # levels of J^{sigma/N}, p = 1.4 for m = 0.3, sigma = 1, N = 2
        bump = Field.from_function(grid, lambda x: np.exp(-np.sum(x ** 2, axis=-1)))
        times = [0.25 * i for i in range(len(levels))]
        return Trajectory.from_fields(times, [bump.scaled(level ** (2.0 / 1.4))
                                              for level in levels])

    def test_subcritical_linear_decay(self, grid_2d):
        trajectory = self.subcritical(grid_2d, [1.0, 0.75, 0.5, 0.25, 0.0])
        record = checks.check_extinction(trajectory, 0.3, 1.0, 2)
        assert record.passed
        assert record.measured["extinction_time"] == 1.0
        assert record.measured["p"] == pytest.approx(1.4)
        assert record.measured["mechanism_ok"] is True
        assert record.measured["min_rate"] == pytest.approx(record.measured["fitted_rate"],
                                                            rel=1e-6)

    def test_subcritical_stalling_decay(self, grid_2d):
        trajectory = self.subcritical(grid_2d, [1.0, 0.5, 0.49, 0.48, 0.0])
        record = checks.check_extinction(trajectory, 0.3, 1.0, 2)
        assert record.failed
        assert record.measured["mechanism_ok"] is False

    def test_subcritical_halved_rate(self, grid_2d):
        trajectory = self.subcritical(grid_2d, [1.0, 0.75, 0.625, 0.5, 0.375, 0.25, 0.125, 0.0])
        record = checks.check_extinction(trajectory, 0.3, 1.0, 2)
        assert record.failed
        assert record.measured["extinction_time"] == 1.75
        assert record.measured["mechanism_ok"] is False
        assert record.measured["min_rate"] == pytest.approx(0.5 * record.measured["fitted_rate"],
                                                            rel=1e-6)

    def test_subcritical_without_extinction(self, grid_2d):
        trajectory = self.subcritical(grid_2d, [1.0, 0.75, 0.5])
        record = checks.check_extinction(trajectory, 0.3, 1.0, 2)
        assert record.failed
        assert record.measured["extinction_time"] is None


class TestAsymptotics(object):
    @pytest.fixture
    def params(self):
        return SelfSimilarParams(1, 0.75, 1.0, 2.0)

    @pytest.fixture
    def profile(self, gaussian_1d, params):
        return BarenblattProfile(gaussian_1d.grid, with_mass(gaussian_1d, 2.0).values, params)

    def family(self, profile, errors):
        ladder = [4 ** i for i in range(len(errors))]
        return {k: profile.scaled(1.0 + error) for k, error in zip(ladder, errors)}

    def test_converging_family(self, profile, params):
        family = self.family(profile, [0.2, 0.1, 0.05, 0.01])
        record = checks.check_asymptotics(family, params, profile)
        assert record.passed
        assert record.measured["headline"] == pytest.approx(0.01, rel=1e-8)
        assert record.measured["radius"] == 2.5
        assert sorted(record.measured["L1_errors"]) == [1, 4, 16, 64]
        assert record.measured["profile_tail_slope"] < 0
        trace = [deviation for _, deviation in record.curves["initial_trace"][1]]
        assert len(trace) == 4
        assert trace[0] < trace[-1]

    @pytest.mark.parametrize('errors', [
        [0.2, 0.1, 0.08],
        [0.01, 0.02, 0.03, 0.04],
    ])
    def test_failing_family(self, profile, params, errors):
        record = checks.check_asymptotics(self.family(profile, errors), params, profile)
        assert record.failed

    def test_from_trajectory(self, profile, params):
        trajectory = Trajectory.from_fields([1.0], [profile])
        record = checks.check_asymptotics(trajectory, params, profile, ladder=(1,))
        assert record.passed
        assert record.measured["headline"] == 0.0

    def test_trajectory_missing_snapshot(self, profile, params):
        trajectory = Trajectory.from_fields([1.0], [profile])
        with pytest.raises(InsufficientDataException):
            checks.check_asymptotics(trajectory, params, profile, ladder=(1, 4))


class TestDecayRate(object):
    def test_positive_tail(self, grid_1d):
        field = Field.from_function(grid_1d, lambda x: 1.0 / (1.0 + x[:, 0] ** 2))
        record = checks.check_decay_rate(field, integrate(field), [2.0, 4.0, 8.0], 1.0)
        assert record.passed
        assert record.measured["power_slope"] < 0
        assert record.measured["fitted_radii"] == [2.0, 4.0]
        assert record.measured["above_bound"] is True
        assert sorted(record.measured["minima"]) == [2.0, 4.0, 8.0]

    def test_faster_decay_falls_below_bound(self, gaussian_1d):
        record = checks.check_decay_rate(gaussian_1d, integrate(gaussian_1d),
                                         [1.5, 2.0, 3.0, 4.0], 1.0, m=0.75)
        assert record.failed
        assert record.measured["positive"] is True
        assert record.measured["above_bound"] is False

    def test_compact_support_fails(self, bump_1d):
        record = checks.check_decay_rate(bump_1d, integrate(bump_1d), [2.0, 4.0], 1.0)
        assert record.failed
        assert record.measured["positive"] is False

    def test_zero_field(self, grid_1d):
        record = checks.check_decay_rate(Field.zeros(grid_1d), 0.0, [2.0], 1.0)
        assert record.status == CHECK_NOT_APPLICABLE

    @pytest.mark.parametrize(('m', 'sigma'), [
        (0.4, 0.5),
        (0.1, 0.25),
    ])
    def test_below_critical_exponent(self, gaussian_1d, m, sigma):
        with pytest.raises(NlfdValidationException):
            checks.check_decay_rate(gaussian_1d, integrate(gaussian_1d), [2.0, 4.0], sigma, m=m)

    def test_critical_exponent_accepted(self, grid_1d):
        field = Field.from_function(grid_1d, lambda x: 1.0 / (1.0 + x[:, 0] ** 2))
        record = checks.check_decay_rate(field, integrate(field), [2.0, 4.0, 8.0], 0.5, m=0.5)
        assert record.passed


class TestSupersolution(object):
    @pytest.mark.parametrize(('t', 'passed'), [
        (1e-3, True),
        (1e3, False),
    ])
    def test_sign(self, op_1d, phi, gaussian_1d, t, passed):
        trajectory = Trajectory.from_fields([0.0, t], [gaussian_1d, gaussian_1d])
        record = checks.check_supersolution(trajectory, op_1d, phi)
        assert record.passed is passed
        assert record.curves["residual"][1][0][0] == t

    def test_zero_snapshots(self, op_1d, phi, grid_1d):
        trajectory = Trajectory.from_fields([0.0, 1.0], [Field.zeros(grid_1d)] * 2)
        record = checks.check_supersolution(trajectory, op_1d, phi)
        assert record.status == CHECK_NOT_APPLICABLE


class TestEnergyBound(object):
    times = [0.5, 1.0, 2.0]

    def test_decaying_solution(self, op_1d, phi, gaussian_1d):
        trajectory = scaled_series(gaussian_1d, self.times, lambda t: t ** -3)
        record = checks.check_energy_bound(trajectory, op_1d, phi, 2.0)
        assert record.passed
        assert record.measured["t_start"] == 0.5
        assert record.measured["t_stop"] == 2.0

    def test_growing_solution(self, op_1d, phi, gaussian_1d):
        trajectory = scaled_series(gaussian_1d, self.times, lambda t: t ** 3)
        record = checks.check_energy_bound(trajectory, op_1d, phi, 2.0)
        assert record.failed
        assert record.measured["integrated_energy"] > record.measured["bound"]

    def test_horizon(self, op_1d, phi, gaussian_1d):
        trajectory = scaled_series(gaussian_1d, self.times, lambda t: 1.0)
        with pytest.raises(NlfdValidationException):
            checks.check_energy_bound(trajectory, op_1d, phi, 1.0)

    def test_needs_two_snapshots(self, op_1d, phi, gaussian_1d):
        trajectory = scaled_series(gaussian_1d, [0.1, 1.0, 20.0], lambda t: 1.0)
        with pytest.raises(InsufficientDataException):
            checks.check_energy_bound(trajectory, op_1d, phi, 2.0)


class TestComparison(object):
    def test_random_ordered_data(self, grid_1d):
        pairs = checks.random_ordered_data(grid_1d, 3, seed=1)
        assert len(pairs) == 3
        outside = np.abs(grid_1d.coordinates()[:, 0]) >= 2.5
        for lower, upper in pairs:
            assert np.all(lower.values >= 0)
            assert np.all(lower.values <= upper.values)
            assert not np.any(upper.values[outside])

    def test_random_ordered_data_is_seeded(self, grid_1d):
        first = checks.random_ordered_data(grid_1d, 2, seed=5)
        second = checks.random_ordered_data(grid_1d, 2, seed=5)
        for (a, b), (c, d) in zip(first, second):
            assert np.array_equal(a.values, c.values)
            assert np.array_equal(b.values, d.values)

    def runs(self, pairs):
        times = [0.0, 1.0]
        return [(Trajectory.from_fields(times, [lower, lower]),
                 Trajectory.from_fields(times, [upper, upper])) for lower, upper in pairs]

    def test_ordered_runs(self, grid_1d):
        record = checks.check_comparison(self.runs(checks.random_ordered_data(grid_1d, 2)))
        assert record.passed
        assert record.measured["pairs"] == 2

    def test_swapped_runs(self, grid_1d):
        pairs = [(upper, lower) for lower, upper in checks.random_ordered_data(grid_1d, 2)]
        record = checks.check_comparison(self.runs(pairs))
        assert record.failed
        assert record.measured["max_violation"] > 0

    @pytest.mark.parametrize(('steps', 'passed'), [
        (0, False),
        (100, True),
    ])
    def test_tolerance_follows_newton_residuals(self, grid_1d, steps, passed):
        _, upper = checks.random_ordered_data(grid_1d, 1)[0]
        runs = self.runs([(Field(grid_1d, upper.values + 5e-9), upper)])
        for run in runs[0]:
            run.statistics["accepted_steps"] = steps
        record = checks.check_comparison(runs)
        assert record.passed is passed
        assert record.measured["max_violation"] == pytest.approx(5e-9)

    def test_no_pairs(self):
        with pytest.raises(InsufficientDataException):
            checks.check_comparison([])
