"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.


Implicit Euler for u_t + L phi(u) = 0.

Each step solves beta(w) + dt L w = u_n for w = phi(u_{n+1}) with damped Newton;
beta is extended oddly so intermediate iterates may cross zero.
"""
from __future__ import print_function, absolute_import, unicode_literals, division

import logging

import numpy as np

from nlfd.constants import (NEWTON_TOLERANCE, NEWTON_MAX_ITERATIONS, ARMIJO_FACTOR,
                            ARMIJO_MAX_HALVINGS, ARMIJO_SUFFICIENT_DECREASE, DT_GROWTH,
                            EXTINCTION_FLOOR, NEGATIVITY_TOLERANCE, SNAPSHOT_INTERPOLATE,
                            SNAPSHOT_HIT, SNAPSHOT_MODES, EVENT_EXTINCTION,
                            EVENT_NEWTON_FAILURE, EVENT_DT_FLOOR)
from nlfd.exceptions import (NlfdValidationException, NewtonFailure, SchemeContractViolation)
from nlfd.grid import Field, integrate
from nlfd.operator import DiscreteOperator


logger = logging.getLogger(__name__)


class SolverConfig(object):
    def __init__(self, t_end, dt_initial=1e-3, dt_min=1e-10, dt_max=None,
                 newton_tol=NEWTON_TOLERANCE, newton_max_iter=NEWTON_MAX_ITERATIONS,
                 snapshot_times=None, extinction_floor=EXTINCTION_FLOOR,
                 snapshot_mode=SNAPSHOT_INTERPOLATE):
        dt_max = t_end if dt_max is None else dt_max
        snapshot_times = sorted(float(t) for t in (snapshot_times or [t_end]))
        errors = []
        if not t_end > 0:
            errors.append("t_end must be positive, got %r" % (t_end,))
        if not 0 < dt_min <= dt_initial <= dt_max:
            errors.append("need 0 < dt_min <= dt_initial <= dt_max, got %r, %r, %r" %
                          (dt_min, dt_initial, dt_max))
        if snapshot_times and (snapshot_times[0] < 0 or snapshot_times[-1] > t_end):
            errors.append("snapshot times must lie in [0, t_end]")
        if not newton_tol > 0:
            errors.append("newton_tol must be positive")
        if newton_max_iter < 1:
            errors.append("newton_max_iter must be at least 1")
        if not extinction_floor > 0:
            errors.append("extinction_floor must be positive")
        if snapshot_mode not in SNAPSHOT_MODES:
            errors.append("snapshot_mode must be one of %s, got %r" %
                          (SNAPSHOT_MODES, snapshot_mode))
        if errors:
            raise NlfdValidationException("; ".join(errors))

        self.t_end = float(t_end)
        self.dt_initial = float(dt_initial)
        self.dt_min = float(dt_min)
        self.dt_max = float(dt_max)
        self.newton_tol = float(newton_tol)
        self.newton_max_iter = int(newton_max_iter)
        self.snapshot_times = [t for t in snapshot_times if t > 0]
        self.extinction_floor = float(extinction_floor)
        self.snapshot_mode = snapshot_mode

    def to_dict(self):
        return dict(self.__dict__)

    def __repr__(self):
        return "SolverConfig(%r)" % self.to_dict()


class Trajectory(object):
    """
    time-stamped snapshots of one run, plus mass bookkeeping and events

    leaked[i] is the cumulative exterior flux up to snapshot i.
    """

    def __init__(self, grid, config=None, metadata=None):
        self.grid = grid
        self.config = config
        self.metadata = metadata or {}
        self.snapshots = []
        self.leaked = []
        self.events = []
        self.partial = False
        self.statistics = {"accepted_steps": 0, "rejected_steps": 0, "newton_iterations": 0}

    @classmethod
    def from_fields(cls, times, fields, leaked=None, **kwargs):
        """ build a trajectory from ready-made snapshots """
        if not fields:
            raise NlfdValidationException("a trajectory needs at least one snapshot")
        trajectory = cls(fields[0].grid, **kwargs)
        leaked = leaked if leaked is not None else [0.0] * len(fields)
        for t, field, flux in zip(times, fields, leaked):
            trajectory.add_snapshot(t, field, flux)
        return trajectory

    def add_snapshot(self, t, field, leaked=0.0):
        if self.snapshots and not t > self.snapshots[-1][0]:
            raise NlfdValidationException("snapshot times must increase: %g after %g" %
                                          (t, self.snapshots[-1][0]))
        self.grid.check_same(field.grid)
        self.snapshots.append((float(t), field))
        self.leaked.append(float(leaked))
        logger.info("snapshot t=%g mass=%.12g max=%.6g", t, integrate(field), field.norm_inf())

    def add_event(self, t, name):
        logger.info("event %s at t=%g", name, t)
        self.events.append((float(t), name))

    @property
    def times(self):
        return [t for t, _ in self.snapshots]

    @property
    def fields(self):
        return [f for _, f in self.snapshots]

    def masses(self):
        return [integrate(f) for f in self.fields]

    @property
    def newton_tol(self):
        return self.config.newton_tol if self.config is not None else NEWTON_TOLERANCE

    @property
    def extinction_floor(self):
        return self.config.extinction_floor if self.config is not None else EXTINCTION_FLOOR

    def event_times(self, name):
        return [t for t, event in self.events if event == name]

    @property
    def extinction_time(self):
        times = self.event_times(EVENT_EXTINCTION)
        return times[0] if times else None

    def field_at(self, t):
        for time, field in self.snapshots:
            if time == t:
                return field
        raise NlfdValidationException("no snapshot at t=%g" % t)

    def to_manifest(self):
        return {
            "grid": self.grid.to_dict(),
            "config": self.config.to_dict() if self.config is not None else None,
            "metadata": self.metadata,
            "times": self.times,
            "mass": self.masses(),
            "leaked_mass": list(self.leaked),
            "events": [{"time": t, "event": name} for t, name in self.events],
            "partial": self.partial,
            "statistics": dict(self.statistics),
        }

    def __len__(self):
        return len(self.snapshots)

    def __repr__(self):
        return "Trajectory(%d snapshots, events=%r)" % (len(self.snapshots), self.events)


def _odd_beta(nonlinearity, w):
    return np.sign(w) * nonlinearity.beta(np.abs(w))


def _odd_beta_prime(nonlinearity, w):
    return nonlinearity.beta_prime(np.abs(w))


def solve_step(op, nonlinearity, u_values, dt, tol=NEWTON_TOLERANCE,
               max_iter=NEWTON_MAX_ITERATIONS):
    """
    Newton for F(w) = beta(w) + dt L w - u_n, Armijo-damped on ||F||_2

    :return: (u_{n+1} values, w values, iterations)
    """
    u_values = np.asarray(u_values, dtype=float)
    if not np.any(u_values):
        return np.zeros_like(u_values), np.zeros_like(u_values), 0

    def residual(w):
        return _odd_beta(nonlinearity, w) + dt * op.apply_values(w) - u_values

    w = np.asarray(nonlinearity.phi(u_values), dtype=float)
    res = residual(w)
    norm = np.linalg.norm(res)
    iterations = 0
    while np.max(np.abs(res)) > tol:
        if iterations >= max_iter:
            raise NewtonFailure(iterations, float(np.max(np.abs(res))))
        iterations += 1
        delta = op.solve(_odd_beta_prime(nonlinearity, w), -res, dt)
        damping = 1.0
        for _ in range(ARMIJO_MAX_HALVINGS + 1):
            trial = w + damping * delta
            trial_res = residual(trial)
            trial_norm = np.linalg.norm(trial_res)
            if trial_norm <= (1.0 - ARMIJO_SUFFICIENT_DECREASE * damping) * norm:
                break
            damping *= ARMIJO_FACTOR
        else:
            raise NewtonFailure(iterations, float(np.max(np.abs(res))))
        w, res, norm = trial, trial_res, trial_norm

    u_next = _odd_beta(nonlinearity, w)
    lowest = float(np.min(u_next))
    if lowest < -NEGATIVITY_TOLERANCE:
        raise SchemeContractViolation("implicit step produced u = %.3e < 0" % lowest)
    return np.maximum(u_next, 0.0), np.maximum(w, 0.0), iterations


def step(op, nonlinearity, u_n, dt, tol=NEWTON_TOLERANCE, max_iter=NEWTON_MAX_ITERATIONS):
    """
    one implicit Euler step

    :return: Field u_{n+1}
    """
    op.grid.check_same(u_n.grid)
    if np.min(u_n.values) < 0:
        raise NlfdValidationException("step needs nonnegative data")
    u_next, _, _ = solve_step(op, nonlinearity, u_n.values, dt, tol=tol, max_iter=max_iter)
    return Field(op.grid, u_next)


def run(grid, kernel, nonlinearity, u0, config, op=None, threads=1, metadata=None):
    """
    adaptive implicit Euler from u0 to config.t_end

    :param op: DiscreteOperator, assembled from (grid, kernel) when omitted
    :return: Trajectory
    """
    grid.check_same(u0.grid)
    if np.min(u0.values) < 0:
        raise NlfdValidationException("initial datum must be nonnegative")
    if op is None:
        op = DiscreteOperator(grid, kernel, threads=threads)
    metadata = dict(metadata or {})
    metadata.setdefault("kernel", kernel.to_dict())
    metadata.setdefault("nonlinearity", nonlinearity.to_dict())

    trajectory = Trajectory(grid, config=config, metadata=metadata)
    trajectory.add_snapshot(0.0, u0, 0.0)
    pending = list(config.snapshot_times)
    volume = grid.cell_volume

    t = 0.0
    u = u0.values
    leaked = 0.0
    dt = config.dt_initial

    if u0.norm_inf() < config.extinction_floor:
        trajectory.add_event(0.0, EVENT_EXTINCTION)

    while pending:
        if trajectory.extinction_time is not None:
            for when in pending:
                trajectory.add_snapshot(when, Field.zeros(grid), leaked)
            break

        dt_try = min(dt, config.t_end - t)
        if config.snapshot_mode == SNAPSHOT_HIT:
            dt_try = min(dt_try, pending[0] - t)
        if dt_try <= 0:
            # rounding left snapshots at the current time
            for when in pending:
                trajectory.add_snapshot(when, Field(grid, u), leaked)
            break
        try:
            u_next, w_next, iterations = solve_step(op, nonlinearity, u, dt_try,
                                                    tol=config.newton_tol,
                                                    max_iter=config.newton_max_iter)
        except NewtonFailure as ex:
            trajectory.statistics["rejected_steps"] += 1
            trajectory.add_event(t, EVENT_NEWTON_FAILURE)
            dt = 0.5 * dt_try
            logger.warning("Newton failed at t=%g with dt=%g (%s), halving", t, dt_try, ex)
            if dt < config.dt_min:
                trajectory.add_event(t, EVENT_DT_FLOOR)
                trajectory.partial = True
                break
            continue

        t_next = t + dt_try
        flux = dt_try * volume * float(np.dot(op.leak, w_next))
        trajectory.statistics["accepted_steps"] += 1
        trajectory.statistics["newton_iterations"] += iterations
        logger.debug("step t=%g dt=%g newton=%d max=%.6g", t_next, dt_try, iterations,
                     np.max(u_next))

        while pending and pending[0] <= t_next * (1.0 + 1e-14):
            when = pending.pop(0)
            theta = min(1.0, (when - t) / dt_try)
            snapshot = (1.0 - theta) * u + theta * u_next
            trajectory.add_snapshot(when, Field(grid, snapshot), leaked + theta * flux)

        t, u, leaked = t_next, u_next, leaked + flux
        if np.max(u) < config.extinction_floor:
            trajectory.add_event(t, EVENT_EXTINCTION)
        dt = min(config.dt_max, dt_try * DT_GROWTH if dt_try >= dt else dt)
    return trajectory
