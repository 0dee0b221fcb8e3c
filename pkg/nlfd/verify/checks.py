"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.


Trajectory checks. Each one turns a qualitative statement about the
equation into a measured quantity with a tolerance and returns a CheckRecord.
Unknown constants are fitted once and then required to work everywhere else.
"""
from __future__ import print_function, absolute_import, unicode_literals, division

import logging

import numpy as np

from nlfd.barenblatt import (critical_exponent, measure_tail_decay, rescale_solution,
                             similarity_exponent, trace_deviations)
from nlfd.constants import (MASS_DRIFT_TOLERANCE, MASS_LEAK_TOLERANCE, SMOOTHING_SLOPE_TOLERANCE,
                            SMOOTHING_ENVELOPE_SLACK, MONOTONICITY_TOLERANCE,
                            FITTED_CONSTANT_SLACK, TAIL_SLOPE_TOLERANCE, ASYMPTOTICS_LADDER,
                            ASYMPTOTICS_MASS_FRACTION, ASYMPTOTICS_TRACE_TIMES,
                            SUPERSOLUTION_TOLERANCE, COMPARISON_TOLERANCE, EXTINCTION_FLOOR,
                            DEFAULT_SEED)
from nlfd.exceptions import InsufficientDataException, NlfdValidationException
from nlfd.grid import Field, ball_restriction, integrate
from nlfd.solver import Trajectory
from nlfd.verify.report import CheckRecord


logger = logging.getLogger(__name__)


TAG_MASS = "mass-conservation"
TAG_SMOOTHING = "smoothing-effect"
TAG_HARNACK = "weak-harnack"
TAG_MONOTONICITY = "crandall-pierre"
TAG_TAIL = "tail-control"
TAG_EXTINCTION = "extinction"
TAG_ASYMPTOTICS = "barenblatt-asymptotics"
TAG_DECAY = "decay-rate"
TAG_SUPERSOLUTION = "elliptic-supersolution"
TAG_ENERGY = "energy-bound"
TAG_COMPARISON = "comparison-principle"


def _positive_snapshots(trajectory):
    return [(t, f) for t, f in trajectory.snapshots if t > 0]


def check_mass_conservation(trajectory, drift_tolerance=MASS_DRIFT_TOLERANCE,
                            leak_tolerance=MASS_LEAK_TOLERANCE):
    """
    max_t |mass(t) + leaked(t) - mass(0)| / mass(0) and the final leaked fraction

    :param leak_tolerance: float, or None to report the leaked fraction without
        bounding it (boxes the solution outgrows within the horizon)
    """
    masses = np.array(trajectory.masses())
    leaked = np.array(trajectory.leaked)
    initial = masses[0]
    curve = (["time", "mass", "leaked"],
             np.column_stack([trajectory.times, masses, leaked]).tolist())
    if initial == 0:
        drift, leak = 0.0, 0.0
    else:
        drift = float(np.max(np.abs(masses + leaked - initial)) / initial)
        leak = float(leaked[-1] / initial)
    leak_ok = leak_tolerance is None or leak <= leak_tolerance
    passed = drift <= drift_tolerance and leak_ok and not trajectory.partial
    return CheckRecord.from_flag(
        "mass_conservation", TAG_MASS, passed,
        measured={"headline": drift, "relative_drift": drift, "leaked_fraction": leak,
                  "partial": trajectory.partial},
        tolerance={"relative_drift": drift_tolerance, "leaked_fraction": leak_tolerance},
        curves={"mass": curve})


def check_smoothing(trajectory, m, sigma, dim, tolerance=SMOOTHING_SLOPE_TOLERANCE,
                    envelope_slack=SMOOTHING_ENVELOPE_SLACK):
    """
    slope of log ||u(t)||_inf against log t over the final decade, compared
    with -alpha

    The bound ||u(t)||_inf t^alpha / ||u0||_1^gamma <= C is fitted on the
    final decade and must then hold at every snapshot, up to envelope_slack.
    """
    alpha = similarity_exponent(dim, m, sigma)
    gamma = sigma * alpha / dim
    snapshots = [(t, f) for t, f in _positive_snapshots(trajectory) if f.norm_inf() > 0]
    if not snapshots:
        return CheckRecord.not_applicable("smoothing", TAG_SMOOTHING, "no positive snapshots")
    times = np.array([t for t, _ in snapshots])
    if times[-1] < 100.0 * times[0]:
        raise InsufficientDataException(
            "smoothing needs snapshots over at least two decades of t, got [%g, %g]" %
            (times[0], times[-1]))
    sup_norms = np.array([f.norm_inf() for _, f in snapshots])
    window = times >= times[-1] / 10.0
    if np.sum(window) < 2:
        raise InsufficientDataException("smoothing needs two snapshots in the final decade")
    slope = float(np.polyfit(np.log(times[window]), np.log(sup_norms[window]), 1)[0])

    initial_mass = trajectory.fields[0].norm(1)
    bound = sup_norms * times ** alpha / initial_mass ** gamma
    envelope = float(np.max(bound[window]))
    bounded = bool(np.all(bound <= envelope * (1.0 + envelope_slack)))
    passed = abs(slope + alpha) <= tolerance * alpha and bounded
    return CheckRecord.from_flag(
        "smoothing", TAG_SMOOTHING, passed,
        measured={"headline": -slope, "fitted_alpha": -slope, "alpha": alpha, "slope": slope,
                  "gamma": gamma, "max_scaled_sup": float(np.max(bound)),
                  "fitted_envelope": envelope, "bounded": bounded},
        tolerance={"slope": tolerance * alpha, "envelope": envelope_slack},
        curves={"sup_norm": (["time", "sup_norm", "scaled_sup"],
                             np.column_stack([times, sup_norms, bound]).tolist())})


def admissible_p_range(dim, sigma):
    """ [1, N/(N - sigma)_+) """
    gap = max(dim - sigma, 0.0)
    return 1.0, (dim / gap if gap > 0 else np.inf)


def check_positivity_harnack(field, nonlinearity, p, radius, center, t, A=None, sigma=None,
                             floor=EXTINCTION_FLOOR, on_solution=False):
    """
    c = min_{B_{R/2}} w / (int_{B_R} w^p)^{1/p} with w = phi(u) (or u itself when
    on_solution), and u > floor on B_{R/2}

    :param sigma: kernel order, bounds the admissible p
    """
    grid = field.grid
    if sigma is not None:
        low, high = admissible_p_range(grid.dim, sigma)
        if not low <= p < high:
            raise NlfdValidationException("p = %g outside the admissible range [%g, %g)" %
                                          (p, low, high))
    if not t > 0:
        raise NlfdValidationException("the supersolution reduction needs t > 0")
    u = field.values
    w = u if on_solution else nonlinearity.phi(u)
    inner = ball_restriction(grid, center, 0.5 * radius)
    outer = ball_restriction(grid, center, radius)
    lower = float(np.min(w[inner]))
    mean = float((grid.cell_volume * np.sum(w[outer] ** p)) ** (1.0 / p))
    c_measured = lower / mean if mean > 0 else 0.0

    A = A if A is not None else nonlinearity.A
    varpi = float(nonlinearity.phi_prime(field.norm_inf())) if field.norm_inf() > 0 else np.inf
    eta = 1.0 / (A * varpi * t)
    inner_min = float(np.min(u[inner]))
    passed = c_measured > 0 and inner_min > floor
    return CheckRecord.from_flag(
        "positivity_harnack", TAG_HARNACK, passed,
        measured={"headline": c_measured, "c_measured": c_measured, "p": p, "radius": radius,
                  "inner_min": inner_min, "box_min": float(np.min(u)), "eta": eta,
                  "varpi": varpi, "on_solution": on_solution},
        tolerance=floor)


def check_monotonicity(trajectory, nonlinearity, A=None, tolerance=None):
    """
    t -> phi(u(t)) t^{-1/A} must be nonincreasing in every cell
    """
    A = A if A is not None else nonlinearity.A
    snapshots = _positive_snapshots(trajectory)
    if len(snapshots) < 3:
        raise InsufficientDataException("monotonicity needs at least 3 snapshots at t > 0")
    tolerance = (tolerance if tolerance is not None
                 else MONOTONICITY_TOLERANCE + 10.0 * trajectory.newton_tol)
    floor = float(nonlinearity.phi(trajectory.extinction_floor))
    ratios = [np.asarray(nonlinearity.phi(f.values)) * t ** (-1.0 / A) for t, f in snapshots]
    violations = []
    for (t1, _), r1, r2 in zip(snapshots, ratios, ratios[1:]):
        scale = np.maximum(r1, floor * t1 ** (-1.0 / A))
        violations.append(float(np.max(np.maximum(r2 - r1, 0.0) / scale)))
    worst = max(violations)
    times = [t for t, _ in snapshots]
    return CheckRecord.from_flag(
        "monotonicity", TAG_MONOTONICITY, worst <= tolerance,
        measured={"headline": worst, "max_violation": worst, "A": A},
        tolerance=tolerance,
        curves={"violation": (["t1", "t2", "violation"],
                              list(zip(times, times[1:], violations)))})


def _outside_mass(field, radius):
    inside = ball_restriction(field.grid, np.zeros(field.grid.dim), radius)
    return integrate(field) - field.grid.cell_volume * float(np.sum(field.values[inside]))


def check_tail_control(trajectory, radii, alpha, m, slope_tolerance=TAIL_SLOPE_TOLERANCE,
                       slack=FITTED_CONSTANT_SLACK):
    """
    int_{|x| > 2R} u(t) <= int_{|x| > R} u0 + C t R^{-N/alpha} ||u0||_1^m

    C is fitted on the smallest (t, R) pair and that single C must then bound
    every other pair, up to a relative rounding slack. The R-slope
    of the tail mass at the last snapshot must not be shallower than -N/alpha.
    """
    grid = trajectory.grid
    u0 = trajectory.fields[0]
    initial_mass = u0.norm(1)
    exponent = grid.dim / alpha
    radii = sorted(float(r) for r in radii)
    rows = []
    for t, field in _positive_snapshots(trajectory):
        for radius in radii:
            lhs = _outside_mass(field, 2.0 * radius)
            initial_tail = _outside_mass(u0, radius)
            growth = t * radius ** (-exponent) * initial_mass ** m
            rows.append((t, radius, lhs, initial_tail, growth))
    if not rows or initial_mass == 0:
        return CheckRecord.not_applicable("tail_control", TAG_TAIL,
                                          "no mass or no snapshot at t > 0")

    def needed(row):
        return max(row[2] - row[3], 0.0) / row[4]

    fitted = needed(rows[0])
    minimal = max(needed(row) for row in rows)
    uniform = minimal <= fitted * (1.0 + slack)

    t_last = rows[-1][0]
    last = [(r, lhs) for t, r, lhs, _, _ in rows if t == t_last and lhs > 0]
    slope = None
    slope_ok = True
    if len(last) >= 2:
        slope = float(np.polyfit(np.log([r for r, _ in last]),
                                 np.log([lhs for _, lhs in last]), 1)[0])
        slope_ok = slope <= -exponent * (1.0 - slope_tolerance)
    return CheckRecord.from_flag(
        "tail_control", TAG_TAIL, uniform and slope_ok,
        measured={"headline": minimal, "fitted_C": fitted, "minimal_C": minimal,
                  "uniform": uniform, "radius_slope": slope, "expected_slope": -exponent},
        tolerance={"fitted_C": slack, "slope": slope_tolerance},
        curves={"tail": (["time", "radius", "outside_mass", "initial_tail", "growth"], rows)})


def check_extinction(trajectory, m, sigma, dim, slack=FITTED_CONSTANT_SLACK):
    """
    first extinction time, and for m < m_c the decay mechanism: with
    p = (1 - m) N / sigma and J(t) = ||u(t)||_p^p, J^{sigma/N} drops at least
    linearly. The rate C fitted on the first interval must then give
    J(t2)^{sigma/N} <= (J(t1)^{sigma/N} - C (t2 - t1))_+ on every later interval,
    up to a rounding slack relative to J(0)^{sigma/N}.
    """
    m_c = critical_exponent(dim, sigma)
    floor = trajectory.extinction_floor
    t_ext = trajectory.extinction_time
    if t_ext is None:
        for t, f in trajectory.snapshots:
            if f.norm_inf() < floor:
                t_ext = t
                break
    initial_zero = trajectory.fields[0].norm_inf() < floor
    measured = {"headline": t_ext, "extinction_time": t_ext, "m_c": m_c}
    curves = {}

    if m >= m_c:
        anomaly = t_ext is not None and not initial_zero
        measured["anomaly"] = anomaly
        return CheckRecord.from_flag("extinction", TAG_EXTINCTION, not anomaly,
                                     measured=measured, tolerance=floor)

    p = (1.0 - m) * dim / sigma
    volume = trajectory.grid.cell_volume
    times = np.array(trajectory.times)
    levels = np.array([(volume * np.sum(f.values ** p)) ** (sigma / dim)
                       for f in trajectory.fields])
    curves["lp_mechanism"] = (["time", "J_power"], np.column_stack([times, levels]).tolist())
    rates = []
    for i in range(len(times) - 1):
        if levels[i] == 0:
            break
        rates.append((levels[i] - levels[i + 1]) / (times[i + 1] - times[i]))
    mechanism = True
    if rates:
        first = rates[0]
        allowance = slack * levels[0]
        mechanism = first > 0 and all(
            levels[i + 1] <= max(levels[i] - first * (times[i + 1] - times[i]), 0.0) + allowance
            for i in range(1, len(rates)))
        measured["fitted_rate"] = first
        measured["min_rate"] = min(rates)
    measured["p"] = p
    measured["mechanism_ok"] = mechanism
    return CheckRecord.from_flag("extinction", TAG_EXTINCTION,
                                 (t_ext is not None) and mechanism,
                                 measured=measured, tolerance=slack, curves=curves)


def _eventually_decreasing(errors, slack=1e-2, floor=0.0):
    """
    the second half of the sequence is nonincreasing, up to a relative slack
    and an absolute floor
    """
    tail = errors[len(errors) // 2:]
    return all(b <= a * (1.0 + slack) + floor for a, b in zip(tail, tail[1:]))


def rescaled_family(run_family, params, profile, ladder=ASYMPTOTICS_LADDER):
    """
    :param run_family: dict k -> Field u_k(., 1), or a Trajectory with
                       snapshots at t = k
    :return: dict k -> Field on the profile grid
    """
    if isinstance(run_family, Trajectory):
        family = {}
        for k in ladder:
            try:
                snapshot = run_family.field_at(float(k))
            except NlfdValidationException:
                raise InsufficientDataException("trajectory has no snapshot at t = %g" % k)
            family[k] = rescale_solution(snapshot, k, params, grid=profile.grid)
        return family
    family = {}
    for k, field in sorted(run_family.items()):
        if not field.grid.same_as(profile.grid):
            field = rescale_solution(field, 1, params, grid=profile.grid)
        family[k] = field
    return family


def _profile_tail_slope(profile):
    try:
        return measure_tail_decay(profile)["slope"]
    except NlfdValidationException as ex:
        logger.info("no profile tail slope: %s", ex)
        return None


def _gaussian(points):
    return np.exp(-np.sum(points ** 2, axis=-1))


def check_asymptotics(run_family, params, profile, radius=None, ladder=ASYMPTOTICS_LADDER,
                      mass_fraction=ASYMPTOTICS_MASS_FRACTION,
                      trace_times=ASYMPTOTICS_TRACE_TIMES):
    """
    e1(k) = ||u_k(1) - B(1)||_1 and e_inf(k) = ||u_k(1) - B(1)||_inf on B_R

    The record also carries the profile tail slope and how fast B(t) concentrates
    to M delta as t -> 0, neither of which affects the verdict.

    :param radius: analysis radius R, a quarter of the box by default
    """
    family = rescaled_family(run_family, params, profile, ladder)
    grid = profile.grid
    radius = radius if radius is not None else 0.25 * grid.half_width
    ball = ball_restriction(grid, np.zeros(grid.dim), radius)
    ks = sorted(family)
    l1 = []
    linf = []
    for k in ks:
        difference = family[k].values - profile.values
        l1.append(float(grid.cell_volume * np.sum(np.abs(difference))))
        linf.append(float(np.max(np.abs(difference[ball]))))
    floor = 1e-12 * params.mass
    decreasing = _eventually_decreasing(l1, floor=floor) and _eventually_decreasing(linf,
                                                                                   floor=floor)
    final_ok = l1[-1] <= mass_fraction * params.mass
    deviations = trace_deviations(profile, params, _gaussian, trace_times)
    return CheckRecord.from_flag(
        "asymptotics", TAG_ASYMPTOTICS, decreasing and final_ok,
        measured={"headline": l1[-1] / params.mass, "L1_errors": dict(zip(ks, l1)),
                  "scaled_Linf_errors": dict(zip(ks, linf)), "radius": radius,
                  "alpha": params.alpha, "eventually_decreasing": decreasing,
                  "profile_tail_slope": _profile_tail_slope(profile)},
        tolerance=mass_fraction,
        curves={"errors": (["k", "L1_error", "scaled_Linf_error"], list(zip(ks, l1, linf))),
                "initial_trace": (["time", "deviation"], list(zip(trace_times, deviations)))})


def check_decay_rate(field, mass, radii, sigma, m=None, floor=0.0, slack=FITTED_CONSTANT_SLACK):
    """
    min over B_R of u must stay positive, and log(min/M) must decay no faster
    than a line in R^{sigma/2} log R. The line is fitted on the inner half of
    the radii and the outer minima must lie above it; the plain power-law
    slope of the minima is reported for comparison.

    :param m: nonlinearity exponent; below m_c the lower bound does not apply
    """
    grid = field.grid
    if m is not None and m < critical_exponent(grid.dim, sigma):
        raise NlfdValidationException(
            "decay rate needs a mass-conserving configuration, m = %g < m_c = %g" %
            (m, critical_exponent(grid.dim, sigma)))
    if field.norm_inf() == 0 or not mass > 0:
        return CheckRecord.not_applicable("decay_rate", TAG_DECAY, "zero field")
    radii = sorted(float(r) for r in radii if r > 1.0)
    minima = [float(np.min(field.values[ball_restriction(grid, np.zeros(grid.dim), r)]))
              for r in radii]
    positive = all(value > floor for value in minima)
    measured = {"minima": dict(zip(radii, minima)), "positive": positive}
    above = True
    inner = max(2, (len(radii) + 1) // 2)
    if positive and len(radii) >= 2:
        shape = np.array([r ** (sigma / 2.0) * np.log(r) for r in radii])
        logs = np.log(np.array(minima) / mass)
        slope, intercept = np.polyfit(shape[:inner], logs[:inner], 1)
        line = intercept + slope * shape
        margin = slack * np.maximum(np.abs(line), 1.0)
        above = bool(np.all(logs[inner:] >= line[inner:] - margin[inner:]))
        measured.update({"bound_slope": float(slope), "bound_intercept": float(intercept),
                         "fitted_radii": radii[:inner], "above_bound": above,
                         "power_slope": float(np.polyfit(np.log(radii), logs, 1)[0])})
        measured["headline"] = measured["power_slope"]
    rows = [(r, value) for r, value in zip(radii, minima)]
    return CheckRecord.from_flag("decay_rate", TAG_DECAY, positive and above, measured=measured,
                                 tolerance={"floor": floor, "bound": slack},
                                 curves={"minima": (["radius", "min_u"], rows)})


def check_supersolution(trajectory, op, nonlinearity, A=None,
                        tolerance=SUPERSOLUTION_TOLERANCE):
    """
    eta w + L w >= 0 cellwise (tested against unit vectors) with w = phi(u(t)),
    eta = (A varpi t)^{-1}, varpi = phi'(||u(t)||_inf); residuals relative to
    eta ||w||_inf
    """
    A = A if A is not None else nonlinearity.A
    rows = []
    for t, field in _positive_snapshots(trajectory):
        top = field.norm_inf()
        if top == 0:
            continue
        w = np.asarray(nonlinearity.phi(field.values), dtype=float)
        varpi = float(nonlinearity.phi_prime(top))
        eta = 1.0 / (A * varpi * t)
        residual = eta * w + op.apply_values(w)
        rows.append((t, eta, float(np.min(residual) / (eta * np.max(w)))))
    if not rows:
        return CheckRecord.not_applicable("supersolution", TAG_SUPERSOLUTION,
                                          "no nonzero snapshot at t > 0")
    worst = min(r for _, _, r in rows)
    return CheckRecord.from_flag(
        "supersolution", TAG_SUPERSOLUTION, worst >= -tolerance,
        measured={"headline": worst, "min_relative_residual": worst, "A": A},
        tolerance=tolerance,
        curves={"residual": (["time", "eta", "min_relative_residual"], rows)})


def check_energy_bound(trajectory, op, nonlinearity, horizon):
    """
    int_{1/T}^{T} E(phi(u), phi(u)) dt <= ||phi(u(1/T))||_inf ||u(1/T)||_1,
    trapezoidal in time over the snapshots inside [1/T, T]
    """
    if not horizon > 1:
        raise NlfdValidationException("energy bound needs T > 1")
    inside = [(t, f) for t, f in trajectory.snapshots
              if 1.0 / horizon * (1 - 1e-12) <= t <= horizon * (1 + 1e-12)]
    if len(inside) < 2:
        raise InsufficientDataException("energy bound needs two snapshots in [1/T, T]")
    times = np.array([t for t, _ in inside])
    energies = []
    for _, f in inside:
        w = np.asarray(nonlinearity.phi(f.values), dtype=float)
        energies.append(op.energy(w, w))
    energies = np.array(energies)
    total = float(np.sum(0.5 * (energies[1:] + energies[:-1]) * np.diff(times)))
    start = inside[0][1]
    bound = float(np.max(nonlinearity.phi(start.values))) * start.norm(1)
    return CheckRecord.from_flag(
        "energy_bound", TAG_ENERGY, total <= bound,
        measured={"headline": total, "integrated_energy": total, "bound": bound,
                  "t_start": float(times[0]), "t_stop": float(times[-1])},
        tolerance=bound,
        curves={"energy": (["time", "energy"], np.column_stack([times, energies]).tolist())})


def random_ordered_data(grid, count, seed=DEFAULT_SEED, support=None, height=1.0):
    """
    pairs (u0, v0) with 0 <= u0 <= v0, random cellwise on the centered cube of
    half-width `support` (a quarter of the box by default)

    :return: list of (Field, Field)
    """
    rng = np.random.RandomState(seed)
    support = support if support is not None else 0.25 * grid.half_width
    mask = np.all(np.abs(grid.coordinates()) < support, axis=-1)
    pairs = []
    for _ in range(count):
        lower = height * rng.rand(grid.cell_count) * mask
        upper = lower + height * rng.rand(grid.cell_count) * mask
        pairs.append((Field(grid, lower), Field(grid, upper)))
    return pairs


def check_comparison(trajectory_pairs, tolerance=None):
    """
    max over pairs and shared snapshot times of (u - v)_+ for runs started
    from ordered data u0 <= v0

    The default tolerance adds the Newton residual of every accepted step.
    """
    if not trajectory_pairs:
        raise InsufficientDataException("comparison needs at least one pair of runs")
    if tolerance is None:
        steps = max(run.statistics["accepted_steps"] for pair in trajectory_pairs
                    for run in pair)
        newton_tol = max(run.newton_tol for pair in trajectory_pairs for run in pair)
        tolerance = COMPARISON_TOLERANCE + 10.0 * newton_tol * max(steps, 1)
    worst = 0.0
    rows = []
    for index, (lower, upper) in enumerate(trajectory_pairs):
        shared = sorted(set(lower.times) & set(upper.times))
        violation = 0.0
        for t in shared:
            gap = lower.field_at(t).values - upper.field_at(t).values
            violation = max(violation, float(np.max(gap)))
        rows.append((index, len(shared), violation))
        worst = max(worst, violation)
    return CheckRecord.from_flag(
        "comparison", TAG_COMPARISON, worst <= tolerance,
        measured={"headline": worst, "max_violation": worst, "pairs": len(trajectory_pairs)},
        tolerance=tolerance,
        curves={"violation": (["pair", "shared_snapshots", "max_violation"], rows)})
