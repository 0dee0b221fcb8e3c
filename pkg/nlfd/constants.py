"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import print_function, absolute_import, unicode_literals

import os
import sys

PY3 = sys.version_info[0] >= 3

DEFAULT_SETTINGS_FILE = os.path.expanduser("~/.config/nlfd.conf")
DEFAULT_SETTINGS_SECTION = "default"
GENERAL_SETTINGS_SECTION = "general"
DEFAULT_OUTPUT_DIR = "nlfd-output"
DEFAULT_THREADS = 1
DEFAULT_SEED = 20240229

# grid
BOUNDARY_EXTERIOR_ZERO = "exterior_zero"
BOUNDARY_PERIODIC = "periodic"
BOUNDARY_MODES = (BOUNDARY_EXTERIOR_ZERO, BOUNDARY_PERIODIC)
SUPPORTED_DIMENSIONS = (1, 2)
MIN_POINTS_PER_AXIS = 16

# kernel families
KERNEL_FRACTIONAL_POWER = "fractional_power"
KERNEL_CONVOLUTION_MODULATED = "convolution_modulated"
KERNEL_MIDPOINT_GENERAL = "midpoint_general"
KERNEL_VALIDATION_TOLERANCE = 1e-9
KERNEL_VALIDATION_MIN_SAMPLES = 1000

# nonlinearity families
NONLINEARITY_PURE_POWER = "pure_power"
NONLINEARITY_PERTURBED_POWER = "perturbed_power"
NONLINEARITY_BOUNDED = "bounded_modification"
INVERSE_RELATIVE_TOLERANCE = 1e-12
INVERSE_MAX_ITERATIONS = 200
HPHI_SAMPLE_RANGE = (1e-8, 1e8)
HPHI_TOLERANCE = 1e-10

# operator assembly
NEAR_FIELD_CELLS = 3
NEAR_FIELD_NODES = 8
DENSE_CELL_LIMIT = 4096
ASSEMBLY_BLOCK_ROWS = 256
PERIODIC_IMAGES_1D = 8
PERIODIC_IMAGES_2D = 2
EXTERIOR_ANGLE_NODES = 64
CG_RELATIVE_TOLERANCE = 1e-13

# solver
NEWTON_TOLERANCE = 1e-10
NEWTON_MAX_ITERATIONS = 50
ARMIJO_FACTOR = 0.5
ARMIJO_MAX_HALVINGS = 20
ARMIJO_SUFFICIENT_DECREASE = 1e-4
DT_GROWTH = 1.2
EXTINCTION_FLOOR = 1e-12
NEGATIVITY_TOLERANCE = 1e-13
SNAPSHOT_INTERPOLATE = "interpolate"
SNAPSHOT_HIT = "hit"
SNAPSHOT_MODES = (SNAPSHOT_INTERPOLATE, SNAPSHOT_HIT)

EVENT_EXTINCTION = "extinction"
EVENT_NEWTON_FAILURE = "newton_failure"
EVENT_DT_FLOOR = "dt_floor"

# barenblatt
PROFILE_TOLERANCE = 1e-3
PROFILE_MAX_CYCLES = 20
PROFILE_SEED_WIDTH_CELLS = 4

# verify
CHECK_PASSED = "passed"
CHECK_FAILED = "failed"
CHECK_NOT_APPLICABLE = "not_applicable"
MASS_DRIFT_TOLERANCE = 1e-3
MASS_LEAK_TOLERANCE = 1e-2
SMOOTHING_SLOPE_TOLERANCE = 0.05
SMOOTHING_ENVELOPE_SLACK = 0.1
MONOTONICITY_TOLERANCE = 1e-6
FITTED_CONSTANT_SLACK = 1e-9
TAIL_SLOPE_TOLERANCE = 0.1
ASYMPTOTICS_LADDER = (1, 4, 16, 64, 256)
ASYMPTOTICS_MASS_FRACTION = 0.05
ASYMPTOTICS_TRACE_TIMES = (1e-3, 1e-2, 1e-1, 1.0)
SUPERSOLUTION_TOLERANCE = 1e-2
CUTOFF_SLOPE_TOLERANCE = 0.05
SPECTRAL_AGREEMENT_TOLERANCE = 1e-3
ENERGY_IDENTITY_TOLERANCE = 1e-12
COMPARISON_TOLERANCE = 1e-10

# CLI exit codes
EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_CONFIGURATION_ERROR = 2
EXIT_RUNTIME_FAILURE = 3

CLI_SUMMARY_COLS = ["name", "tag", "status", "measured", "tolerance"]

# output layout
MANIFEST_FILE = "manifest.json"
MASS_FILE = "mass.csv"
SNAPSHOTS_DIR = "snapshots"
CHECKS_DIR = "checks"
CURVES_DIR = "curves"

SCENARIO_SCHEMA = "schemas/scenario.json"

SUITE_QUICK = "quick"
SUITE_ACCEPTANCE = "acceptance"
SUITES_AVAILABLE = (SUITE_QUICK, SUITE_ACCEPTANCE)
