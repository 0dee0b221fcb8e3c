"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import print_function, absolute_import, unicode_literals

import argparse
import logging
import sys

import pkg_resources

from nlfd import set_logging
from nlfd.api import Laboratory
from nlfd.cli.render import render_report
from nlfd.conf import Configuration
from nlfd.constants import (DEFAULT_SETTINGS_FILE, DEFAULT_SETTINGS_SECTION, EXIT_OK,
                            EXIT_CHECK_FAILURE, EXIT_CONFIGURATION_ERROR, EXIT_RUNTIME_FAILURE,
                            SUITES_AVAILABLE)
from nlfd.exceptions import (NlfdException, NlfdValidationException, NoBarenblattException,
                             ScenarioValidationException)
from nlfd.scenario.config import load_config


logger = logging.getLogger('nlfd')


class CommandOutcome(object):
    def __init__(self, exit_code, reports=None):
        self.exit_code = exit_code
        self.reports = reports or []

    @classmethod
    def from_reports(cls, reports):
        passed = all(report.passed for report in reports)
        return cls(EXIT_OK if passed else EXIT_CHECK_FAILURE, reports)


def cmd_run(args, lab):
    config = load_config(args.scenario, overrides=args.overrides)
    outcome = lab.run_scenario(config, output_dir=args.out)
    render_report(outcome.report)
    print("artifacts written to %s" % outcome.output_dir, file=sys.stderr)
    return CommandOutcome.from_reports([outcome.report])


def cmd_barenblatt(args, lab):
    out = args.out or "barenblatt-M%g-m%g-s%g-N%d.csv" % (args.mass, args.m, args.sigma,
                                                          args.dim)
    profile = lab.compute_barenblatt(args.mass, args.m, args.sigma, dim=args.dim,
                                     half_width=args.half_width,
                                     points_per_axis=args.points_per_axis, out=out)
    print("profile: %d cycles, converged=%s, written to %s" %
          (profile.cycles, profile.converged, out))
    return CommandOutcome(EXIT_OK)


def cmd_suite(args, lab):
    outcomes = lab.run_suite(args.SUITE, output_dir=args.out)
    for outcome in outcomes:
        print("== %s: %s" % (outcome.name, "passed" if outcome.passed else "FAILED"),
              file=sys.stderr)
        render_report(outcome.report)
    failed = [o.name for o in outcomes if not o.passed]
    if failed:
        logger.error("failed entries: %s", ", ".join(failed))
    return CommandOutcome.from_reports([o.report for o in outcomes])


def cli(argv=None):
    try:
        version = pkg_resources.get_distribution("nlfd-lab").version
    except pkg_resources.DistributionNotFound:
        version = "GIT"

    parser = argparse.ArgumentParser(
        description="nonlocal fast diffusion laboratory: solver and verification harness"
    )
    exclusive_group = parser.add_mutually_exclusive_group()
    # default=None tells nlfd.conf.Configuration that the option was not given
    exclusive_group.add_argument("--verbose", action="store_true", default=None)
    exclusive_group.add_argument("-q", "--quiet", action="store_true", default=None)
    exclusive_group.add_argument("-V", "--version", action="version", version=version)
    parser.add_argument("--config-file", metavar="PATH", default=DEFAULT_SETTINGS_FILE,
                        help="ini file with user settings (default: %(default)s)")
    parser.add_argument("--instance", "-i", metavar="SECTION_NAME",
                        default=DEFAULT_SETTINGS_SECTION,
                        help="section within the ini file (default: %(default)s)")
    parser.add_argument("--seed", type=int, help="random seed for sampled data")
    parser.add_argument("--threads", type=int, help="worker threads")

    subparsers = parser.add_subparsers(help='commands')

    run_parser = subparsers.add_parser(str('run'), help='solve one scenario and run its checks')
    run_parser.add_argument("--config", dest="scenario", metavar="PATH", required=True,
                            help="YAML scenario file")
    run_parser.add_argument("--set", dest="overrides", metavar="KEY=VALUE", action="append",
                            default=[], help="override a scenario value by dotted path, "
                            "e.g. --set kernel.sigma=0.5 (repeatable)")
    run_parser.add_argument("--out", metavar="DIR", help="output directory")
    run_parser.set_defaults(func=cmd_run)

    barenblatt_parser = subparsers.add_parser(str('barenblatt'),
                                              help='compute a Barenblatt profile')
    barenblatt_parser.add_argument("--mass", type=float, default=1.0)
    barenblatt_parser.add_argument("--m", type=float, required=True)
    barenblatt_parser.add_argument("--sigma", type=float, required=True)
    barenblatt_parser.add_argument("--dim", type=int, default=1, choices=[1, 2])
    barenblatt_parser.add_argument("--half-width", type=float, default=50.0)
    barenblatt_parser.add_argument("--points-per-axis", type=int, default=1024)
    barenblatt_parser.add_argument("--out", metavar="FILE", help="profile CSV")
    barenblatt_parser.set_defaults(func=cmd_barenblatt)

    suite_parser = subparsers.add_parser(str('suite'), help='run a predefined scenario set')
    suite_parser.add_argument("SUITE", help="one of: %s" % ", ".join(SUITES_AVAILABLE))
    suite_parser.add_argument("--out", metavar="DIR", help="output directory")
    suite_parser.set_defaults(func=cmd_suite)

    args = parser.parse_args(argv)
    return parser, args


def main(argv=None):
    parser, args = cli(argv)
    try:
        conf = Configuration(conf_file=args.config_file, conf_section=args.instance,
                             cli_args=args)
        set_logging(level=conf.get_log_level())
        lab = Laboratory(conf)
    except NlfdException as ex:
        logger.error("Configuration error: %s", ex)
        return EXIT_CONFIGURATION_ERROR

    if not hasattr(args, 'func'):
        parser.print_help()
        return EXIT_CONFIGURATION_ERROR

    try:
        return args.func(args, lab).exit_code
    except KeyboardInterrupt:
        print("Quitting on user request.")
        return EXIT_RUNTIME_FAILURE
    except ScenarioValidationException as ex:
        logger.error("Invalid scenario:")
        for error in ex.errors:
            logger.error("  %s", error)
        return EXIT_CONFIGURATION_ERROR
    except NoBarenblattException as ex:
        logger.error("%s", ex)
        return EXIT_CONFIGURATION_ERROR
    except NlfdValidationException as ex:
        logger.error("Validation error: %s", ex)
        return EXIT_CONFIGURATION_ERROR
    except Exception as ex:  # pylint: disable=broad-except
        if conf.get_verbose():
            raise
        logger.error("Runtime failure: %s", ex)
        return EXIT_RUNTIME_FAILURE


if __name__ == '__main__':
    sys.exit(main())
