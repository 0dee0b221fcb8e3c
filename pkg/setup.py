#!/usr/bin/python
"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""

import re

from setuptools import setup, find_packages


def _get_requirements(path):
    try:
        with open(path) as f:
            packages = f.read().splitlines()
    except (IOError, OSError) as ex:
        raise RuntimeError("Can't open file with requirements: %s", repr(ex))
    return [p.strip() for p in packages if p.strip() and not re.match(r"^\s*#", p)]


setup(
    name="nlfd-lab",
    description='Solver and verification harness for nonlocal fast diffusion equations',
    version="0.3.0",
    author='the nlfd-lab developers',
    license="BSD",
    packages=find_packages(exclude=["*.tests", "*.tests.*", "tests.*", "tests"]),
    entry_points={
          'console_scripts': ['nlfd=nlfd.cli.main:main'],
    },
    install_requires=_get_requirements('requirements.txt'),
    package_data={'nlfd': ['schemas/*.json']},
    python_requires='>=3.8',
    setup_requires=[],
    tests_require=_get_requirements('tests/requirements.txt'),
)
