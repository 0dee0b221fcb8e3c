"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.
"""
from __future__ import absolute_import

import logging
from nlfd import set_logging
set_logging(name="nlfd.tests", level=logging.DEBUG)
set_logging(name="nlfd", level=logging.DEBUG)
