"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.


Diagnostics: every check returns a nlfd.verify.report.CheckRecord.
"""
