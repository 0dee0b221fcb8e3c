"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.


Exceptions raised by nlfd
"""
from __future__ import print_function, absolute_import, unicode_literals

from traceback import format_tb


class NlfdException(Exception):
    def __init__(self, message=None, cause=None, traceback=None):
        if message is None and cause is not None:
            message = str(cause)

        super(NlfdException, self).__init__(message)
        self.message = message
        self.cause = cause
        self.traceback = traceback

    def __str__(self):
        if self.cause and self.traceback and not hasattr(self, '__context__'):
            return ("%s\n\n" % self.message +
                    "Original traceback (most recent call last):\n" +
                    "".join(format_tb(self.traceback)) +
                    "%r" % self.cause)
        else:
            return super(NlfdException, self).__str__()

    def __repr__(self):
        if self.cause and not hasattr(self, '__context__'):
            return "NlfdException: %s (from %r)" % (self.message, self.cause)
        else:
            return super(NlfdException, self).__repr__()


class NlfdValidationException(NlfdException):
    pass


class GridMismatchException(NlfdValidationException):
    """ two objects live on different grids """


class DegenerateBallException(NlfdValidationException):
    """ ball too small to contain any cell center """


class NoBarenblattException(NlfdValidationException):
    """ self-similar profiles do not exist for m <= m_c """


class InsufficientDataException(NlfdValidationException):
    """ trajectory does not carry enough snapshots for a check """


class ScenarioValidationException(NlfdValidationException):
    """ scenario file failed validation; carries every error found """

    def __init__(self, errors, *args, **kwargs):
        errors = list(errors)
        message = "%d validation error(s):\n  %s" % (len(errors), "\n  ".join(errors))
        super(ScenarioValidationException, self).__init__(message, *args, **kwargs)
        self.errors = errors


class KernelSingularityException(NlfdException):
    """ kernel evaluated at coincident points """


class NewtonFailure(NlfdException):
    """ implicit step did not converge """

    def __init__(self, iterations, residual, *args, **kwargs):
        super(NewtonFailure, self).__init__(
            "Newton did not converge in %d iterations (residual %.3e)" % (iterations, residual),
            *args, **kwargs)
        self.iterations = iterations
        self.residual = residual


class SchemeContractViolation(NlfdException):
    """ implicit step produced values the scheme guarantees cannot happen """
