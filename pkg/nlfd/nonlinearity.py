"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.


Fast-diffusion nonlinearities phi, their inverses beta and power envelopes.

A nonlinearity carries a dilation rho = k^alpha accumulated through rescaling;
the evaluated function is rho^m phi_0(s / rho).
"""
from __future__ import print_function, absolute_import, unicode_literals, division

import copy
import logging

import numpy as np

from nlfd.constants import (NONLINEARITY_PURE_POWER, NONLINEARITY_PERTURBED_POWER,
                            NONLINEARITY_BOUNDED, INVERSE_RELATIVE_TOLERANCE,
                            INVERSE_MAX_ITERATIONS, HPHI_SAMPLE_RANGE, HPHI_TOLERANCE)
from nlfd.exceptions import NlfdValidationException


logger = logging.getLogger(__name__)

# keeps map between family id and class registered with @register_nonlinearity_family
nonlinearity_families = {}


def register_nonlinearity_family(klass):
    """Decorator for registering nonlinearity families"""
    nonlinearity_families[klass.KIND] = klass
    return klass


def _as_nonnegative(s, name="argument"):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise NlfdValidationException("%s must be nonnegative, got min %g" % (name, np.min(s)))
    return s


def _unwrap(values):
    if np.ndim(values) == 0:
        return float(values)
    return values


class NonlinearitySpec(object):
    """Nonlinearity family, abstract; subclasses define KIND, _phi0 and _phi0_prime"""

    KIND = NotImplemented

    def __init__(self, m, A=None, dilation=1.0):
        if not 0.0 < m < 1.0:
            raise NlfdValidationException(
                "exponent m must lie in (0, 1) for fast diffusion, got %r" % (m,))
        if A is not None and not A > 0:
            raise NlfdValidationException("concavity parameter A must be positive, got %r" % (A,))
        if not dilation > 0:
            raise NlfdValidationException("dilation must be positive, got %r" % (dilation,))
        self._m = float(m)
        self._A = float(A) if A is not None else self.default_A()
        self._dilation = float(dilation)

    @property
    def m(self):
        return self._m

    @property
    def A(self):
        return self._A

    @property
    def dilation(self):
        return self._dilation

    @property
    def envelope(self):
        """ (c, C) with c s^{m-1} <= phi'(s) <= C s^{m-1} """
        raise NotImplementedError()

    @property
    def c2(self):
        """ lim_{s -> 0} phi(s) / s^m """
        return 1.0

    def default_A(self):
        return (1.0 - self._m) / self._m

    def _phi0(self, s):
        raise NotImplementedError()

    def _phi0_prime(self, s):
        raise NotImplementedError()

    def _phi(self, s):
        rho = self._dilation
        return rho ** self._m * self._phi0(s / rho)

    def _phi_prime(self, s):
        rho = self._dilation
        with np.errstate(divide='ignore'):
            return rho ** (self._m - 1.0) * self._phi0_prime(s / rho)

    def phi(self, s):
        return _unwrap(self._phi(_as_nonnegative(s)))

    def phi_prime(self, s):
        """ +inf at s = 0 """
        return _unwrap(self._phi_prime(_as_nonnegative(s)))

    def _beta(self, w):
        """
        safeguarded Newton-bisection on phi(s) = w, elementwise
        """
        shape = np.shape(w)
        w = np.atleast_1d(w)
        s = np.zeros_like(w)
        todo = w > 0
        if not np.any(todo):
            return s.reshape(shape)
        target = w[todo]
        lo = np.zeros_like(target)
        hi = np.maximum((target / self.c2) ** (1.0 / self._m), 1.0)
        while True:
            short = self._phi(hi) < target
            if not np.any(short):
                break
            lo = np.where(short, hi, lo)
            hi = np.where(short, 2.0 * hi, hi)

        current = hi.copy()
        active = np.ones(target.shape, dtype=bool)
        for _ in range(INVERSE_MAX_ITERATIONS):
            value = self._phi(current) - target
            lo = np.where(value < 0, current, lo)
            hi = np.where(value > 0, current, hi)
            slope = self._phi_prime(current)
            with np.errstate(divide='ignore', invalid='ignore'):
                proposal = current - value / slope
            bad = ~np.isfinite(proposal) | (proposal <= lo) | (proposal >= hi)
            proposal = np.where(bad, 0.5 * (lo + hi), proposal)
            converged = np.abs(proposal - current) <= INVERSE_RELATIVE_TOLERANCE * proposal
            current = np.where(active, proposal, current)
            active &= ~converged
            if not np.any(active):
                break
        else:
            logger.warning("inverse of %s did not reach tolerance on %d values",
                           self.KIND, int(np.sum(active)))
        s[todo] = current
        return s.reshape(shape)

    def beta(self, w):
        """ phi^{-1}(w) """
        return _unwrap(self._beta(_as_nonnegative(w)))

    def beta_prime(self, w):
        """ 1 / phi'(beta(w)); zero at w = 0 """
        s = self._beta(_as_nonnegative(w))
        slope = self._phi_prime(s)
        with np.errstate(divide='ignore'):
            return _unwrap(np.where(s > 0, 1.0 / slope, 0.0))

    def rescale(self, k, alpha):
        """
        phi_k(s) = k^{m alpha} phi(s / k^alpha)

        :param k: float >= 1
        :return: new NonlinearitySpec
        """
        if not k >= 1:
            raise NlfdValidationException("rescaling factor k must be >= 1, got %r" % (k,))
        rescaled = copy.copy(self)
        rescaled._dilation = self._dilation * float(k) ** alpha
        return rescaled

    def modify_for_boundedness(self, u_max):
        return BoundedModification(self, u_max)

    def params(self):
        return {}

    def to_dict(self):
        result = {
            "family": self.KIND,
            "m": self._m,
            "A": self._A,
            "dilation": self._dilation,
        }
        result.update(self.params())
        return result

    def __repr__(self):
        return "%s(%s)" % (self.__class__.__name__,
                           ", ".join("%s=%r" % kv for kv in sorted(self.to_dict().items())))


@register_nonlinearity_family
class PurePower(NonlinearitySpec):
    """ phi(s) = a s^m """

    KIND = NONLINEARITY_PURE_POWER

    def __init__(self, m, A=None, coefficient=1.0, dilation=1.0):
        super(PurePower, self).__init__(m, A=A, dilation=dilation)
        if not coefficient > 0:
            raise NlfdValidationException("coefficient must be positive, got %r" % (coefficient,))
        self._coefficient = float(coefficient)

    @property
    def coefficient(self):
        return self._coefficient

    @property
    def envelope(self):
        return (self._coefficient * self._m, self._coefficient * self._m)

    @property
    def c2(self):
        return self._coefficient

    # scale invariant: the dilation never changes the values
    def _phi(self, s):
        return self._coefficient * s ** self._m

    def _phi_prime(self, s):
        with np.errstate(divide='ignore'):
            return self._coefficient * self._m * s ** (self._m - 1.0)

    def _beta(self, w):
        return (w / self._coefficient) ** (1.0 / self._m)

    def params(self):
        return {"coefficient": self._coefficient}


@register_nonlinearity_family
class PerturbedPower(NonlinearitySpec):
    """ phi(s) = s^m (1 + epsilon s / (1 + s)) """

    KIND = NONLINEARITY_PERTURBED_POWER

    def __init__(self, m, A=None, epsilon=0.0, dilation=1.0):
        if not epsilon >= 0:
            raise NlfdValidationException("epsilon must be nonnegative, got %r" % (epsilon,))
        self._epsilon = float(epsilon)
        super(PerturbedPower, self).__init__(m, A=A, dilation=dilation)

    @property
    def epsilon(self):
        return self._epsilon

    @property
    def envelope(self):
        # s^{1-m} phi'(s) = m (1 + eps s/(1+s)) + eps s/(1+s)^2, and s/(1+s)^2 <= 1/4
        return (self._m, self._m * (1.0 + self._epsilon) + self._epsilon / 4.0)

    def _phi0(self, s):
        return s ** self._m * (1.0 + self._epsilon * s / (1.0 + s))

    def _phi0_prime(self, s):
        with np.errstate(divide='ignore', invalid='ignore'):
            value = (self._m * s ** (self._m - 1.0) * (1.0 + self._epsilon * s / (1.0 + s)) +
                     s ** self._m * self._epsilon / (1.0 + s) ** 2)
        return np.where(s == 0, np.inf, value)

    def params(self):
        return {"epsilon": self._epsilon}


class BoundedModification(NonlinearitySpec):
    """
    phi on [0, u_max], continued linearly with slope phi'(u_max) above it
    """

    KIND = NONLINEARITY_BOUNDED

    def __init__(self, base, u_max):
        if not u_max > 0:
            raise NlfdValidationException("u_max must be positive, got %r" % (u_max,))
        super(BoundedModification, self).__init__(base.m, A=base.A)
        self._base = base
        self._u_max = float(u_max)
        self._phi_max = float(base.phi(self._u_max))
        self._slope = float(base.phi_prime(self._u_max))

    @property
    def base(self):
        return self._base

    @property
    def u_max(self):
        return self._u_max

    @property
    def envelope(self):
        """ valid on [0, u_max] only """
        return self._base.envelope

    @property
    def c2(self):
        return self._base.c2

    def _phi(self, s):
        inside = np.minimum(s, self._u_max)
        return np.where(s <= self._u_max,
                        self._base._phi(inside),
                        self._phi_max + self._slope * (s - self._u_max))

    def _phi_prime(self, s):
        inside = np.minimum(s, self._u_max)
        return np.where(s <= self._u_max, self._base._phi_prime(inside), self._slope)

    def _beta(self, w):
        inside = np.minimum(w, self._phi_max)
        return np.where(w <= self._phi_max,
                        self._base._beta(inside),
                        self._u_max + (w - self._phi_max) / self._slope)

    def rescale(self, k, alpha):
        raise NlfdValidationException("rescale the base nonlinearity, then modify it")

    def params(self):
        return {"u_max": self._u_max, "base": self._base.to_dict()}


def make_nonlinearity(family, m, **params):
    try:
        klass = nonlinearity_families[family]
    except KeyError:
        raise NlfdValidationException("unknown nonlinearity family %r, expected one of %s" %
                                      (family, sorted(nonlinearity_families)))
    try:
        return klass(m, **params)
    except TypeError as ex:
        raise NlfdValidationException("bad parameters for nonlinearity %r: %s" % (family, ex))


def rescale_phi(spec, k, alpha):
    return spec.rescale(k, alpha)


def modify_for_boundedness(spec, u_max):
    return spec.modify_for_boundedness(u_max)


class HphiReport(object):
    def __init__(self, increasing_ok, concavity_ok, envelope_ok, A, c, C, m):
        self.increasing_ok = increasing_ok
        self.concavity_ok = concavity_ok
        self.envelope_ok = envelope_ok
        self.A = A
        self.c = c
        self.C = C
        self.m = m

    @property
    def ok(self):
        return self.increasing_ok and self.concavity_ok and self.envelope_ok

    def to_dict(self):
        return dict(self.__dict__)

    def __repr__(self):
        return "HphiReport(%r)" % self.to_dict()


def validate_hphi(spec, sample_budget=2000, tolerance=HPHI_TOLERANCE, sample_range=None):
    """
    scan phi on a log-spaced sample of s

    concavity of phi^{1+A} is tested through its secant slopes, which must not
    increase by more than `tolerance` relative.

    :return: HphiReport
    """
    low, high = sample_range or HPHI_SAMPLE_RANGE
    s = np.logspace(np.log10(low), np.log10(high), sample_budget)
    values = spec.phi(s)
    slopes = spec.phi_prime(s)
    increasing_ok = bool(np.all(np.diff(values) > 0) and np.all(slopes > 0))

    powered = values ** (1.0 + spec.A)
    secants = np.diff(powered) / np.diff(s)
    growth = np.diff(secants)
    concavity_ok = bool(np.all(growth <= tolerance * np.abs(secants[:-1])))

    c, C = spec.envelope
    scaled = s ** (1.0 - spec.m) * slopes
    envelope_ok = bool(np.all(scaled >= c * (1.0 - tolerance)) and
                       np.all(scaled <= C * (1.0 + tolerance)))

    report = HphiReport(increasing_ok, concavity_ok, envelope_ok, spec.A, c, C, spec.m)
    logger.debug("nonlinearity %r validated: %r", spec, report)
    return report
