"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.


Stable-like interaction kernels J(x, y).

Every family is written as

    J(x, y) = mu_{N,sigma} |x - y|^{-(N+sigma)} * factor(lambda x, lambda y)

with lambda the accumulated dilation of the kernel. Dilating a kernel,
J_lambda(x, y) = lambda^{N+sigma} J(lambda x, lambda y), therefore only moves the
points the factor is evaluated at.
"""
from __future__ import print_function, absolute_import, unicode_literals, division

import copy
import logging

import numpy as np
from scipy.special import gamma

from nlfd.constants import (KERNEL_FRACTIONAL_POWER, KERNEL_CONVOLUTION_MODULATED,
                            KERNEL_MIDPOINT_GENERAL, KERNEL_VALIDATION_TOLERANCE,
                            KERNEL_VALIDATION_MIN_SAMPLES, SUPPORTED_DIMENSIONS, DEFAULT_SEED)
from nlfd.exceptions import NlfdValidationException, KernelSingularityException


logger = logging.getLogger(__name__)

MODULATION_DAMPED_COS = "damped_cos"
MODULATION_COS = "cos"
MODULATIONS = (MODULATION_DAMPED_COS, MODULATION_COS)

# keeps map between family id and class registered with @register_kernel_family
kernel_families = {}


def register_kernel_family(klass):
    """Decorator for registering kernel families"""
    kernel_families[klass.KIND] = klass
    return klass


def normalization_constant(dim, sigma):
    """
    mu_{N,sigma} = 2^{sigma-1} sigma Gamma((N+sigma)/2) / (pi^{N/2} Gamma(1-sigma/2))
    """
    return (2.0 ** (sigma - 1.0) * sigma * gamma((dim + sigma) / 2.0) /
            (np.pi ** (dim / 2.0) * gamma(1.0 - sigma / 2.0)))


def as_points(points, dim):
    """
    :return: float ndarray whose last axis has length dim
    """
    points = np.asarray(points, dtype=float)
    if dim == 1 and (points.ndim == 0 or points.shape[-1] != 1):
        points = points[..., np.newaxis]
    if points.shape[-1] != dim:
        raise NlfdValidationException("points must have %d coordinates, got shape %s" %
                                      (dim, points.shape))
    return points


class KernelSpec(object):
    """Kernel family, abstract; subclasses define KIND and _factor"""

    KIND = NotImplemented
    # J(x, x + z) == J(x, x - z) for every x, z
    Z_EVEN = True
    # J(x, y) depends on x - y only
    TRANSLATION_INVARIANT = True

    def __init__(self, dim, sigma, dilation=1.0):
        errors = []
        if dim not in SUPPORTED_DIMENSIONS:
            errors.append("dim must be one of %s, got %r" % (SUPPORTED_DIMENSIONS, dim))
        if not 0.0 < sigma < 2.0:
            errors.append("sigma must lie in the open interval (0, 2), got %r" % (sigma,))
        if not dilation > 0:
            errors.append("dilation must be positive, got %r" % (dilation,))
        if errors:
            raise NlfdValidationException("; ".join(errors))
        self._dim = int(dim)
        self._sigma = float(sigma)
        self._dilation = float(dilation)
        self._mu = normalization_constant(self._dim, self._sigma)

    @property
    def dim(self):
        return self._dim

    @property
    def sigma(self):
        return self._sigma

    @property
    def dilation(self):
        return self._dilation

    @property
    def mu(self):
        return self._mu

    @property
    def ellipticity(self):
        """ Lambda, derived from the family parameters """
        return 1.0

    @property
    def c1(self):
        """ lim |x-y|^{N+sigma} J(x, y) as |x-y| grows, None if there is no limit """
        return self._mu

    @property
    def tail_ratio(self):
        """ far-field weight relative to the normalized power kernel """
        return 1.0 if self.c1 is None else self.c1 / self._mu

    def _factor(self, x, y):
        raise NotImplementedError()

    def evaluate(self, x, y):
        """
        J(x, y), vectorized over leading axes

        :param x: point or array of points, last axis of length N (bare floats for N = 1)
        :param y: same as x
        :return: float or ndarray
        """
        x = as_points(x, self._dim)
        y = as_points(y, self._dim)
        r = np.sqrt(np.sum((x - y) ** 2, axis=-1))
        if np.any(r == 0):
            raise KernelSingularityException("kernel evaluated at coincident points")
        values = (self._mu * r ** (-(self._dim + self._sigma)) *
                  self._factor(self._dilation * x, self._dilation * y))
        if np.ndim(values) == 0:
            return float(values)
        return values

    def local_coefficient(self, x):
        """ lim_{z -> 0} |z|^{N+sigma} J(x, x+z) / mu, per point """
        x = as_points(x, self._dim)
        return self._factor(self._dilation * x, self._dilation * x)

    def rescale(self, k, alpha):
        """
        J_k(x, y) = k^{alpha(N+sigma)/N} J(k^{alpha/N} x, k^{alpha/N} y)

        :param k: float >= 1
        :param alpha: similarity exponent
        :return: new KernelSpec
        """
        if not k >= 1:
            raise NlfdValidationException("rescaling factor k must be >= 1, got %r" % (k,))
        rescaled = copy.copy(self)
        rescaled._dilation = self._dilation * float(k) ** (alpha / self._dim)
        return rescaled

    def params(self):
        return {}

    def to_dict(self):
        result = {
            "family": self.KIND,
            "dim": self._dim,
            "sigma": self._sigma,
            "dilation": self._dilation,
        }
        result.update(self.params())
        return result

    def __repr__(self):
        return "%s(%s)" % (self.__class__.__name__,
                           ", ".join("%s=%r" % kv for kv in sorted(self.to_dict().items())))


@register_kernel_family
class FractionalPowerKernel(KernelSpec):
    """ mu_{N,sigma} |x - y|^{-(N+sigma)}, the fractional Laplacian kernel """

    KIND = KERNEL_FRACTIONAL_POWER

    def _factor(self, x, y):
        return np.ones(np.broadcast(x[..., 0], y[..., 0]).shape)


class ModulatedKernel(KernelSpec):
    """ families of the form mu r^{-(N+sigma)} (1 + epsilon * g) """

    def __init__(self, dim, sigma, epsilon=0.0, dilation=1.0):
        super(ModulatedKernel, self).__init__(dim, sigma, dilation=dilation)
        if not 0.0 <= epsilon < 1.0:
            raise NlfdValidationException("epsilon must lie in [0, 1), got %r" % (epsilon,))
        self._epsilon = float(epsilon)

    @property
    def epsilon(self):
        return self._epsilon

    @property
    def ellipticity(self):
        return 1.0 / (1.0 - self._epsilon)

    def params(self):
        return {"epsilon": self._epsilon}


@register_kernel_family
class ConvolutionModulatedKernel(ModulatedKernel):
    """
    J(x, y) = mu |x-y|^{-(N+sigma)} (1 + epsilon g(|x-y|))

    g is cos r / (1 + r^2) (damped_cos) or cos r (cos). Only the damped
    modulation has a far-field limit, so only it declares c1.
    """

    KIND = KERNEL_CONVOLUTION_MODULATED

    def __init__(self, dim, sigma, epsilon=0.0, modulation=MODULATION_DAMPED_COS, dilation=1.0):
        super(ConvolutionModulatedKernel, self).__init__(dim, sigma, epsilon=epsilon,
                                                         dilation=dilation)
        if modulation not in MODULATIONS:
            raise NlfdValidationException("unknown modulation %r, expected one of %s" %
                                          (modulation, MODULATIONS))
        self._modulation = modulation

    @property
    def modulation(self):
        return self._modulation

    @property
    def c1(self):
        if self._modulation == MODULATION_COS and self._epsilon > 0:
            return None
        return self._mu

    def _factor(self, x, y):
        r = np.sqrt(np.sum((x - y) ** 2, axis=-1))
        g = np.cos(r)
        if self._modulation == MODULATION_DAMPED_COS:
            g = g / (1.0 + r ** 2)
        return 1.0 + self._epsilon * g

    def params(self):
        result = super(ConvolutionModulatedKernel, self).params()
        result["modulation"] = self._modulation
        return result


@register_kernel_family
class MidpointGeneralKernel(ModulatedKernel):
    """
    J(x, y) = mu |x-y|^{-(N+sigma)} (1 + epsilon s(x) s(y)), s(x) = prod_d sin(x_d)

    Symmetric in (x, y) but not even in z = y - x, hence restricted to sigma < 1.
    """

    KIND = KERNEL_MIDPOINT_GENERAL
    Z_EVEN = False
    TRANSLATION_INVARIANT = False

    def __init__(self, dim, sigma, epsilon=0.0, dilation=1.0):
        if not sigma < 1.0:
            raise NlfdValidationException(
                "%s is not even in z and needs sigma < 1, got %r" % (self.KIND, sigma))
        super(MidpointGeneralKernel, self).__init__(dim, sigma, epsilon=epsilon,
                                                    dilation=dilation)

    @property
    def c1(self):
        return None if self._epsilon > 0 else self._mu

    def _factor(self, x, y):
        return 1.0 + self._epsilon * np.prod(np.sin(x), axis=-1) * np.prod(np.sin(y), axis=-1)


def make_kernel(family, dim, sigma, **params):
    try:
        klass = kernel_families[family]
    except KeyError:
        raise NlfdValidationException("unknown kernel family %r, expected one of %s" %
                                      (family, sorted(kernel_families)))
    try:
        return klass(dim, sigma, **params)
    except TypeError as ex:
        raise NlfdValidationException("bad parameters for kernel %r: %s" % (family, ex))


def eval_kernel(kernel, x, y):
    return kernel.evaluate(x, y)


def rescale(kernel, k, alpha):
    return kernel.rescale(k, alpha)


class KernelValidationReport(object):
    def __init__(self, swap_symmetry_ok, z_evenness_ok, envelope_ok, worst_ratio,
                 upper_ratio, samples):
        self.swap_symmetry_ok = swap_symmetry_ok
        self.z_evenness_ok = z_evenness_ok
        self.envelope_ok = envelope_ok
        self.worst_ratio = worst_ratio
        self.upper_ratio = upper_ratio
        self.samples = samples

    def to_dict(self):
        return dict(self.__dict__)

    def __repr__(self):
        return "KernelValidationReport(%r)" % self.to_dict()


def _sample_pairs(dim, budget, rng, box=10.0):
    x = rng.uniform(-box, box, size=(budget, dim))
    direction = rng.normal(size=(budget, dim))
    direction /= np.linalg.norm(direction, axis=-1, keepdims=True)
    radius = 10.0 ** rng.uniform(-3.0, 3.0, size=(budget, 1))
    return x, direction * radius


def validate_hj(kernel, sample_budget=KERNEL_VALIDATION_MIN_SAMPLES, seed=DEFAULT_SEED,
                tolerance=KERNEL_VALIDATION_TOLERANCE):
    """
    sample swap symmetry, z-evenness and the Lambda-envelope on random pairs

    Ratios are measured against the normalized power kernel: rho = J r^{N+sigma} / mu,
    worst_ratio = max(rho, 1/rho) over the samples.

    :return: KernelValidationReport
    """
    if sample_budget < KERNEL_VALIDATION_MIN_SAMPLES:
        raise NlfdValidationException("kernel validation needs at least %d samples" %
                                      KERNEL_VALIDATION_MIN_SAMPLES)
    rng = np.random.RandomState(seed)
    x, z = _sample_pairs(kernel.dim, sample_budget, rng)
    y = x + z

    forward = kernel.evaluate(x, y)
    backward = kernel.evaluate(y, x)
    swap_ok = bool(np.all(np.abs(forward - backward) <= tolerance * np.abs(forward)))

    mirrored = kernel.evaluate(x, x - z)
    even_ok = bool(np.all(np.abs(forward - mirrored) <= tolerance * np.abs(forward)))

    # same rounding as evaluate(), which measures x - y
    r = np.sqrt(np.sum((x - y) ** 2, axis=-1))
    rho = forward * r ** (kernel.dim + kernel.sigma) / kernel.mu
    lam = kernel.ellipticity
    envelope_ok = bool(np.all(rho <= lam * (1.0 + tolerance)) and
                       np.all(rho >= (1.0 - tolerance) / lam))
    worst = float(max(np.max(rho), np.max(1.0 / rho)))

    report = KernelValidationReport(swap_ok, even_ok, envelope_ok, worst,
                                    float(np.max(rho)), sample_budget)
    logger.debug("kernel %r validated: %r", kernel, report)
    return report


def check_admissible(kernel, report=None):
    """
    raise NlfdValidationException if the sampled properties are not enough
    for an operator with this sigma
    """
    report = report or validate_hj(kernel)
    problems = []
    if not report.swap_symmetry_ok:
        problems.append("kernel is not symmetric in (x, y)")
    if not report.envelope_ok:
        problems.append("kernel leaves its envelope (worst ratio %g > %g)" %
                        (report.worst_ratio, kernel.ellipticity))
    if kernel.sigma >= 1.0 and not report.z_evenness_ok:
        problems.append("kernel is not even in z and sigma = %g >= 1" % kernel.sigma)
    if problems:
        raise NlfdValidationException("; ".join(problems))
    return report


def far_field_deviation(kernel, radius, sample_budget=KERNEL_VALIDATION_MIN_SAMPLES,
                        seed=DEFAULT_SEED):
    """
    sup over sampled |z| >= radius of |J(x, x+z)|z|^{N+sigma} - c1| / c1

    :return: float, or None when the family has no far-field limit
    """
    if kernel.c1 is None:
        return None
    rng = np.random.RandomState(seed)
    x = rng.uniform(-10.0, 10.0, size=(sample_budget, kernel.dim))
    direction = rng.normal(size=(sample_budget, kernel.dim))
    direction /= np.linalg.norm(direction, axis=-1, keepdims=True)
    r = radius * 10.0 ** rng.uniform(0.0, 3.0, size=sample_budget)
    z = direction * r[:, np.newaxis]
    values = kernel.evaluate(x, x + z) * r ** (kernel.dim + kernel.sigma)
    return float(np.max(np.abs(values - kernel.c1)) / kernel.c1)
