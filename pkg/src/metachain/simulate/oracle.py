"""Exact mean hitting time of the one dimensional double well, by nested adaptive quadrature."""

from __future__ import annotations

import logging
import math

from scipy.integrate import quad

from metachain.util.error import DomainError, QuadratureToleranceError

_EPSREL = 1e-8
_ACCEPT = 1e-5


def _well(x):
    return 0.25 * x**4 - 0.5 * x * x


def _quad(func, low, high):
    value, error = quad(func, low, high, epsabs=0.0, epsrel=_EPSREL, limit=200)
    if not math.isfinite(value) or error > _ACCEPT * abs(value):
        msg = f"quadrature on [{low}, {high}] stalled at {value:.6g} +- {error:.3g}"
        raise QuadratureToleranceError(msg)
    return value


def mean_hitting_1d(epsilon, a, b):
    """
    Mean time for ``dX = -G'(X) dt + sqrt(2 eps) dB`` started at ``a`` to reach ``b``, ``G(x) = x^4/4 - x^2/2``.

    .. math::

        \\frac{1}{\\varepsilon} \\int_a^b e^{G(y)/\\varepsilon} \\int_{-\\infty}^y e^{-G(u)/\\varepsilon} \\, du \\, dy

    Both exponentials are measured from the well bottom ``G(-1) = -1/4`` so neither overflows.
    """
    if not epsilon > 0:
        msg = f"noise intensity must be positive, got epsilon={epsilon}"
        raise DomainError(msg)
    if not a < b:
        msg = f"need a < b, got a={a} b={b}"
        raise DomainError(msg)

    def inner(y):
        # split at the well bottom, the mass concentrates there
        def weight(u):
            return math.exp(-(_well(u) + 0.25) / epsilon)

        value = _quad(weight, -math.inf, min(y, -1.0))
        if y > -1.0:
            value += _quad(weight, -1.0, y)
        return value

    def outer(y):
        return math.exp((_well(y) + 0.25) / epsilon) * inner(y)

    points = [x for x in (-1.0, 0.0) if a < x < b]
    edges = [a, *points, b]
    result = math.fsum(_quad(outer, low, high) for low, high in zip(edges, edges[1:])) / epsilon
    logging.debug("exact 1d mean hitting time eps=%g from %g to %g: %.10g", epsilon, a, b, result)
    return result


__all__ = [
    "mean_hitting_1d",
]
