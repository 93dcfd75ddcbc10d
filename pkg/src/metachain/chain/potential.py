"""
The quartic double well chain on the periodic lattice ``Z/NZ``.

.. math::

    F(x) = \\sum_i \\left(\\frac{x_i^4}{4} - \\frac{x_i^2}{2}\\right) + \\frac{\\gamma}{4}\\sum_i (x_i - x_{i+1})^2

All functions accept a single state of shape ``(n,)`` or a stack of states of shape ``(..., n)`` and evaluate along
the last axis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from metachain.util.error import DimensionError, DomainError, RegimeError

from .spectral import gamma_threshold


def _particle_count(n):
    """``n`` as an ``int``; ``3.0`` is fine, ``3.5``, ``True`` or ``"3"`` are not."""
    if isinstance(n, (bool, np.bool_)) or not isinstance(n, (int, float, np.integer, np.floating)):
        msg = f"the number of particles must be an integer, got n={n!r}"
        raise DomainError(msg)
    if not np.isfinite(n) or int(n) != n:
        msg = f"the number of particles must be an integer, got n={n!r}"
        raise DomainError(msg)
    return int(n)


@dataclass(frozen=True)
class ChainParams:
    """A problem instance: ``n`` particles, coupling ``gamma = mu * gamma_1^n`` and noise intensity ``epsilon``."""

    n: int
    mu: float
    gamma: float
    epsilon: float
    canonical: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            msg = f"the chain needs at least one particle, got n={self.n}"
            raise DomainError(msg)
        if not self.epsilon > 0:
            msg = f"noise intensity must be positive, got epsilon={self.epsilon}"
            raise DomainError(msg)
        if self.gamma < 0:
            msg = f"coupling must be non negative, got gamma={self.gamma}"
            raise DomainError(msg)

    @classmethod
    def create(cls, n, mu, epsilon):
        """Canonical instance, the coupling is derived as ``mu * gamma_1^n``."""
        n = _particle_count(n)
        if n == 1:
            return cls.single_well(epsilon)
        if n < 2:  # noqa: PLR2004
            msg = f"the chain needs at least two particles, got n={n}"
            raise DomainError(msg)
        threshold = gamma_threshold(n)
        if not mu > 1:
            raise RegimeError(n, mu * threshold, threshold)
        params = cls(n=n, mu=float(mu), gamma=float(mu) * threshold, epsilon=float(epsilon))
        logging.debug("created %r", params)
        return params

    @classmethod
    def from_gamma(cls, n, gamma, epsilon):
        """Exploration constructor taking the raw coupling, flagged as non canonical."""
        n = _particle_count(n)
        if n == 1:
            return cls.single_well(epsilon)
        mu = float(gamma) / gamma_threshold(n) if n >= 2 else 0.0  # noqa: PLR2004
        return cls(n=n, mu=mu, gamma=float(gamma), epsilon=float(epsilon), canonical=False)

    @classmethod
    def single_well(cls, epsilon):
        """The one particle reference problem ``x^4/4 - x^2/2`` (no coupling)."""
        return cls(n=1, mu=float("inf"), gamma=0.0, epsilon=float(epsilon))

    @property
    def threshold(self):
        return gamma_threshold(self.n) if self.n >= 2 else 0.0  # noqa: PLR2004

    @property
    def synchronized(self):
        return self.n == 1 or self.gamma > self.threshold

    def require_synchronized(self):
        if not self.synchronized:
            raise RegimeError(self.n, self.gamma, self.threshold)
        return self

    def with_epsilon(self, epsilon):
        return type(self)(self.n, self.mu, self.gamma, float(epsilon), self.canonical)

    def __str__(self) -> str:
        if self.n == 1:
            return f"n=1 (single well) epsilon={self.epsilon:g}"
        flag = "" if self.canonical else " (raw gamma)"
        return f"n={self.n} mu={self.mu:g} gamma={self.gamma:g}{flag} epsilon={self.epsilon:g}"


class StationaryPoints(NamedTuple):
    I_minus: np.ndarray  # noqa: N815
    I_plus: np.ndarray  # noqa: N815
    O: np.ndarray  # noqa: E741


def as_state(p, x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 0 or x.shape[-1] != p.n:
        raise DimensionError(p.n, x.shape[-1] if x.ndim else 0)
    return x


def _laplacian(x):
    return 2.0 * x - np.roll(x, 1, axis=-1) - np.roll(x, -1, axis=-1)


def eval_F(p, x):  # noqa: N802
    x = as_state(p, x)
    x2 = x * x
    site = np.sum(0.25 * x2 * x2 - 0.5 * x2, axis=-1)
    bond = x - np.roll(x, -1, axis=-1)
    return site + 0.25 * p.gamma * np.sum(bond * bond, axis=-1)


def eval_G(p, x):  # noqa: N802
    """The rescaled potential ``F / n``."""
    return eval_F(p, x) / p.n


def grad_F(p, x):  # noqa: N802
    x = as_state(p, x)
    return x * x * x - x + 0.5 * p.gamma * _laplacian(x)


def grad_G(p, x):  # noqa: N802
    return grad_F(p, x) / p.n


def hessian_F(p, x):  # noqa: N802
    x = as_state(p, x)
    if x.ndim != 1:
        raise DimensionError(p.n, x.shape)
    n = p.n
    hessian = np.diag(3.0 * x * x - 1.0 + p.gamma)
    if n == 1:
        return hessian
    rows = np.arange(n)
    # for n=2 both neighbors are the same site, add.at accumulates the two bonds
    np.add.at(hessian, (rows, (rows + 1) % n), -0.5 * p.gamma)
    np.add.at(hessian, (rows, (rows - 1) % n), -0.5 * p.gamma)
    return hessian


def stationary_points(p):
    """The two synchronized minima ``I_-``, ``I_+`` and the saddle ``O``, the only ones in the regime."""
    p.require_synchronized()
    ones = np.ones(p.n)
    return StationaryPoints(I_minus=-ones, I_plus=ones.copy(), O=np.zeros(p.n))


__all__ = [
    "ChainParams",
    "StationaryPoints",
    "as_state",
    "eval_F",
    "eval_G",
    "grad_F",
    "grad_G",
    "hessian_F",
    "stationary_points",
]
