"""
Closed form spectra of the chain Hessians, the prefactor ``c_N`` and the Eyring-Kramers mean time predictions.

The Hessian at the saddle ``O`` is circulant, its eigenvalues are ``lambda_0 = -1`` and
``lambda_k = -1 + gamma / gamma_k^N`` with ``gamma_k^N = 1 / (2 sin^2(k pi / N))``; at the minima every eigenvalue is
shifted by three. Determinants are only ever handled through their logarithms, accumulated with :func:`math.fsum`.
"""

from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from metachain.util.error import DomainError

LOG_FLOAT_MAX = math.log(sys.float_info.max)
_V_MU_CHUNK = 1 << 20


def gamma_threshold(n):
    """Coupling above which the only stationary points are ``I_-``, ``I_+`` and ``O``."""
    if n < 2:  # noqa: PLR2004
        msg = f"the synchronization threshold needs n >= 2, got {n}"
        raise DomainError(msg)
    return 1.0 / (2.0 * math.sin(math.pi / n) ** 2)


def _two_sin_squared(n):
    """``2 sin^2(k pi / n)`` for ``k = 0..n-1``, mirrored so that entries ``k`` and ``n - k`` are bit identical."""
    k = np.arange(n // 2 + 1)
    half = 2.0 * np.sin(k * np.pi / n) ** 2
    return np.concatenate([half, half[1 : (n + 1) // 2][::-1]])


@dataclass(frozen=True)
class Spectrum:
    lam: np.ndarray
    nu: np.ndarray
    gamma_k: np.ndarray  # gamma_k^N for k = 1..N-1

    @property
    def n(self):
        return len(self.lam)

    def rows(self):
        """``(k, gamma_k, lambda_k, nu_k)`` rows, ``gamma_0`` is undefined and reported as ``inf``."""
        gammas = np.concatenate([[math.inf], self.gamma_k])
        return [(k, float(gammas[k]), float(self.lam[k]), float(self.nu[k])) for k in range(self.n)]


def spectrum(p):
    n = p.n
    weights = _two_sin_squared(n)
    lam = -1.0 + p.gamma * weights
    lam[0] = -1.0
    with np.errstate(divide="ignore"):
        gamma_k = 1.0 / weights[1:]
    return Spectrum(lam=lam, nu=lam + 3.0, gamma_k=gamma_k)


def eigenvalue_bounds(p):
    """
    Bracket of ``lambda_k`` for ``1 <= k <= N/2`` that only uses ``k^2``.

    :return: ``(k, lower, upper)`` arrays with ``mu a k^2 - 1 <= lambda_k <= mu k^2 / (1 - pi^2 / 3N^2) - 1``
        where ``a = 1 - pi^2 / 12``
    """
    k = np.arange(1, p.n // 2 + 1, dtype=np.float64)
    lower = p.mu * (1.0 - math.pi**2 / 12.0) * k * k - 1.0
    upper = p.mu * k * k / (1.0 - math.pi**2 / (3.0 * p.n * p.n)) - 1.0
    return k.astype(int), lower, upper


@dataclass(frozen=True)
class PrefactorReport:
    c_n_product: float
    half_logdet_O: float  # noqa: N815
    half_logdet_Imin: float  # noqa: N815
    det_ratio: float
    v_mu: float
    v_mu_tail_bound: float

    @property
    def log_det_ratio(self):
        return self.half_logdet_O - self.half_logdet_Imin


@lru_cache(maxsize=256)
def prefactor(p):
    p.require_synchronized()
    n = p.n
    s = spectrum(p)
    log_terms = [math.log1p(-3.0 / (2.0 + p.gamma * w)) for w in _two_sin_squared(n)[1 : (n - 1) // 2 + 1]]
    if n % 2 == 0:
        log_terms.append(0.5 * math.log1p(-3.0 / (2.0 + 2.0 * p.gamma)))
    half_logdet_o = 0.5 * math.fsum(np.log(np.abs(s.lam)).tolist())
    half_logdet_i = 0.5 * math.fsum(np.log(s.nu).tolist())
    value, tail = v_mu(p.mu) if math.isfinite(p.mu) else (1.0, 0.0)
    report = PrefactorReport(
        c_n_product=math.exp(math.fsum(log_terms)),
        half_logdet_O=half_logdet_o,
        half_logdet_Imin=half_logdet_i,
        det_ratio=math.exp(half_logdet_o - half_logdet_i),
        v_mu=value,
        v_mu_tail_bound=tail,
    )
    logging.debug("prefactor for %s: %r", p, report)
    return report


def default_v_mu_terms(mu, rel_tol):
    return max(10_000, math.ceil(3.0 / (mu * rel_tol)))


def _log_partial_product(mu, terms):
    chunks = []
    for start in range(1, terms + 1, _V_MU_CHUNK):
        k = np.arange(start, min(start + _V_MU_CHUNK, terms + 1), dtype=np.float64)
        chunks.append(float(np.sum(np.log1p(-3.0 / (mu * k * k + 2.0)))))
    return math.fsum(chunks)


def _log_tail(mu, terms):
    # sum_{k>K} -log(1 - v_k) <= sum_{k>K} 3 / (mu k^2 - 1) <= integral from K to infinity
    root = math.sqrt(mu) * terms
    return 1.5 / math.sqrt(mu) * math.log1p(2.0 / (root - 1.0))


@lru_cache(maxsize=64)
def v_mu(mu, rel_tol=1e-6, terms=None):
    """
    Infinite product ``prod_k (mu k^2 - 1) / (mu k^2 + 2)``, the large ``N`` limit of ``c_N``.

    :param mu: coupling ratio, must be above one
    :param rel_tol: requested relative enclosure of the truncation
    :param terms: number of factors to multiply, defaults to ``max(10^4, ceil(3 / (mu rel_tol)))``
    :return: ``(value, tail_bound)`` such that the limit lies in ``[value - tail_bound, value]``
    """
    if not mu > 1:
        msg = f"the product vanishes for mu <= 1 (factor mu k^2 - 1 hits zero), got mu={mu}"
        raise DomainError(msg)
    if not rel_tol > 0:
        msg = f"rel_tol must be positive, got {rel_tol}"
        raise DomainError(msg)
    terms = default_v_mu_terms(mu, rel_tol) if terms is None else int(terms)
    while -math.expm1(-_log_tail(mu, terms)) > rel_tol:
        terms *= 2
    value = math.exp(_log_partial_product(mu, terms))
    tail_bound = -value * math.expm1(-_log_tail(mu, terms))
    logging.debug("V(mu=%g) = %.12g with %d factors, tail bound %.3g", mu, value, terms, tail_bound)
    return value, tail_bound


class TimePrediction(NamedTuple):
    log_time: float
    time: float | None  # ``None`` when the linear value does not fit in a double
    overflow: bool

    @classmethod
    def from_log(cls, log_time):
        if log_time < LOG_FLOAT_MAX:
            return cls(log_time, math.exp(log_time), overflow=False)
        return cls(log_time, None, overflow=True)


class RescaledPrediction(NamedTuple):
    determinant: TimePrediction
    literal: TimePrediction

    @property
    def ratio_literal_over_determinant(self):
        return math.exp(self.literal.log_time - self.determinant.log_time)


def predict_mean_time_fixed_N(p):  # noqa: N802
    """Eyring-Kramers mean transition time for the unrescaled potential ``F``, determinant form."""
    report = prefactor(p)
    return TimePrediction.from_log(math.log(2.0 * math.pi) + report.log_det_ratio + p.n / (4.0 * p.epsilon))


def predict_mean_time_rescaled(p):
    """
    Mean transition time for the dynamics driven by ``G = F / N``.

    Two conventions are reported: the determinant form ``2 pi N sqrt(|det O| / det I_-) e^{1/4eps}`` and the literal
    ``2 pi N c_N e^{1/4eps}`` with ``c_N`` read from its product formula. The two differ by a factor ``sqrt(2)``.
    """
    report = prefactor(p)
    barrier = 1.0 / (4.0 * p.epsilon)
    log_n_2pi = math.log(p.n) + math.log(2.0 * math.pi)
    return RescaledPrediction(
        determinant=TimePrediction.from_log(log_n_2pi + report.log_det_ratio + barrier),
        literal=TimePrediction.from_log(log_n_2pi + math.log(report.c_n_product) + barrier),
    )


def predict_mean_time_limit(p):
    """The infinite dimensional prediction ``2 pi N V(mu) e^{1/4eps}``."""
    report = prefactor(p)
    return TimePrediction.from_log(
        math.log(p.n) + math.log(2.0 * math.pi) + math.log(report.v_mu) + 1.0 / (4.0 * p.epsilon),
    )


def mass_asymptotic(p):
    """Log of the mass of the equilibrium potential, ``N^{N/2} sqrt(2 pi eps)^N e^{1/4eps} / sqrt(det I_-)``."""
    report = prefactor(p)
    n = p.n
    return 0.5 * n * math.log(n) + 0.5 * n * math.log(2.0 * math.pi * p.epsilon) + 0.25 / p.epsilon - (
        report.half_logdet_Imin
    )


class ConvergenceRow(NamedTuple):
    n: int
    c_n: float
    det_ratio: float
    v_mu: float
    gap: float
    scaled_gap: float


def convergence_table(mu, ns, epsilon=1.0):
    """Convergence of ``c_N`` towards ``V(mu)`` along the given chain lengths."""
    from .potential import ChainParams  # noqa: PLC0415

    rows = []
    for n in ns:
        report = prefactor(ChainParams.create(n, mu, epsilon))
        gap = abs(report.c_n_product - report.v_mu)
        rows.append(ConvergenceRow(n, report.c_n_product, report.det_ratio, report.v_mu, gap, n * gap))
    return rows


__all__ = [
    "ConvergenceRow",
    "PrefactorReport",
    "RescaledPrediction",
    "Spectrum",
    "TimePrediction",
    "convergence_table",
    "eigenvalue_bounds",
    "gamma_threshold",
    "mass_asymptotic",
    "predict_mean_time_fixed_N",
    "predict_mean_time_limit",
    "predict_mean_time_rescaled",
    "prefactor",
    "spectrum",
    "v_mu",
]
