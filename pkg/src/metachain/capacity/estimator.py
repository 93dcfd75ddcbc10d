"""
Bracketing the capacity ``cap(B_-, B_+)`` of the rescaled chain with explicit test functions.

Both bounds are computed in the orthonormal mode coordinates ``w`` (see
:meth:`metachain.chain.fourier.ModeVector.real_coordinates`), in which the Dirichlet form reads

.. math::

    \\Phi(h) = N^{N/2 - 1} \\varepsilon \\int e^{-\\tilde G(w) / \\varepsilon} |\\nabla_w h|^2 \\, dw

The quartic part of the potential is split along the saddle direction: with ``y = x(N z_perp)`` (which sums to zero)
``sum_i (z_0 + y_i)^4 = N z_0^4 + 6 z_0^2 S_2 + 4 z_0 S_3 + S_4`` where ``S_j = sum_i y_i^j``, so the one dimensional
integrals over ``z_0`` are cheap once the transverse sample is fixed. Every estimate stays in log scale.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import erf
from scipy.stats import truncnorm

from metachain.chain.fourier import ModeVector, NeighborhoodSpec, slot_modes, slot_multiplicity, state_of
from metachain.chain.spectral import prefactor, spectrum
from metachain.simulate.rng import stream
from metachain.util.error import DomainError, GeometryError, StatisticalToleranceError

DEFAULT_DELTA_CAP = 0.5
_QUAD_EPSREL = 1e-9


@dataclass(frozen=True)
class CapacityBudget:
    """
    How much work the estimators may spend.

    :param samples: Monte Carlo samples of the transverse modes
    :param order: points per dimension of the tensor rules (used while the transverse dimension is small)
    :param seed: seed of the sample streams, block ``i`` draws from ``(seed, i)``
    :param workers: processes evaluating sample blocks
    :param block: samples per stream block, results do not depend on ``workers``
    :param max_rel_error: largest accepted standard error of the log estimate
    :param tensor_max_dim: transverse dimension up to which tensor quadrature is used
    """

    samples: int = 20_000
    order: int = 32
    seed: int = 0
    workers: int = 1
    block: int = 2048
    max_rel_error: float = 0.25
    tensor_max_dim: int = 3

    def __post_init__(self) -> None:
        if self.samples < 2 or self.order < 4 or self.block < 1 or self.workers < 1:  # noqa: PLR2004
            msg = f"invalid capacity budget {self}"
            raise DomainError(msg)


class CapacityEstimate(NamedTuple):
    log_value: float
    std_error: float  # of the log value
    method: str
    evaluations: int


@dataclass(frozen=True, eq=False)
class CapacityBracket:
    lower: float
    upper: float
    asymptotic: float
    params: object
    spec: NeighborhoodSpec
    lower_error: float = 0.0
    upper_error: float = 0.0
    method: dict = field(default_factory=dict)

    @property
    def ordered(self):
        """``lower <= upper`` up to two combined standard errors."""
        return self.lower - self.upper <= 2.0 * math.hypot(self.lower_error, self.upper_error)

    def __str__(self) -> str:
        return (
            f"log cap in [{self.lower:.6g} +- {self.lower_error:.2g}, {self.upper:.6g} +- {self.upper_error:.2g}], "
            f"asymptotic {self.asymptotic:.6g}"
        )


def neighborhood_for_capacity(p, rho=0.2, K=1.0, alpha=0.125, delta_cap=DEFAULT_DELTA_CAP):  # noqa: N803
    return NeighborhoodSpec.create(p, K=K, alpha=alpha, rho=rho, delta_cap=delta_cap)


def capacity_asymptotic(p):
    """Log of ``N^{N/2-1} eps sqrt(2 pi eps)^{N-2} / sqrt(|det Hess F(O)|)``."""
    report = prefactor(p)
    n, eps = p.n, p.epsilon
    return (0.5 * n - 1.0) * math.log(n) + math.log(eps) + 0.5 * (n - 2) * math.log(2.0 * math.pi * eps) - (
        report.half_logdet_O
    )


def f_profile(z0, delta, epsilon):
    """Optimal one dimensional profile across the strip ``|z_0| <= delta``, one on the left and zero on the right."""
    if not delta > 0 or not epsilon > 0:
        msg = f"delta and epsilon must be positive, got {delta} and {epsilon}"
        raise DomainError(msg)
    scale = math.sqrt(2.0 * epsilon)
    edge = erf(delta / scale)
    clipped = np.clip(z0, -delta, delta)
    return (edge - erf(clipped / scale)) / (2.0 * edge)


def _normalization(delta, epsilon):
    """``int_{-delta}^{delta} e^{-t^2 / 2 eps} dt``."""
    return math.sqrt(2.0 * math.pi * epsilon) * math.erf(delta / math.sqrt(2.0 * epsilon))


def _check_geometry(spec):
    if not 0 < spec.rho < 1:
        msg = f"ball radius must be in (0, 1), got rho={spec.rho}"
        raise GeometryError(msg)
    if spec.delta + spec.rho >= 1:
        msg = f"the strip |z_0| <= {spec.delta:g} reaches the balls of radius {spec.rho:g}"
        raise GeometryError(msg)


class _Transverse(NamedTuple):
    lam: np.ndarray  # eigenvalue per transverse slot
    multiplicity: np.ndarray
    sigma: np.ndarray  # sqrt(eps / lambda)


def _transverse(p):
    s = spectrum(p)
    lam = s.lam[slot_modes(p.n)][1:]
    return _Transverse(lam=lam, multiplicity=slot_multiplicity(p.n)[1:], sigma=np.sqrt(p.epsilon / lam))


def _quartic_sums(p, w_perp):
    values = np.zeros((w_perp.shape[0], p.n))
    values[:, 1:] = w_perp / np.sqrt(slot_multiplicity(p.n)[1:])
    y = state_of(ModeVector(values))
    y2 = y * y
    return np.sum(y2, axis=-1), np.sum(y2 * y, axis=-1), np.sum(y2 * y2, axis=-1)


def _upper_integrand(p, delta, w_perp):
    """``int_{-delta}^{delta} e^{-z_0^2/2eps - P(z_0)/eps} dz_0`` per transverse sample."""
    n, eps = p.n, p.epsilon
    s2, s3, s4 = _quartic_sums(p, w_perp)

    def integrand(z0):
        poly = (n * z0**4 + 6.0 * z0 * z0 * s2 + 4.0 * z0 * s3) / (4.0 * n)
        return np.exp(-(0.5 * z0 * z0 + poly) / eps)

    value, _ = quad_vec(integrand, -delta, delta, epsabs=0.0, epsrel=_QUAD_EPSREL, norm="max", points=(0.0,))
    return value * np.exp(-s4 / (4.0 * n * eps))


def _lower_integrand(p, rho, w_perp):
    """``1 / int_{-1+rho}^{1-rho} e^{(-z_0^2/2 + P(z_0))/eps} dz_0`` per transverse sample."""
    n, eps = p.n, p.epsilon
    s2, s3, s4 = _quartic_sums(p, w_perp)

    def integrand(z0):
        poly = (n * z0**4 + 6.0 * z0 * z0 * s2 + 4.0 * z0 * s3) / (4.0 * n)
        return np.exp((poly - 0.5 * z0 * z0) / eps)

    bounds = (-1.0 + rho, 1.0 - rho)
    value, _ = quad_vec(integrand, *bounds, epsabs=0.0, epsrel=_QUAD_EPSREL, norm="max", points=(0.0,))
    return np.exp(-s4 / (4.0 * n * eps)) / value


def _tensor_product(factors):
    """Combine per slot ``(nodes (m, d), weights (m,))`` rules into one rule over all slots."""
    nodes, weights = np.zeros((1, 0)), np.ones(1)
    for factor_nodes, factor_weights in factors:
        count = len(factor_weights)
        nodes = np.hstack([np.repeat(nodes, count, axis=0), np.tile(factor_nodes, (len(weights), 1))])
        weights = np.repeat(weights, count) * np.tile(factor_weights, len(weights))
    return nodes, weights


def _gaussian_rule(p, order):
    """Nodes and weights of ``int_{R^{N-1}} e^{-sum lambda w^2 / 2 eps} g(w) dw``."""
    points, base = np.polynomial.hermite_e.hermegauss(order)
    return _tensor_product([(sigma * points[:, None], sigma * base) for sigma in _transverse(p).sigma])


def _box_rule(p, spec, order):
    """Nodes and weights of the same Gaussian integral restricted to the transverse part of ``C_delta``."""
    t = _transverse(p)
    bounds = spec.bounds(spectrum(p))[1:]
    points, base = np.polynomial.legendre.leggauss(order)
    factors = []
    slot = 0
    while slot < len(t.lam):
        lam, half_width = t.lam[slot], bounds[slot]
        if t.multiplicity[slot] == 1:
            w = half_width * points
            factors.append((w[:, None], half_width * base * np.exp(-0.5 * lam * w * w / p.epsilon)))
            slot += 1
            continue
        radius = math.sqrt(2.0) * half_width
        r = 0.5 * radius * (points + 1.0)
        r_weight = 0.5 * radius * base * r * np.exp(-0.5 * lam * r * r / p.epsilon)
        theta = 2.0 * math.pi * np.arange(order) / order
        nodes = np.column_stack([np.outer(r, np.cos(theta)).ravel(), np.outer(r, np.sin(theta)).ravel()])
        factors.append((nodes, np.repeat(r_weight, order) * (2.0 * math.pi / order)))
        slot += 2
    return _tensor_product(factors)


def _sample_gaussian(p, rng, size):
    return rng.standard_normal((size, p.n - 1)) * _transverse(p).sigma


def _truncated_mass(p, spec):
    """Gaussian mass ``int e^{-sum lambda w^2 / 2 eps} dw`` of the transverse part of ``C_delta``."""
    t = _transverse(p)
    bounds = spec.bounds(spectrum(p))[1:]
    logs = []
    slot = 0
    while slot < len(t.lam):
        sigma = t.sigma[slot]
        if t.multiplicity[slot] == 1:
            logs.append(math.log(math.sqrt(2.0 * math.pi) * sigma * math.erf(bounds[slot] / (math.sqrt(2.0) * sigma))))
            slot += 1
        else:
            radius = math.sqrt(2.0) * bounds[slot]
            logs.append(math.log(2.0 * math.pi * sigma * sigma * -math.expm1(-0.5 * (radius / sigma) ** 2)))
            slot += 2
    return math.fsum(logs)


def _sample_truncated(p, spec, rng, size):
    """Draw from the Gaussian restricted to the box, stratified along the first uniform."""
    t = _transverse(p)
    bounds = spec.bounds(spectrum(p))[1:]
    uniforms = rng.uniform(size=(size, p.n - 1))
    if p.n > 1:
        uniforms[:, 0] = (np.arange(size) + uniforms[:, 0]) / size
    w = np.empty((size, p.n - 1))
    slot = 0
    while slot < len(t.lam):
        sigma = t.sigma[slot]
        if t.multiplicity[slot] == 1:
            edge = bounds[slot] / sigma
            w[:, slot] = sigma * truncnorm.ppf(uniforms[:, slot], -edge, edge)
            slot += 1
            continue
        radius = math.sqrt(2.0) * bounds[slot]
        mass = -math.expm1(-0.5 * (radius / sigma) ** 2)
        r = sigma * np.sqrt(-2.0 * np.log1p(-uniforms[:, slot] * mass))
        theta = 2.0 * math.pi * uniforms[:, slot + 1]
        w[:, slot], w[:, slot + 1] = r * np.cos(theta), r * np.sin(theta)
        slot += 2
    return w


def _sample_block(kind, p, spec, budget, index):
    """Sums ``(sum g, sum g^2, count)`` of the integrand over one stream block."""
    size = min(budget.block, budget.samples - index * budget.block)
    rng = stream(budget.seed, index)
    if kind == "upper":
        values = _upper_integrand(p, spec.delta, _sample_gaussian(p, rng, size))
    else:
        values = _lower_integrand(p, spec.rho, _sample_truncated(p, spec, rng, size))
    return math.fsum(values.tolist()), math.fsum((values * values).tolist()), size


def _map(fn, tasks, workers):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(fn, tasks))
    return [fn(task) for task in tasks]


def _monte_carlo(kind, p, spec, budget):
    blocks = range(math.ceil(budget.samples / budget.block))
    sums = _map(partial(_sample_block, kind, p, spec, budget), list(blocks), budget.workers)
    total = math.fsum(s for s, _, _ in sums)
    total_sq = math.fsum(s for _, s, _ in sums)
    count = sum(c for _, _, c in sums)
    mean = total / count
    variance = max(total_sq / count - mean * mean, 0.0) * count / (count - 1)
    if not mean > 0:
        msg = f"{kind} capacity integrand vanished on all {count} samples"
        raise StatisticalToleranceError(msg, math.inf, budget.max_rel_error)
    log_mass = (
        math.fsum(np.log(math.sqrt(2.0 * math.pi) * _transverse(p).sigma).tolist())
        if kind == "upper"
        else _truncated_mass(p, spec)
    )
    return log_mass + math.log(mean), math.sqrt(variance / count) / mean, count


def _tensor(kind, p, spec, order):
    nodes, weights = _gaussian_rule(p, order) if kind == "upper" else _box_rule(p, spec, order)
    chunks = []
    for start in range(0, len(weights), 1 << 14):
        chunk = slice(start, start + (1 << 14))
        if kind == "upper":
            values = _upper_integrand(p, spec.delta, nodes[chunk])
        else:
            values = _lower_integrand(p, spec.rho, nodes[chunk])
        chunks.append(math.fsum((weights[chunk] * values).tolist()))
    return math.log(math.fsum(chunks)), len(weights)


def _estimate(kind, p, spec, budget):
    dim = p.n - 1
    if dim == 0:
        log_integral, evaluations = _tensor(kind, p, spec, budget.order)
        return log_integral, 0.0, evaluations, "exact"
    if dim <= budget.tensor_max_dim:
        log_integral, evaluations = _tensor(kind, p, spec, budget.order)
        coarse, _ = _tensor(kind, p, spec, budget.order // 2)
        error, method = abs(log_integral - coarse), "tensor"
    else:
        log_integral, error, evaluations = _monte_carlo(kind, p, spec, budget)
        method = "monte-carlo"
    if error > budget.max_rel_error:
        msg = f"{kind} capacity bound"
        raise StatisticalToleranceError(msg, error, budget.max_rel_error)
    return log_integral, error, evaluations, method


def _prepare(p, spec, budget):
    p.require_synchronized()
    _check_geometry(spec)
    return CapacityBudget() if budget is None else budget


def capacity_upper(p, spec, budget=None):
    """
    Dirichlet form of the test function ``h(w) = f_profile(w_0)``, an upper bound on the capacity.

    :return: :class:`CapacityEstimate` with the log value and the standard error of the log value
    """
    budget = _prepare(p, spec, budget)
    log_integral, error, evaluations, method = _estimate("upper", p, spec, budget)
    norm = _normalization(spec.delta, p.epsilon)
    log_value = math.log(p.epsilon) + (0.5 * p.n - 1.0) * math.log(p.n) - 2.0 * math.log(norm) + log_integral
    logging.debug("capacity upper bound %s: %.8g +- %.2g (%s, %d points)", p, log_value, error, method, evaluations)
    return CapacityEstimate(log_value, error, method, evaluations)


def capacity_lower(p, spec, budget=None):
    """
    Lower bound from the corridor: every transverse slice contributes its exact one dimensional capacity.

    :return: :class:`CapacityEstimate` with the log value and the standard error of the log value
    """
    budget = _prepare(p, spec, budget)
    log_integral, error, evaluations, method = _estimate("lower", p, spec, budget)
    log_value = math.log(p.epsilon) + (0.5 * p.n - 1.0) * math.log(p.n) + log_integral
    logging.debug("capacity lower bound %s: %.8g +- %.2g (%s, %d points)", p, log_value, error, method, evaluations)
    return CapacityEstimate(log_value, error, method, evaluations)


def capacity_bracket(p, spec=None, budget=None):
    spec = neighborhood_for_capacity(p) if spec is None else spec
    budget = CapacityBudget() if budget is None else budget
    lower = capacity_lower(p, spec, budget)
    upper = capacity_upper(p, spec, budget)
    bracket = CapacityBracket(
        lower=lower.log_value,
        upper=upper.log_value,
        asymptotic=capacity_asymptotic(p),
        params=p,
        spec=spec,
        lower_error=lower.std_error,
        upper_error=upper.std_error,
        method={
            "lower": lower.method,
            "upper": upper.method,
            "lower_evaluations": lower.evaluations,
            "upper_evaluations": upper.evaluations,
            "order": budget.order,
            "samples": budget.samples,
            "seed": budget.seed,
            "delta": spec.delta,
            "rho": spec.rho,
        },
    )
    if not bracket.ordered:
        logging.warning("capacity bounds out of order for %s: %s", p, bracket)
    return bracket


__all__ = [
    "DEFAULT_DELTA_CAP",
    "CapacityBracket",
    "CapacityBudget",
    "CapacityEstimate",
    "capacity_asymptotic",
    "capacity_bracket",
    "capacity_lower",
    "capacity_upper",
    "f_profile",
    "neighborhood_for_capacity",
]
