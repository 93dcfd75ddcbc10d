"""
Euler-Maruyama simulation of ``dX = -grad G(X) dt + sqrt(2 eps) dB`` and first hitting times of ``B_+``.

Trajectories advance in lockstep blocks. Each trajectory owns the stream ``(seed, index)`` and draws its noise in chunks
whose size only depends on ``N``, so a trajectory's path is the same whatever block or worker runs it.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from typing import NamedTuple

import numpy as np

from metachain.chain.spectral import predict_mean_time_rescaled, spectrum
from metachain.util.error import DomainError, InconclusiveError, NumericalBlowupError

from .rng import stream

START_CHOICES = ("minimum", "ball")
CENSOR_FACTOR = 50.0
EXPONENTIAL_CV = (0.7, 1.3)  # spread of a near exponential exit time, reported only
_NOISE_FLOATS = 4096
_Z95 = 1.959963984540054


def default_dt(p):
    return 1e-3 * min(1.0, 1.0 / float(np.max(np.abs(spectrum(p).lam))))


def noise_chunk(n):
    """Steps of noise a trajectory draws at once."""
    return max(16, _NOISE_FLOATS // n)


@dataclass(frozen=True)
class SimConfig:
    """
    :param dt: time step
    :param rho: hitting radius in mode coordinates, the target is the ball of radius ``rho sqrt(N)`` around ``I_+``
    :param n_traj: number of trajectories
    :param seed: seed of the per trajectory streams
    :param max_time: censoring time, defaults to fifty times the predicted mean
    :param start: ``minimum`` starts at ``I_-``, ``ball`` draws the start uniformly from ``B_-``
    :param workers: processes running trajectory blocks
    :param block: trajectories advanced together
    """

    dt: float = 1e-3
    rho: float = 0.2
    n_traj: int = 1000
    seed: int = 0
    max_time: float | None = None
    start: str = "minimum"
    workers: int = 1
    block: int = 1024

    def __post_init__(self) -> None:
        if not self.dt > 0:
            msg = f"time step must be positive, got dt={self.dt}"
            raise DomainError(msg)
        if not 0 < self.rho < 1:
            msg = f"hitting radius must be in (0, 1), got rho={self.rho}"
            raise DomainError(msg)
        if self.n_traj < 1 or self.block < 1 or self.workers < 1:
            msg = f"n_traj, block and workers must be positive, got {self.n_traj}, {self.block}, {self.workers}"
            raise DomainError(msg)
        if self.start not in START_CHOICES:
            msg = f"start must be one of {', '.join(START_CHOICES)}, got {self.start!r}"
            raise DomainError(msg)
        if self.max_time is not None and not self.max_time > 0:
            msg = f"max_time must be positive, got {self.max_time}"
            raise DomainError(msg)

    def resolve_max_time(self, p):
        if self.max_time is not None:
            return float(self.max_time)
        prediction = predict_mean_time_rescaled(p).determinant
        if prediction.overflow:
            msg = f"predicted mean time e^{prediction.log_time:.1f} of {p} is out of reach for simulation"
            raise DomainError(msg)
        return CENSOR_FACTOR * prediction.time


@dataclass(frozen=True, eq=False)
class HittingBatch:
    times: np.ndarray  # hitting times of the trajectories that hit, in trajectory order
    censored_count: int
    n_traj: int
    mean: float
    variance: float
    ci95_low: float
    ci95_high: float
    dt: float
    seed: int
    rho: float
    max_time: float
    start: str
    params: object

    @classmethod
    def collect(cls, p, c, max_time, all_times):
        censored = np.isnan(all_times)
        times = all_times[~censored]
        count = len(times)
        if count == 0:
            msg = f"all {len(all_times)} trajectories of {p} were censored at t={max_time:g}"
            raise InconclusiveError(msg)
        mean = math.fsum(times.tolist()) / count
        deviations = times - mean
        variance = math.fsum((deviations * deviations).tolist()) / (count - 1) if count > 1 else 0.0
        half_width = _Z95 * math.sqrt(variance / count)
        return cls(
            times=times,
            censored_count=int(np.count_nonzero(censored)),
            n_traj=len(all_times),
            mean=mean,
            variance=variance,
            ci95_low=mean - half_width,
            ci95_high=mean + half_width,
            dt=c.dt,
            seed=c.seed,
            rho=c.rho,
            max_time=max_time,
            start=c.start,
            params=p,
        )

    @property
    def std_error(self):
        return math.sqrt(self.variance / len(self.times))

    @property
    def coefficient_of_variation(self):
        return math.sqrt(self.variance) / self.mean

    @property
    def exponential_like(self):
        low, high = EXPONENTIAL_CV
        return low <= self.coefficient_of_variation <= high

    def __str__(self) -> str:
        return (
            f"mean hitting time {self.mean:.6g} (95% CI {self.ci95_low:.6g}..{self.ci95_high:.6g}) over "
            f"{len(self.times)}/{self.n_traj} trajectories, {self.censored_count} censored, "
            f"coefficient of variation {self.coefficient_of_variation:.3g}"
        )


def _drift(p, x):
    laplacian = 2.0 * x - np.roll(x, 1, axis=-1) - np.roll(x, -1, axis=-1)
    return (x * x * x - x + 0.5 * p.gamma * laplacian) / p.n


def _start_states(p, c, rngs):
    x = np.full((len(rngs), p.n), -1.0)
    if c.start == "ball":
        for row, rng in enumerate(rngs):
            direction = rng.standard_normal(p.n)
            radius = c.rho * math.sqrt(p.n) * rng.uniform() ** (1.0 / p.n)
            x[row] += radius * direction / np.linalg.norm(direction)
    return x


def _run_block(p, c, max_time, first):
    """Hitting times of trajectories ``first .. first + block - 1``, ``nan`` marks censored ones."""
    size = min(c.block, c.n_traj - first)
    rngs = [stream(c.seed, first + i) for i in range(size)]
    x = _start_states(p, c, rngs)
    times = np.full(size, np.nan)
    active = np.arange(size)
    chunk, max_steps = noise_chunk(p.n), math.ceil(max_time / c.dt)
    scale, radius_sq = math.sqrt(2.0 * p.epsilon * c.dt), c.rho * c.rho * p.n
    step = 0
    while active.size and step < max_steps:
        steps = min(chunk, max_steps - step)
        noise = np.stack([rngs[k].standard_normal((chunk, p.n)) for k in active], axis=1)
        state = x[active]
        hit_at = np.full(active.size, -1)
        for j in range(steps):
            state = state - _drift(p, state) * c.dt + scale * noise[j]
            offset = state - 1.0
            inside = np.einsum("ij,ij->i", offset, offset) <= radius_sq
            hit_at[inside & (hit_at < 0)] = step + j + 1
        finite = np.all(np.isfinite(state), axis=-1)
        if not np.all(finite):
            raise NumericalBlowupError(first + int(active[np.argmin(finite)]), step + steps)
        x[active] = state
        hits = hit_at >= 0
        times[active[hits]] = hit_at[hits] * c.dt
        active = active[~hits]
        step += steps
    return times


def check_stability(p, dt):
    """``dt max(nu) / N < 1/2``, explicit Euler loses the minima otherwise."""
    stiffness = float(np.max(spectrum(p).nu)) / p.n
    if dt * stiffness >= 0.5:  # noqa: PLR2004
        msg = f"dt={dt:g} is too large for {p}, need dt < {0.5 / stiffness:.3g}"
        raise DomainError(msg)


def simulate_hitting(p, c):
    """Simulate ``c.n_traj`` trajectories and collect the times they need to reach ``B_+``."""
    p.require_synchronized()
    check_stability(p, c.dt)
    max_time = c.resolve_max_time(p)
    firsts = list(range(0, c.n_traj, c.block))
    logging.info("simulating %d trajectories of %s with dt=%g up to t=%g", c.n_traj, p, c.dt, max_time)
    run = partial(_run_block, p, c, max_time)
    if c.workers > 1 and len(firsts) > 1:
        with ProcessPoolExecutor(max_workers=c.workers) as executor:
            blocks = list(executor.map(run, firsts))
    else:
        blocks = []
        for first in firsts:
            blocks.append(run(first))
            logging.debug("trajectories %d..%d done", first, first + len(blocks[-1]) - 1)
    batch = HittingBatch.collect(p, c, max_time, np.concatenate(blocks))
    if batch.censored_count:
        logging.warning("%d of %d trajectories censored at t=%g", batch.censored_count, batch.n_traj, max_time)
    logging.info("%s", batch)
    return batch


class RefinementReport(NamedTuple):
    coarse: HittingBatch
    fine: HittingBatch
    shift: float  # relative change of the mean
    statistical_error: float  # relative standard error of the difference
    tolerance: float
    passed: bool


def dt_refinement_check(p, c, tolerance=0.03):
    """Rerun with half the time step (same trajectories, same censoring time) and compare the means."""
    coarse = simulate_hitting(p, c)
    fine = simulate_hitting(p, replace(c, dt=c.dt / 2.0, max_time=coarse.max_time))
    shift = abs(fine.mean - coarse.mean) / coarse.mean
    statistical_error = math.hypot(coarse.std_error, fine.std_error) / coarse.mean
    passed = shift < statistical_error + tolerance
    allowed = statistical_error + tolerance
    logging.info("halving dt shifts the mean by %.2f%% (allowed %.2f%%)", 100 * shift, 100 * allowed)
    return RefinementReport(coarse, fine, shift, statistical_error, tolerance, passed)


__all__ = [
    "CENSOR_FACTOR",
    "EXPONENTIAL_CV",
    "START_CHOICES",
    "HittingBatch",
    "RefinementReport",
    "SimConfig",
    "check_stability",
    "default_dt",
    "dt_refinement_check",
    "simulate_hitting",
]
