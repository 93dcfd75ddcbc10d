"""The work done for one instance, shared by the ``simulate``, ``capacity`` and ``campaign`` commands."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from timeit import default_timer

from metachain.capacity import CapacityBudget, OracleGrid, capacity_bracket, capacity_oracle_smallN
from metachain.capacity.estimator import neighborhood_for_capacity
from metachain.simulate import SimConfig, default_dt, dt_refinement_check, mean_hitting_1d, simulate_hitting

from .config import PREDICTIONS, Budgets
from .record import ResultRecord
from .store import runtime_versions

ONE_PARTICLE_GRID_STEP = 1e-3
TWO_PARTICLE_GRID_STEP = 0.02


@dataclass(frozen=True)
class Job:
    """Everything one instance needs, picklable so instances can run in worker processes."""

    instance: object
    seed: int
    tasks: tuple = ("simulate", "capacity")
    budgets: Budgets = field(default_factory=Budgets)
    predictions: dict = field(default_factory=lambda: dict.fromkeys(PREDICTIONS, True))
    config_hash: str | None = None
    workers: int = 1
    refine: bool = False
    start: str = "minimum"


def sim_config(p, job):
    budgets = job.budgets
    return SimConfig(
        dt=default_dt(p) if budgets.dt is None else budgets.dt,
        rho=budgets.rho,
        n_traj=budgets.trajectories,
        seed=job.seed,
        max_time=budgets.max_time,
        start=job.start,
        workers=job.workers,
    )


def oracle_grid(p, budgets):
    step = budgets.grid_step
    if step is None:
        step = ONE_PARTICLE_GRID_STEP if p.n == 1 else TWO_PARTICLE_GRID_STEP
    return OracleGrid(step=step, rho=budgets.rho)


def run_simulation(record, p, job):
    c = sim_config(p, job)
    refinement = None
    if job.refine:
        refinement = dt_refinement_check(p, c)
        batch = refinement.coarse
    else:
        batch = simulate_hitting(p, c)
    mean_oracle = None
    if job.budgets.oracle and p.n == 1:
        mean_oracle = mean_hitting_1d(p.epsilon, -1.0, 1.0 - c.rho)
        logging.info("one particle reference mean %.6g, simulated %.6g", mean_oracle, batch.mean)
    return record.with_simulation(batch, mean_oracle), batch, refinement


def run_capacity(record, p, job):
    spec = neighborhood_for_capacity(p, rho=job.budgets.rho)
    budget = CapacityBudget(
        samples=job.budgets.samples,
        order=job.budgets.order,
        seed=job.seed,
        workers=job.workers,
    )
    bracket = capacity_bracket(p, spec, budget)
    logging.info("%s: %s", p, bracket)
    log_oracle = None
    if job.budgets.oracle and p.n <= 2:  # noqa: PLR2004
        log_oracle = capacity_oracle_smallN(p, oracle_grid(p, job.budgets))
        logging.info("grid reference log capacity %.8g", log_oracle)
    return record.with_capacity(bracket, log_oracle), bracket


class Outcome:
    """A finished instance: the record plus the objects the commands print."""

    def __init__(self, record, batch=None, refinement=None, bracket=None) -> None:
        self.record = record
        self.batch = batch
        self.refinement = refinement
        self.bracket = bracket


def evaluate(job, catch=True):  # noqa: FBT002
    """Run the tasks of ``job``, with ``catch`` a failing instance comes back as a record with ``status="failed"``."""
    start = default_timer()
    p = job.instance.params()
    logging.info("instance %s (seed %d): %s", p, job.seed, ", ".join(job.tasks))
    record = ResultRecord(n=p.n, mu=p.mu, gamma=p.gamma, epsilon=p.epsilon, seed=job.seed, rho=job.budgets.rho)
    outcome = Outcome(record)
    try:
        record = ResultRecord.for_params(p, job.seed, job.budgets.rho, job.predictions)
        if "simulate" in job.tasks:
            record, outcome.batch, outcome.refinement = run_simulation(record, p, job)
        if "capacity" in job.tasks:
            record, outcome.bracket = run_capacity(record, p, job)
    except Exception as exception:
        if not catch:
            raise
        logging.warning("instance %s failed with %s: %s", p, type(exception).__name__, exception)
        record = record.failed(exception)
    outcome.record = record.finalize(
        wall_clock=default_timer() - start,
        versions=runtime_versions(),
        config_hash=job.config_hash,
    )
    return outcome


def evaluate_record(job):
    return evaluate(job).record


__all__ = [
    "Job",
    "Outcome",
    "evaluate",
    "evaluate_record",
    "oracle_grid",
    "sim_config",
]
