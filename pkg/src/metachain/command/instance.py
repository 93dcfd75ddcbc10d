"""Commands running a single instance through the same code path as a campaign."""

from __future__ import annotations

import logging
from abc import ABC

from metachain.campaign.config import Budgets, CampaignConfig, Instance
from metachain.campaign.instance import Job, evaluate
from metachain.campaign.runner import instance_key
from metachain.campaign.store import ResultStore, write_csv

from .command import Command, add_instance_arguments, add_run_arguments


class InstanceCommand(Command, ABC):
    task = None
    default_n = None
    default_epsilon = None

    def __init__(self, options) -> None:
        super().__init__(options)
        self.instance = Instance(n=options.n, mu=options.mu, epsilon=options.eps)
        self.seed = options.seed
        self.workers = options.workers
        self.folder = options.out
        self.budgets = self.budgets_from(options)
        self.outcome = None

    @classmethod
    def add_parser_arguments(cls, parser):
        add_instance_arguments(parser, n=cls.default_n, epsilon=cls.default_epsilon)
        add_run_arguments(parser)

    @classmethod
    def budgets_from(cls, options):
        return Budgets(rho=options.rho, oracle=not options.no_oracle)

    def job(self, config):
        return Job(
            instance=self.instance,
            seed=self.seed,
            tasks=config.tasks,
            budgets=config.budgets,
            predictions=config.predictions,
            config_hash=config.config_hash,
            workers=self.workers,
        )

    def run(self):
        config = CampaignConfig(instances=(self.instance,), tasks=(self.task,), budgets=self.budgets, seed=self.seed)
        self.outcome = evaluate(self.job(config), catch=False)
        record = self.outcome.record
        write_csv(self.out, [record])
        if self.folder is not None:
            store = ResultStore(self.folder)
            with store.lock():
                key = instance_key(0, self.instance)
                store.save(key, record)
                store.write_results([(key, self.seed, record)], config.config_hash, self.seed)
            logging.info("results written to %s", store.folder)

    def summary(self):
        if self.outcome is None:
            return []
        flags = self.outcome.record.flags
        verdicts = ", ".join(f"{k}={'pass' if v else 'fail'}" for k, v in sorted(flags.items()))
        return [f"  checks {verdicts}"] if verdicts else []

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.instance}, seed={self.seed})"


__all__ = [
    "InstanceCommand",
]
