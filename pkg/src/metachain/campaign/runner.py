from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import replace
from typing import NamedTuple

from metachain.simulate.rng import derive_seed
from metachain.util.error import ConfigError, DomainError

from .instance import Job, evaluate_record
from .store import ResultStore


class CampaignOutcome(NamedTuple):
    store: ResultStore
    csv: object
    records: list  # in configuration order, ``None`` never happens after a completed run
    executed: int
    skipped: int

    @property
    def failed(self):
        return sum(1 for record in self.records if record is not None and record.status != "ok")


def instance_key(index, instance):
    return f"{index:04d}-{instance.key}"


def _plan(config, store, force):
    """Split the instances into finished ones (kept) and the jobs still to run."""
    digest = config.config_hash
    entries, jobs = [], []
    for index, instance in enumerate(config.instances):
        key, seed = instance_key(index, instance), derive_seed(config.seed, index)
        existing = store.load(key)
        if existing is not None and existing.config_hash != digest and not force:
            msg = "existing record was produced by a different configuration, rerun with --force to replace it"
            raise ConfigError(msg, source=str(store.record_path(key)), field=f"instances[{index}]")
        if existing is not None and existing.config_hash == digest and existing.status == "ok":
            logging.info("instance %s already done, skipping", key)
            entries.append([key, seed, existing])
            continue
        entries.append([key, seed, None])
        job = Job(
            instance=instance,
            seed=seed,
            tasks=config.tasks,
            budgets=config.budgets,
            predictions=config.predictions,
            config_hash=digest,
        )
        jobs.append((len(entries) - 1, job))
    return entries, jobs


def run_campaign(config, out=None, force=False, workers=1, instance_workers=1):  # noqa: FBT002
    """
    Run every instance of a campaign that has no finished record yet.

    :param config: the :class:`metachain.campaign.config.CampaignConfig`
    :param out: output folder, defaults to the ``out`` of the configuration
    :param force: replace records written by a different configuration instead of refusing
    :param workers: processes used inside one instance (trajectory and sample blocks)
    :param instance_workers: instances run at the same time, each then runs in a single process
    """
    out = config.out if out is None else out
    if out is None:
        msg = "no output folder, pass --out or set out in the campaign document"
        raise ConfigError(msg, source=config.source, field="out")
    if workers < 1 or instance_workers < 1:
        msg = f"worker counts must be positive, got {workers} and {instance_workers}"
        raise DomainError(msg)
    store = ResultStore(out)
    with store.lock():
        entries, jobs = _plan(config, store, force)
        logging.info("%d of %d instances to run into %s", len(jobs), len(entries), store.folder)
        if instance_workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=instance_workers) as executor:
                futures = {executor.submit(evaluate_record, job): slot for slot, job in jobs}
                for future in as_completed(futures):
                    _finish(store, entries, futures[future], future.result())
        else:
            for slot, job in jobs:
                _finish(store, entries, slot, evaluate_record(replace(job, workers=workers)))
        csv_path = store.write_results(entries, config.config_hash, config.seed)
    records = [record for _, _, record in entries]
    return CampaignOutcome(store, csv_path, records, len(jobs), len(entries) - len(jobs))


def _finish(store, entries, slot, record):
    key = entries[slot][0]
    entries[slot][2] = record
    store.save(key, record)
    logging.info("instance %s finished with status %s", key, record.status)


__all__ = [
    "CampaignOutcome",
    "instance_key",
    "run_campaign",
]
