"""
Output folder of a run::

    <out>/records/<key>.json   one record per instance, what a rerun resumes from
    <out>/results.csv          fixed column order, see :data:`metachain.campaign.record.CSV_COLUMNS`
    <out>/results.meta.json    config hash, seeds, versions and the state of every instance

Nothing time dependent goes into ``results.csv`` or ``results.meta.json``, rerunning the same configuration rewrites
them byte for byte.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import platform
from pathlib import Path
from tempfile import NamedTemporaryFile

from metachain.util.lock import DirectoryLock

from .record import CSV_COLUMNS, ResultRecord

RESULTS_CSV = "results.csv"
RESULTS_META = "results.meta.json"


def runtime_versions():
    import numpy  # noqa: PLC0415
    import scipy  # noqa: PLC0415

    from metachain.version import __version__  # noqa: PLC0415

    return {
        "metachain": __version__,
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def write_csv(handle, records):
    """Header plus one row per record, floats in their shortest round trip form."""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(record.csv_row() for record in records)


def _atomic_write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    with NamedTemporaryFile("w", encoding="utf-8", dir=path.parent, prefix=f".{path.name}.", delete=False) as file:
        file.write(text)
    os.replace(file.name, path)


class ResultStore:
    def __init__(self, folder) -> None:
        self.folder = Path(folder)
        self.records = self.folder / "records"

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.folder})"

    def lock(self, no_block=False):  # noqa: FBT002
        return DirectoryLock(self.folder, no_block=no_block)

    def record_path(self, key):
        return self.records / f"{key}.json"

    def load(self, key):
        path = self.record_path(key)
        if not path.exists():
            return None
        try:
            return ResultRecord.from_dict(json.loads(path.read_text(encoding="utf-8")))
        except (ValueError, TypeError) as exception:
            logging.warning("ignoring unreadable record %s because %r", path, exception)
            return None

    def save(self, key, record):
        _atomic_write(self.record_path(key), json.dumps(record.to_dict(), indent=2, sort_keys=True) + "\n")
        logging.debug("saved record %s", self.record_path(key))

    def write_results(self, entries, config_hash, seed):
        """
        Assemble the result files.

        :param entries: ``(key, instance_seed, record)`` in configuration order, ``record`` may be ``None`` for
            instances that never ran
        """
        rows = [record for _, _, record in entries if record is not None and record.status == "ok"]
        csv_path = self.folder / RESULTS_CSV
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        with NamedTemporaryFile("w", encoding="utf-8", newline="", dir=self.folder, delete=False) as file:
            write_csv(file, rows)
        os.replace(file.name, csv_path)

        meta = {
            "columns": list(CSV_COLUMNS),
            "config_hash": config_hash,
            "seed": seed,
            "versions": runtime_versions(),
            "instances": [
                {
                    "key": key,
                    "seed": instance_seed,
                    "status": "missing" if record is None else record.status,
                    "error": None if record is None else record.error,
                    "flags": {} if record is None else record.flags,
                    "passing_convention": None if record is None else record.passing_convention,
                    "log_pred_det_form": None if record is None else record.log_pred_det_form,
                    "log_pred_literal_cn": None if record is None else record.log_pred_literal_cn,
                    "log_pred_limit": None if record is None else record.log_pred_limit,
                    "cv": None if record is None else record.cv,
                }
                for key, instance_seed, record in entries
            ],
        }
        _atomic_write(self.folder / RESULTS_META, json.dumps(meta, indent=2, sort_keys=True) + "\n")
        logging.info("wrote %d rows to %s", len(rows), csv_path)
        return csv_path


__all__ = [
    "RESULTS_CSV",
    "RESULTS_META",
    "ResultStore",
    "runtime_versions",
    "write_csv",
]
