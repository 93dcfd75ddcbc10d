from __future__ import annotations

from metachain.campaign.config import CampaignConfig
from metachain.campaign.runner import run_campaign

from .command import Command


class CampaignCommand(Command):
    help = "run (or resume) every instance of a JSON campaign document"

    def __init__(self, options) -> None:
        super().__init__(options)
        self.config_file = options.config
        self.folder = options.out
        self.force = options.force
        self.workers = options.workers
        self.instance_workers = options.instance_workers
        self.outcome = None

    @classmethod
    def add_parser_arguments(cls, parser):
        parser.add_argument("--config", required=True, help="the campaign document (JSON)")
        parser.add_argument("--out", default=None, help="output folder, overrides the out key of the document")
        parser.add_argument(
            "--force",
            action="store_true",
            help="replace records written by a different configuration instead of refusing to run",
        )
        parser.add_argument("--workers", type=int, default=1, help="processes used inside one instance")
        parser.add_argument(
            "--instance-workers",
            dest="instance_workers",
            type=int,
            default=1,
            help="instances run in parallel (each one then single process)",
        )

    def run(self):
        config = CampaignConfig.from_file(self.config_file)
        self.outcome = run_campaign(config, self.folder, self.force, self.workers, self.instance_workers)

    def summary(self):
        if self.outcome is None:
            return []
        outcome = self.outcome
        lines = [
            f"  {outcome.executed} instance(s) run, {outcome.skipped} resumed, {outcome.failed} failed",
            f"  results {outcome.csv}",
        ]
        lines.extend(
            f"  failed n={record.n} epsilon={record.epsilon:g}: {record.error}"
            for record in outcome.records
            if record is not None and record.status != "ok"
        )
        return lines

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.config_file})"


__all__ = [
    "CampaignCommand",
]
