from __future__ import annotations

from .config import Budgets, CampaignConfig, Instance
from .instance import Job, evaluate
from .record import CSV_COLUMNS, ResultRecord
from .runner import CampaignOutcome, run_campaign
from .store import ResultStore

__all__ = [
    "CSV_COLUMNS",
    "Budgets",
    "CampaignConfig",
    "CampaignOutcome",
    "Instance",
    "Job",
    "ResultRecord",
    "ResultStore",
    "evaluate",
    "run_campaign",
]
