from __future__ import annotations

from .hitting import HittingBatch, RefinementReport, SimConfig, default_dt, dt_refinement_check, simulate_hitting
from .oracle import mean_hitting_1d

__all__ = [
    "HittingBatch",
    "RefinementReport",
    "SimConfig",
    "default_dt",
    "dt_refinement_check",
    "mean_hitting_1d",
    "simulate_hitting",
]
