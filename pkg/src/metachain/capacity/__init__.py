from __future__ import annotations

from .estimator import (
    CapacityBracket,
    CapacityBudget,
    capacity_asymptotic,
    capacity_bracket,
    capacity_lower,
    capacity_upper,
    f_profile,
    neighborhood_for_capacity,
)
from .oracle import OracleGrid, capacity_oracle_smallN

__all__ = [
    "CapacityBracket",
    "CapacityBudget",
    "OracleGrid",
    "capacity_asymptotic",
    "capacity_bracket",
    "capacity_lower",
    "capacity_oracle_smallN",
    "capacity_upper",
    "f_profile",
    "neighborhood_for_capacity",
]
