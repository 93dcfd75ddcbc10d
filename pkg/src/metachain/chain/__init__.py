from __future__ import annotations

from .fourier import ModeVector, NeighborhoodSpec
from .potential import ChainParams, StationaryPoints
from .spectral import PrefactorReport, Spectrum, TimePrediction

__all__ = [
    "ChainParams",
    "ModeVector",
    "NeighborhoodSpec",
    "PrefactorReport",
    "Spectrum",
    "StationaryPoints",
    "TimePrediction",
]
