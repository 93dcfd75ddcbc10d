"""Errors."""

from __future__ import annotations


class MetachainError(Exception):
    """Base of all failures reported by metachain, carries the process exit code to use."""

    exit_code = 1


class ConfigError(MetachainError):
    """Malformed configuration (CLI, ini file or campaign document)."""

    exit_code = 2

    def __init__(self, msg, source=None, field=None, line=None) -> None:
        where = [f"{k} {v}" for k, v in (("in", source), ("line", line), ("field", field)) if v is not None]
        super().__init__(f"{msg} ({', '.join(where)})" if where else msg)
        self.source = source
        self.field = field
        self.line = line


class RegimeError(MetachainError):
    """The coupling is outside the synchronization regime."""

    exit_code = 3

    def __init__(self, n, gamma, threshold) -> None:
        super().__init__(f"gamma={gamma:g} is not above the synchronization threshold {threshold:g} for n={n}")
        self.n = n
        self.gamma = gamma
        self.threshold = threshold


class DomainError(MetachainError, ValueError):
    """A scalar argument is outside the domain where the quantity is defined."""

    exit_code = 3


class NumericalBlowupError(MetachainError):
    """A trajectory produced a non finite state."""

    exit_code = 4

    def __init__(self, index, step) -> None:
        super().__init__(f"trajectory {index} blew up (non finite state) at step {step}")
        self.index = index
        self.step = step


class InconclusiveError(MetachainError):
    """No usable statistics could be collected (e.g. every trajectory was censored)."""

    exit_code = 5


class StatisticalToleranceError(MetachainError):
    """The Monte Carlo standard error is above the requested tolerance, the budget is too small."""

    exit_code = 5

    def __init__(self, what, rel_error, tolerance) -> None:
        super().__init__(f"{what}: relative standard error {rel_error:.3g} exceeds tolerance {tolerance:.3g}")
        self.rel_error = rel_error
        self.tolerance = tolerance


class QuadratureToleranceError(MetachainError):
    """Adaptive quadrature did not reach the requested accuracy."""

    exit_code = 6


class SolverError(MetachainError):
    """A linear solve failed to produce a usable solution."""

    exit_code = 6


class GeometryError(MetachainError, ValueError):
    """The neighborhoods overlap, the construction of the test functions does not apply."""

    exit_code = 7


class DimensionError(MetachainError, ValueError):
    """A state vector does not match the number of particles."""

    exit_code = 7

    def __init__(self, expected, got) -> None:
        super().__init__(f"expected a vector of length {expected}, got {got}")
        self.expected = expected
        self.got = got


class SymmetryError(MetachainError, ValueError):
    """A Fourier vector is not Hermitian symmetric, it does not map back to a real state."""

    exit_code = 7


__all__ = [
    "ConfigError",
    "DimensionError",
    "DomainError",
    "GeometryError",
    "InconclusiveError",
    "MetachainError",
    "NumericalBlowupError",
    "QuadratureToleranceError",
    "RegimeError",
    "SolverError",
    "StatisticalToleranceError",
    "SymmetryError",
]
