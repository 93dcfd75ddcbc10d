"""Reference capacities for one and two particles from a finite difference committor on a bounded box."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from metachain.chain.potential import eval_G
from metachain.util.error import DimensionError, DomainError, SolverError

_RESIDUAL_TOLERANCE = 1e-8


@dataclass(frozen=True)
class OracleGrid:
    step: float = 0.02
    half_width: float = 2.0
    rho: float = 0.2

    def __post_init__(self) -> None:
        if self.half_width < 2:  # noqa: PLR2004
            msg = f"the box [-L, L]^N needs L >= 2, got {self.half_width}"
            raise DomainError(msg)
        if not 0 < self.step < self.half_width or not 0 < self.rho < 1:
            msg = f"invalid oracle grid {self}"
            raise DomainError(msg)

    def points(self):
        count = round(2.0 * self.half_width / self.step) + 1
        return np.linspace(-self.half_width, self.half_width, count)


def _edges(shape):
    """Pairs of flat node indices joined by a lattice edge, one array pair per axis."""
    index = np.arange(math.prod(shape)).reshape(shape)
    for axis in range(len(shape)):
        lead = [slice(None)] * len(shape)
        tail = [slice(None)] * len(shape)
        lead[axis], tail[axis] = slice(None, -1), slice(1, None)
        yield index[tuple(lead)].ravel(), index[tuple(tail)].ravel()


def capacity_oracle_smallN(p, grid=None):  # noqa: N802
    """
    Capacity of the rescaled chain from the discretized Dirichlet problem of the committor.

    The committor solves ``div(e^{-G/eps} grad h) = 0`` with ``h = 1`` on ``B_-``, ``h = 0`` on ``B_+`` (balls of
    radius ``rho sqrt(N)`` around the minima) and a reflecting outer boundary. Edge conductances are ``e^{-G/eps}`` at
    the edge midpoints.

    :return: log of ``eps int e^{-G/eps} |grad h|^2``
    """
    grid = OracleGrid() if grid is None else grid
    n, eps = p.n, p.epsilon
    if n not in (1, 2):
        raise DimensionError("1 or 2", n)
    axis = grid.points()
    step = axis[1] - axis[0]
    states = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    radius = grid.rho * math.sqrt(n)
    left = np.linalg.norm(states + 1.0, axis=-1) <= radius
    right = np.linalg.norm(states - 1.0, axis=-1) <= radius

    heads, tails = map(np.concatenate, zip(*_edges((len(axis),) * n)))
    midpoint_energy = eval_G(p, 0.5 * (states[heads] + states[tails]))
    reference = float(np.min(midpoint_energy))
    conductance = np.exp(-(midpoint_energy - reference) / eps)

    size = len(states)
    rows = np.concatenate([heads, tails, heads, tails])
    cols = np.concatenate([heads, tails, tails, heads])
    data = np.concatenate([conductance, conductance, -conductance, -conductance])
    laplacian = sparse.coo_matrix((data, (rows, cols)), shape=(size, size)).tocsr()

    fixed = left | right
    free = ~fixed
    values = np.where(left, 1.0, 0.0)
    rhs = -(laplacian[free][:, fixed] @ values[fixed])
    system = laplacian[free][:, free].tocsc()
    solution = spsolve(system, rhs)
    residual = np.linalg.norm(system @ solution - rhs) / max(np.linalg.norm(rhs), 1e-300)
    if not np.all(np.isfinite(solution)) or residual > _RESIDUAL_TOLERANCE:
        msg = f"committor solve failed for {p} (relative residual {residual:.3g})"
        raise SolverError(msg)
    values[free] = solution

    jumps = values[heads] - values[tails]
    energy = math.fsum((conductance * jumps * jumps).tolist())
    log_cap = math.log(eps) + math.log(energy) + (n - 2) * math.log(step) - reference / eps
    logging.debug("grid capacity %s at step %g over %d nodes: %.8g", p, step, size, log_cap)
    return log_cap


__all__ = [
    "OracleGrid",
    "capacity_oracle_smallN",
]
