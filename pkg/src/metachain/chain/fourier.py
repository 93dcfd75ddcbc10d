"""
Fourier coordinates of the chain and the neighborhood geometry around the saddle.

A real state ``x`` maps to ``x_hat_j = sum_k omega^{-jk} x_k`` (``omega = e^{2 pi i / N}``), which is Hermitian
symmetric. :class:`ModeVector` stores only the ``N`` real degrees of freedom of such a vector, laid out as::

    [z_0, Re z_1, Im z_1, ..., Re z_m, Im z_m(, z_{N/2} if N is even)]      m = (N - 1) // 2

so that the symmetry holds by construction. The scaled coordinates ``z = x_hat / N`` put the minima at ``+-(1, 0, ...)``
and the saddle at the origin. Every function accepts a stack of vectors along the leading axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.special import zeta

from metachain.util.error import DomainError, SymmetryError

from .spectral import spectrum

SYMMETRY_TOLERANCE = 1e-12


@lru_cache(maxsize=128)
def slot_modes(n):
    """Mode number ``k`` held by each storage slot."""
    m = (n - 1) // 2
    modes = [0] + [k for k in range(1, m + 1) for _ in range(2)]
    if n % 2 == 0 and n > 1:
        modes.append(n // 2)
    modes = np.array(modes, dtype=int)
    modes.setflags(write=False)
    return modes


@lru_cache(maxsize=128)
def slot_multiplicity(n):
    """How many times the squared slot value enters a sum over all ``N`` modes (2 for a conjugate pair)."""
    weights = np.where((slot_modes(n) == 0) | (2 * slot_modes(n) == n), 1.0, 2.0)
    weights.setflags(write=False)
    return weights


@dataclass(frozen=True, eq=False)
class ModeVector:
    values: np.ndarray

    @property
    def n(self):
        return self.values.shape[-1]

    @property
    def z0(self):
        return self.values[..., 0]

    @classmethod
    def zeros(cls, n, shape=()):
        return cls(np.zeros((*shape, n)))

    @classmethod
    def from_half_spectrum(cls, half, n):
        """Pack the ``k = 0..N//2`` part of a Hermitian vector (as returned by :func:`numpy.fft.rfft`)."""
        half = np.asarray(half)
        m = (n - 1) // 2
        values = np.empty((*half.shape[:-1], n))
        values[..., 0] = half[..., 0].real
        values[..., 1 : 2 * m : 2] = half[..., 1 : m + 1].real
        values[..., 2 : 2 * m + 1 : 2] = half[..., 1 : m + 1].imag
        if n % 2 == 0 and n > 1:
            values[..., n - 1] = half[..., n // 2].real
        return cls(values)

    @classmethod
    def from_complex(cls, full, tolerance=SYMMETRY_TOLERANCE):
        """Build from all ``N`` complex entries, they must satisfy ``z_k = conj(z_{N-k})``."""
        full = np.asarray(full, dtype=np.complex128)
        n = full.shape[-1]
        mirrored = np.conj(full[..., (-np.arange(n)) % n])
        residue = np.max(np.abs(full - mirrored), initial=0.0)
        scale = max(1.0, float(np.max(np.abs(full), initial=0.0)))
        if residue > tolerance * scale:
            msg = f"vector is not Hermitian symmetric, residue {residue:.3g}"
            raise SymmetryError(msg)
        return cls.from_half_spectrum(full[..., : n // 2 + 1], n)

    def half_spectrum(self):
        n, m = self.n, (self.n - 1) // 2
        half = np.zeros((*self.values.shape[:-1], n // 2 + 1), dtype=np.complex128)
        half[..., 0] = self.values[..., 0]
        half[..., 1 : m + 1] = self.values[..., 1 : 2 * m : 2] + 1j * self.values[..., 2 : 2 * m + 1 : 2]
        if n % 2 == 0 and n > 1:
            half[..., n // 2] = self.values[..., n - 1]
        return half

    def to_complex(self):
        n, half = self.n, self.half_spectrum()
        full = np.zeros((*self.values.shape[:-1], n), dtype=np.complex128)
        full[..., : n // 2 + 1] = half
        k = np.arange(n // 2 + 1, n)
        full[..., k] = np.conj(half[..., n - k])
        return full

    def moduli_squared(self):
        """``|z_k|^2`` per slot (both slots of a pair carry the modulus of the pair)."""
        v2 = self.values * self.values
        m = (self.n - 1) // 2
        out = v2.copy()
        pair = v2[..., 1 : 2 * m : 2] + v2[..., 2 : 2 * m + 1 : 2]
        out[..., 1 : 2 * m : 2] = pair
        out[..., 2 : 2 * m + 1 : 2] = pair
        return out

    def real_coordinates(self):
        """Orthonormal real coordinates ``w`` with ``||x||^2 = N ||w||^2`` (pairs scaled by ``sqrt(2)``)."""
        return self.values * np.sqrt(slot_multiplicity(self.n))

    @classmethod
    def from_real_coordinates(cls, w):
        w = np.asarray(w, dtype=np.float64)
        return cls(w / np.sqrt(slot_multiplicity(w.shape[-1])))

    def __mul__(self, other):
        return ModeVector(self.values * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ModeVector(self.values / other)


def to_fourier(x):
    x = np.asarray(x, dtype=np.float64)
    return ModeVector.from_half_spectrum(np.fft.rfft(x, axis=-1), x.shape[-1])


def from_fourier(zhat):
    return np.fft.irfft(zhat.half_spectrum(), n=zhat.n, axis=-1)


def to_modes(x):
    """The scaled coordinates ``z = x_hat / N``."""
    x = np.asarray(x, dtype=np.float64)
    return to_fourier(x) / x.shape[-1]


def state_of(z):
    """The state ``x(N z)``."""
    return from_fourier(z) * z.n


def norm_pF(zhat, p):  # noqa: N802
    """Weighted norm ``((1/N) sum_i |x_hat_i|^p)^{1/p}``, ``p = inf`` gives the maximum modulus."""
    if not p >= 1:
        msg = f"norm exponent must be at least one, got {p}"
        raise DomainError(msg)
    moduli = np.abs(zhat.to_complex())
    if math.isinf(p):
        return np.max(moduli, axis=-1)
    return np.mean(moduli**p, axis=-1) ** (1.0 / p)


def _mode_eigenvalues(s):
    return s.lam[slot_modes(s.n)]


def quadratic_F0(z, s):  # noqa: N802
    """Quadratic part ``(1/2) sum_k lambda_k |z_k|^2`` of the potential in mode coordinates."""
    weights = slot_multiplicity(z.n) * _mode_eigenvalues(s)
    return 0.5 * np.sum(weights * z.values * z.values, axis=-1)


def remainder_quartic(z, p):
    """``(1/4N) ||x(N z)||_4^4``, what is left of the rescaled potential once the quadratic part is removed."""
    x = state_of(z)
    x2 = x * x
    return np.sum(x2 * x2, axis=-1) / (4.0 * p.n)


def g_tilde(z, p):
    """The rescaled potential ``G`` expressed in the mode coordinates ``z``."""
    return quadratic_F0(z, spectrum(p)) + remainder_quartic(z, p)


def _transverse_parts(z, s):
    values = z.values
    z0 = values[..., 0]
    weights = slot_multiplicity(z.n)[1:]
    transverse_sq = np.sum(weights * values[..., 1:] ** 2, axis=-1)
    transverse_quad = 0.5 * np.sum(weights * _mode_eigenvalues(s)[1:] * values[..., 1:] ** 2, axis=-1)
    return z0, transverse_sq, transverse_quad


def tube_lower_bound(z, s):
    """``-z_0^2/2 + z_0^4/4 + (1/2) sum_{k>=1} lambda_k |z_k|^2``, never above the rescaled potential."""
    z0, _, transverse_quad = _transverse_parts(z, s)
    return -0.5 * z0**2 + 0.25 * z0**4 + transverse_quad


def lower_corridor_approx(z, s):
    """Expansion of the potential in the transverse modes only, accurate along the whole corridor."""
    z0, transverse_sq, transverse_quad = _transverse_parts(z, s)
    return -0.5 * z0**2 + 0.25 * z0**4 + transverse_quad + 1.5 * z0**2 * transverse_sq


@dataclass(frozen=True, eq=False)
class NeighborhoodSpec:
    """Box ``C_delta`` around the saddle, ``|z_k| <= delta r_k / sqrt(|lambda_k|)``, and the ball radius ``rho``."""

    delta: float
    K: float  # noqa: N815
    alpha: float
    rho: float
    r: np.ndarray

    @classmethod
    def create(cls, p, K=1.0, alpha=0.125, rho=0.2, delta_cap=0.1, delta=None):  # noqa: N803, PLR0913
        if not 0 < alpha < 0.25:  # noqa: PLR2004
            msg = f"alpha must be in (0, 1/4), got {alpha}"
            raise DomainError(msg)
        if not K > 0 or not rho > 0:
            msg = f"K and rho must be positive, got K={K} rho={rho}"
            raise DomainError(msg)
        if delta is None:
            delta = min(math.sqrt(K * p.epsilon * abs(math.log(p.epsilon))), delta_cap)
        if not delta > 0:
            msg = f"neighborhood size must be positive, got delta={delta} (epsilon={p.epsilon})"
            raise DomainError(msg)
        k = np.arange(p.n)
        folded = np.minimum(k, p.n - k)
        r = np.where(folded == 0, 1.0, 4.0 * np.maximum(folded, 1) ** alpha)
        r.setflags(write=False)
        return cls(delta=float(delta), K=float(K), alpha=float(alpha), rho=float(rho), r=r)

    def bounds(self, s):
        """Largest allowed ``|z_k|`` per storage slot."""
        modes = slot_modes(s.n)
        return self.delta * self.r[modes] / np.sqrt(np.abs(s.lam[modes]))

    def k_q(self, q):
        """``(sum_{k>=1} (r_k / k)^q)^{1/q}``, finite when ``q (1 - alpha) > 1``."""
        exponent = q * (1.0 - self.alpha)
        if exponent <= 1:
            return math.inf
        return 4.0 * float(zeta(exponent)) ** (1.0 / q)

    def d_q(self, q, s):
        """``(sum_k r_k^q / |lambda_k|^{q/2})^{1/q}`` over all ``N`` modes."""
        return float(np.sum(self.r**q / np.abs(s.lam) ** (q / 2.0))) ** (1.0 / q)


class NormConstants(NamedTuple):
    k_43: float
    b3: float
    b4: float
    a1: float
    a5: float


def norm_constants(spec, s):
    """
    Constants bounding the non quadratic part on ``C_delta`` (Hausdorff-Young constant taken as one).

    ``||x(N z)||_p^p <= delta^p N B_p`` with ``B_p = D_q^p``, ``1/p + 1/q = 1``; ``A_1 = B_4 / 4`` bounds the quartic
    remainder by ``A_1 delta^4`` and ``A_5 = 4 B_3 + B_4 delta`` bounds the corridor expansion error by ``A_5 delta^3``.
    """
    b3 = spec.d_q(1.5, s) ** 3
    b4 = spec.d_q(4.0 / 3.0, s) ** 4
    return NormConstants(k_43=spec.k_q(4.0 / 3.0), b3=b3, b4=b4, a1=b4 / 4.0, a5=4.0 * b3 + b4 * spec.delta)


def in_C_delta(z, spec, s):  # noqa: N802
    bounds = spec.bounds(s)
    return np.all(np.sqrt(z.moduli_squared()) <= bounds * (1.0 + SYMMETRY_TOLERANCE), axis=-1)


def in_corridor(z, spec, s):
    """Membership of the corridor joining the two balls, ``|z_0| < 1 - rho`` and the transverse part of ``C_delta``."""
    bounds = spec.bounds(s)[1:]
    transverse = np.all(np.sqrt(z.moduli_squared()[..., 1:]) <= bounds * (1.0 + SYMMETRY_TOLERANCE), axis=-1)
    return transverse & (np.abs(z.z0) < 1.0 - spec.rho)


def sample_box(spec, s, rng, size, *, boundary=False, z0_range=None):
    """
    Draw mode vectors uniformly from ``C_delta`` (or from its extreme boundary).

    :param boundary: put every mode at its largest allowed modulus, with random signs and phases
    :param z0_range: ``(low, high)`` range of ``z_0``, defaults to ``[-delta, delta]``
    """
    n = s.n
    bounds = spec.bounds(s)
    real = np.flatnonzero(slot_multiplicity(n) == 1)
    values = np.empty((size, n))
    if boundary:
        signs = 2.0 * rng.integers(0, 2, size=(size, len(real))) - 1.0
        values[:, real] = signs * bounds[real]
    else:
        values[:, real] = rng.uniform(-1.0, 1.0, size=(size, len(real))) * bounds[real]
    m = (n - 1) // 2
    if m:
        radius = bounds[1 : 2 * m : 2] * (1.0 if boundary else np.sqrt(rng.uniform(size=(size, m))))
        phase = rng.uniform(0.0, 2.0 * math.pi, size=(size, m))
        values[:, 1 : 2 * m : 2] = radius * np.cos(phase)
        values[:, 2 : 2 * m + 1 : 2] = radius * np.sin(phase)
    if z0_range is not None:
        values[:, 0] = rng.uniform(*z0_range, size=size)
    return ModeVector(values)


def sample_strip(spec, s, rng, size, *, spread=3.0):
    """
    Draw mode vectors in the strip ``|z_0| < delta`` but outside ``C_delta``.

    Transverse modes come from ``C_delta`` blown up by ``spread``, draws that land back inside the box are rejected.
    """
    if s.n < 2:  # noqa: PLR2004
        msg = "the strip has no transverse directions for a single particle"
        raise DomainError(msg)
    if not spread > 1:
        msg = f"spread must exceed one to leave the box, got {spread}"
        raise DomainError(msg)
    kept, count = [], 0
    while count < size:
        values = sample_box(spec, s, rng, size).values
        values[:, 1:] *= spread
        values[:, 0] = rng.uniform(-spec.delta, spec.delta, size=size)
        outside = values[~in_C_delta(ModeVector(values), spec, s)]
        kept.append(outside)
        count += len(outside)
    return ModeVector(np.concatenate(kept)[:size])


def strip_separation_margin(z, p, spec, s):
    """
    ``G~(z) - delta^2`` for vectors in the strip ``|z_0| < delta`` outside ``C_delta``, ``nan`` for all others.

    A non negative margin everywhere means the strip only meets low ground inside ``C_delta``, so leaving the
    basin of ``I_-`` for that of ``I_+`` has to cross the box.
    """
    selected = (np.abs(z.z0) < spec.delta) & ~in_C_delta(z, spec, s)
    return np.where(selected, g_tilde(z, p) - spec.delta**2, np.nan)


__all__ = [
    "ModeVector",
    "NeighborhoodSpec",
    "NormConstants",
    "from_fourier",
    "g_tilde",
    "in_C_delta",
    "in_corridor",
    "lower_corridor_approx",
    "norm_constants",
    "norm_pF",
    "quadratic_F0",
    "remainder_quartic",
    "sample_box",
    "sample_strip",
    "slot_modes",
    "slot_multiplicity",
    "state_of",
    "strip_separation_margin",
    "to_fourier",
    "to_modes",
    "tube_lower_bound",
]
