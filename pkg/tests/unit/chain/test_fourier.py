from __future__ import annotations

import math

import numpy as np
import pytest

from metachain.chain.fourier import (
    ModeVector,
    NeighborhoodSpec,
    from_fourier,
    g_tilde,
    in_C_delta,
    in_corridor,
    lower_corridor_approx,
    norm_constants,
    norm_pF,
    quadratic_F0,
    remainder_quartic,
    sample_box,
    sample_strip,
    slot_modes,
    slot_multiplicity,
    state_of,
    strip_separation_margin,
    to_fourier,
    to_modes,
    tube_lower_bound,
)
from metachain.chain.potential import ChainParams, eval_G
from metachain.chain.spectral import spectrum
from metachain.util.error import DomainError, SymmetryError

SIZES = [2, 3, 4, 5, 8, 16, 64]


def test_constant_state_is_mode_zero():
    zhat = to_fourier([1.0, 1.0, 1.0, 1.0])
    assert np.allclose(zhat.to_complex(), [4, 0, 0, 0], atol=1e-15)


def test_slot_layout():
    assert slot_modes(6).tolist() == [0, 1, 1, 2, 2, 3]
    assert slot_modes(5).tolist() == [0, 1, 1, 2, 2]
    assert slot_multiplicity(6).tolist() == [1, 2, 2, 2, 2, 1]
    assert slot_multiplicity(1).tolist() == [1]


@pytest.mark.parametrize("n", SIZES)
def test_round_trip(n, rng):
    x = rng.normal(size=(200, n))
    assert np.allclose(from_fourier(to_fourier(x)), x, atol=1e-12, rtol=0)


@pytest.mark.parametrize("n", SIZES)
def test_matches_full_transform(n, rng):
    x = rng.normal(size=n)
    full = np.fft.fft(x)
    assert np.allclose(to_fourier(x).to_complex(), full, atol=1e-12)
    assert np.allclose(ModeVector.from_complex(full).values, to_fourier(x).values, atol=1e-12)


def test_broken_hermitian_symmetry():
    with pytest.raises(SymmetryError, match="not Hermitian symmetric"):
        ModeVector.from_complex([1.0, 1.0 + 1.0j, 2.0, 1.0 + 1.0j])


@pytest.mark.parametrize("n", SIZES)
def test_parseval(n, rng):
    x = rng.normal(size=(10_000, n))
    direct = np.sqrt(np.sum(x * x, axis=-1))
    assert np.allclose(norm_pF(to_fourier(x), 2), direct, rtol=1e-12, atol=0)


@pytest.mark.parametrize("n", SIZES)
@pytest.mark.parametrize(("p", "q"), [(4.0, 4.0 / 3.0), (math.inf, 1.0)])
def test_hausdorff_young_with_unit_constant(n, p, q, rng):
    x = rng.standard_t(df=3, size=(10_000, n))
    lhs = np.max(np.abs(x), axis=-1) if math.isinf(p) else np.sum(np.abs(x) ** p, axis=-1) ** (1.0 / p)
    assert np.all(lhs <= norm_pF(to_fourier(x), q) * (1.0 + 1e-12))


def test_norm_of_constant_mode():
    assert norm_pF(ModeVector(np.array([4.0, 0.0, 0.0, 0.0])), 2) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        norm_pF(ModeVector(np.zeros(4)), 0.5)


def test_quadratic_part_examples():
    s = spectrum(ChainParams.create(6, 2.0, 0.1))
    assert quadratic_F0(ModeVector.zeros(6), s) == 0.0
    assert quadratic_F0(ModeVector(np.array([1.0, 0, 0, 0, 0, 0])), s) == pytest.approx(-0.5)
    pair = ModeVector(np.array([0.0, 0.3, -0.4, 0, 0, 0]))
    assert quadratic_F0(pair, s) == pytest.approx(0.5 * s.lam[1] * 0.25 * 2)
    middle = ModeVector(np.array([0.0, 0, 0, 0, 0, 0.7]))
    assert quadratic_F0(middle, s) == pytest.approx(0.5 * s.lam[3] * 0.49)


@pytest.mark.parametrize("n", [2, 3, 4, 7, 8])
def test_potential_at_the_minima_and_saddle(n):
    p = ChainParams.create(n, 2.0, 0.1)
    plus = ModeVector(np.eye(1, n)[0])
    assert g_tilde(plus, p) == pytest.approx(-0.25, abs=1e-14)
    assert g_tilde(-1.0 * plus, p) == pytest.approx(-0.25, abs=1e-14)
    assert g_tilde(ModeVector.zeros(n), p) == 0.0
    assert lower_corridor_approx(plus, spectrum(p)) == pytest.approx(-0.25)


@pytest.mark.parametrize("n", [2, 3, 8, 17])
@pytest.mark.parametrize("mu", [1.5, 4.0])
def test_mode_potential_is_the_rescaled_potential(n, mu, rng):
    p = ChainParams.create(n, mu, 0.1)
    x = rng.normal(size=(500, n))
    assert np.allclose(g_tilde(to_modes(x), p), eval_G(p, x), rtol=1e-12, atol=1e-12)
    assert np.allclose(state_of(to_modes(x)), x, atol=1e-12)


@pytest.mark.parametrize("n", [2, 4, 5, 16, 64])
def test_tube_lower_bound(n, rng):
    for mu in (1.2, 2.0, 8.0):
        p = ChainParams.create(n, mu, 0.1)
        z = to_modes(rng.normal(scale=0.7, size=(10_000, n)))
        assert np.all(g_tilde(z, p) >= tube_lower_bound(z, spectrum(p)) - 1e-12)


def test_neighborhood_shape():
    p = ChainParams.create(9, 2.0, 0.01)
    spec = NeighborhoodSpec.create(p)
    assert spec.delta == pytest.approx(0.1)
    assert spec.r[0] == 1.0
    assert np.array_equal(spec.r[1:], spec.r[1:][::-1])
    assert np.all(np.diff(spec.r[1:5]) > 0)
    assert spec.r[1] == pytest.approx(4.0)
    small = NeighborhoodSpec.create(p.with_epsilon(1e-4))
    assert small.delta == pytest.approx(math.sqrt(1e-4 * math.log(1e4)))
    assert math.isfinite(spec.k_q(4.0 / 3.0))
    assert math.isinf(spec.k_q(1.0))


@pytest.mark.parametrize(
    "kwargs",
    [{"alpha": 0.25}, {"alpha": 0.0}, {"K": 0.0}, {"rho": -1.0}, {"delta": 0.0}],
)
def test_neighborhood_validation(kwargs):
    with pytest.raises(DomainError):
        NeighborhoodSpec.create(ChainParams.create(4, 2.0, 0.05), **kwargs)


def test_membership_of_the_box(rng):
    p = ChainParams.create(6, 2.0, 0.05)
    s = spectrum(p)
    spec = NeighborhoodSpec.create(p)
    assert in_C_delta(ModeVector.zeros(6), spec, s)
    outside = ModeVector(np.array([2.0 * spec.delta, 0, 0, 0, 0, 0]))
    assert not in_C_delta(outside, spec, s)
    assert np.all(in_C_delta(sample_box(spec, s, rng, 500, boundary=True), spec, s))
    assert np.all(in_C_delta(sample_box(spec, s, rng, 500), spec, s))


def test_corridor_membership(rng):
    p = ChainParams.create(6, 2.0, 0.05)
    s = spectrum(p)
    spec = NeighborhoodSpec.create(p, rho=0.2)
    z = sample_box(spec, s, rng, 500, z0_range=(-0.79, 0.79))
    assert np.all(in_corridor(z, spec, s))
    assert not in_corridor(ModeVector(np.array([0.9, 0, 0, 0, 0, 0])), spec, s)


@pytest.mark.parametrize("n", [2, 3, 4, 16, 33, 64])
def test_norm_bound_on_the_box_boundary(n, rng):
    p = ChainParams.create(n, 2.0, 0.02)
    s = spectrum(p)
    spec = NeighborhoodSpec.create(p)
    constants = norm_constants(spec, s)
    x = state_of(sample_box(spec, s, rng, 10_000, boundary=True))
    for power, b in ((3, constants.b3), (4, constants.b4)):
        assert np.all(np.sum(np.abs(x) ** power, axis=-1) <= spec.delta**power * n * b * (1.0 + 1e-9))


@pytest.mark.parametrize("n", [2, 3, 4, 16, 33, 64])
def test_quartic_remainder_bound(n, rng):
    p = ChainParams.create(n, 2.0, 0.02)
    s = spectrum(p)
    spec = NeighborhoodSpec.create(p)
    z = sample_box(spec, s, rng, 10_000)
    remainder = remainder_quartic(z, p)
    assert np.all(remainder >= 0)
    assert remainder_quartic(ModeVector.zeros(n), p) == 0.0
    assert np.all(remainder <= norm_constants(spec, s).a1 * spec.delta**4 * (1.0 + 1e-9))
    assert np.allclose(remainder, g_tilde(z, p) - quadratic_F0(z, s), atol=1e-13)


@pytest.mark.parametrize("n", [2, 3, 4, 16, 33, 64])
def test_corridor_expansion_error(n, rng):
    p = ChainParams.create(n, 2.0, 0.02)
    s = spectrum(p)
    spec = NeighborhoodSpec.create(p)
    z = sample_box(spec, s, rng, 10_000, z0_range=(-1.0, 1.0))
    error = np.abs(g_tilde(z, p) - lower_corridor_approx(z, s))
    assert np.all(error <= norm_constants(spec, s).a5 * spec.delta**3 * (1.0 + 1e-9))


def test_corridor_expansion_without_transverse_part():
    s = spectrum(ChainParams.create(4, 2.0, 0.1))
    z0 = np.linspace(-1.5, 1.5, 7)
    values = np.zeros((7, 4))
    values[:, 0] = z0
    assert np.allclose(lower_corridor_approx(ModeVector(values), s), -0.5 * z0**2 + 0.25 * z0**4)


@pytest.mark.parametrize("n", [2, 3, 4, 16, 64])
@pytest.mark.parametrize("mu", [1.2, 2.0])
def test_strip_outside_the_box_stays_above_delta_squared(n, mu, rng):
    p = ChainParams.create(n, mu, 0.02)
    s = spectrum(p)
    spec = NeighborhoodSpec.create(p)
    z = sample_strip(spec, s, rng, 10_000)
    assert z.values.shape == (10_000, n)
    margin = strip_separation_margin(z, p, spec, s)
    assert not np.any(np.isnan(margin))
    assert np.all(margin >= 0)


@pytest.mark.parametrize("n", [2, 5, 16])
def test_strip_just_outside_the_box_faces(n, rng):
    p = ChainParams.create(n, 2.0, 0.02)
    s = spectrum(p)
    spec = NeighborhoodSpec.create(p)
    values = sample_box(spec, s, rng, 2_000, boundary=True).values
    values[:, 1:] *= 1.0 + 1e-6
    values[:, 0] = rng.uniform(-spec.delta, spec.delta, size=2_000) * (1.0 - 1e-9)
    assert np.all(strip_separation_margin(ModeVector(values), p, spec, s) >= 0)


def test_strip_margin_ignores_the_box_and_the_wells(rng):
    p = ChainParams.create(6, 2.0, 0.05)
    s = spectrum(p)
    spec = NeighborhoodSpec.create(p)
    assert np.all(np.isnan(strip_separation_margin(sample_box(spec, s, rng, 200), p, spec, s)))
    well = ModeVector(np.eye(1, 6)[0])
    assert np.isnan(strip_separation_margin(well, p, spec, s))


def test_strip_sampling_validation(rng):
    single = ChainParams.single_well(0.05)
    with pytest.raises(DomainError, match="no transverse directions"):
        sample_strip(NeighborhoodSpec.create(single), spectrum(single), rng, 10)
    p = ChainParams.create(4, 2.0, 0.05)
    with pytest.raises(DomainError, match="spread must exceed one"):
        sample_strip(NeighborhoodSpec.create(p), spectrum(p), rng, 10, spread=1.0)
