from __future__ import annotations

import math

import pytest

from metachain.simulate import mean_hitting_1d
from metachain.util.error import DomainError


@pytest.mark.parametrize(("epsilon", "a", "b"), [(0.0, -1.0, 0.8), (-0.1, -1.0, 0.8), (0.1, 0.8, 0.8), (0.1, 1.0, 0.0)])
def test_domain(epsilon, a, b):
    with pytest.raises(DomainError):
        mean_hitting_1d(epsilon, a, b)


def test_small_noise_approaches_kramers():
    epsilon = 0.02
    kramers = 2.0 * math.pi / math.sqrt(2.0) * math.exp(1.0 / (4.0 * epsilon))
    assert mean_hitting_1d(epsilon, -1.0, 0.8) / kramers == pytest.approx(1.0, rel=0.1)


def test_farther_targets_take_longer():
    times = [mean_hitting_1d(0.1, -1.0, b) for b in (-0.5, 0.0, 0.5, 0.8)]
    assert all(a < b for a, b in zip(times, times[1:]))


def test_reaching_the_saddle_takes_half_the_time():
    epsilon = 0.02
    assert mean_hitting_1d(epsilon, -1.0, 0.0) / mean_hitting_1d(epsilon, -1.0, 0.8) == pytest.approx(0.5, rel=0.05)
