import math

import pytest

from aes_multicore.bench.stats import filter_samples, mean, reject_outliers, throughput_mbps
from aes_multicore.errors import InvalidArgumentError


@pytest.mark.parametrize("samples, expected", [
    ([10, 10, 10, 10], [10, 10, 10, 10]),
    ([9, 10, 11, 12, 30], [9, 10, 11, 12]),
    ([10, 10, 10, 100], [10, 10, 10]),
    ([5.0], [5.0]),
])
def test_worked_examples(samples, expected):
    assert reject_outliers(samples) == expected


def test_order_is_preserved():
    assert reject_outliers([12, 30, 9, 11, 10]) == [12, 9, 11, 10]


def test_zero_mad_band_is_relative_to_the_median():
    # 100.5 lies within 1% of 100, 103 does not
    assert reject_outliers([100, 100, 100, 100.5, 103]) == [100, 100, 100, 100.5]


def test_empty_input_is_rejected():
    with pytest.raises(InvalidArgumentError):
        reject_outliers([])


def test_idempotence_and_floor_on_random_lists(rng):
    for trial in range(10_000):
        n = int(rng.integers(1, 16))
        if trial % 3 == 0:
            # coarse values so ties and a zero MAD are common
            samples = [float(v) for v in rng.integers(1, 5, size=n)]
        elif trial % 3 == 1:
            samples = [float(v) for v in rng.lognormal(0.0, 1.0, size=n)]
        else:
            samples = [float(v) for v in rng.normal(10.0, 0.5, size=n)]
            samples[int(rng.integers(0, n))] *= 20
        once = reject_outliers(samples)
        assert reject_outliers(once) == once
        assert len(once) >= math.ceil(n / 2)
        assert all(s in samples for s in once)


def test_mean_of_identical_samples_is_exact():
    assert mean([0.1, 0.1, 0.1]) == 0.1
    assert mean([9, 10, 11, 12]) == 10.5


def test_throughput_arithmetic():
    assert throughput_mbps(10**9, 2.0) == 4000.0
    assert throughput_mbps(1_000_000, 1.0) == 8.0


def test_scattered_samples_are_kept_and_flagged():
    samples = [0.356, 1.946, 4.59, 0.218, 0.085, 1.853, 12.78]
    result = filter_samples(samples)
    assert result.scattered
    assert result.retained == samples
    assert not filter_samples([9, 10, 11, 12, 30]).scattered
