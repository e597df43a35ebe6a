"""Robust filtering and averaging of timing samples."""
import math
import statistics
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from aes_multicore.errors import InvalidArgumentError

MAD_MULTIPLIER = 3.0
# relative band around the median used when the MAD is zero
ZERO_MAD_TOLERANCE = 0.01


def _filter_pass(values: np.ndarray) -> np.ndarray:
    """
    One median/MAD pass; returns the kept positions in input order.

    Keeps samples within 3 MADs of the median (within 1% of the median when
    the MAD is zero), and never fewer than half of them: if the band holds
    too few, the closest ones to the median are kept, earlier index first.
    """
    median = np.median(values)
    deviation = np.abs(values - median)
    mad = np.median(deviation)
    if mad > 0:
        keep = deviation <= MAD_MULTIPLIER * mad
    else:
        keep = deviation <= ZERO_MAD_TOLERANCE * abs(median)

    floor = math.ceil(len(values) / 2)
    if int(keep.sum()) < floor:
        closest = np.argsort(deviation, kind='stable')[:floor]
        keep = np.zeros(len(values), dtype=bool)
        keep[closest] = True
    return np.flatnonzero(keep)


@dataclass(frozen=True)
class SampleFilter:
    retained: list[float]
    # True when the samples were too scattered to filter and all were kept
    scattered: bool = False


def filter_samples(samples: Sequence[float]) -> SampleFilter:
    """
    Drops high-deviation samples, preserving input order.

    The median/MAD pass is repeated on the survivors until it removes
    nothing, so the result is stable under a second application. If the
    repetition would leave fewer than half of the original samples, the
    samples are too scattered to single out a majority: all are kept and
    the result is flagged ``scattered``.
    """
    if len(samples) == 0:
        raise InvalidArgumentError("reject_outliers needs at least one sample")

    values = np.asarray(samples, dtype=float)
    floor = math.ceil(len(values) / 2)
    kept = np.arange(len(values))
    while True:
        survivors = kept[_filter_pass(values[kept])]
        if len(survivors) == len(kept):
            return SampleFilter([samples[i] for i in kept])
        if len(survivors) < floor:
            return SampleFilter(list(samples), scattered=True)
        kept = survivors


def reject_outliers(samples: Sequence[float]) -> list[float]:
    return filter_samples(samples).retained


def mean(samples: Sequence[float]) -> float:
    # exact rational mean: identical samples average to themselves
    return float(statistics.mean(samples))


def throughput_mbps(size_bytes: int, seconds: float) -> float:
    """Decimal megabits per second."""
    return size_bytes * 8 / (seconds * 1e6)
