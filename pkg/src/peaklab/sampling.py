"""Uniform sampling from conjugacy classes and empirical summaries.

A class element is drawn by shuffling 1..n uniformly (Fisher-Yates, via
the generator's permutation routine) and closing consecutive blocks of
the word into cycles whose lengths are the parts of the cycle type in a
fixed canonical order (largest first).  Every class element arises from
exactly prod_i i^{m_i} m_i! arrangements, so the draw is exactly uniform.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .combinatorics import CycleType
from .errors import InternalConsistencyError
from .peaks import Permutation

GENERATOR_ID = "numpy-pcg64"


@dataclass(frozen=True)
class SeedSpec:
    """Reproducibility contract: identical SeedSpec, identical samples."""

    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        for name, value in (("seed", self.seed), ("stream", self.stream)):
            if not 0 <= value < 2**64:
                raise ValueError(f"{name} must be a 64-bit unsigned int, got {value}")


def _generator(spec: SeedSpec) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=spec.seed, spawn_key=(spec.stream,))
    return np.random.Generator(np.random.PCG64(seq))


def _cycle_closers(lam: CycleType) -> np.ndarray:
    """Successor index within each block for the canonical block layout."""
    nxt = np.empty(lam.n, dtype=np.int64)
    pos = 0
    for part in lam.parts():
        nxt[pos : pos + part - 1] = np.arange(pos + 1, pos + part)
        nxt[pos + part - 1] = pos
        pos += part
    return nxt


def _assemble(word: np.ndarray, nxt: np.ndarray, out: np.ndarray) -> None:
    # word holds the cycle elements in block order; out becomes the 0-based
    # one-line notation of the permutation mapping word[j] -> word[nxt[j]]
    out[word] = word[nxt]


def sample_class(lam: CycleType, seed: SeedSpec) -> Permutation:
    """One exactly uniform draw from the conjugacy class of ``lam``."""
    rng = _generator(seed)
    nxt = _cycle_closers(lam)
    word = rng.permutation(lam.n)
    out = np.empty(lam.n, dtype=np.int64)
    _assemble(word, nxt, out)
    return Permutation((out + 1).tolist())


@dataclass(frozen=True)
class SampleStats:
    """Empirical summary of integer-valued draws.

    ``histogram`` maps value -> frequency; mean and unbiased variance are
    derived from it exactly and then rounded once, so merging is
    associative and order-independent.
    """

    count: int
    mean: float
    variance: float
    histogram: dict[int, int]

    @classmethod
    def from_histogram(cls, histogram: Mapping[int, int]) -> "SampleStats":
        cleaned: dict[int, int] = {}
        for k, v in histogram.items():
            k = int(k)
            v = int(v)
            if v < 0:
                raise ValueError(f"negative frequency at {k}")
            if v:
                cleaned[k] = v
        count = sum(cleaned.values())
        if count == 0:
            raise ValueError("empty histogram")
        first = sum(k * v for k, v in cleaned.items())
        mean = Fraction(first, count)
        if count < 2:
            variance = Fraction(0)
        else:
            second = sum(k * k * v for k, v in cleaned.items())
            variance = Fraction(count * second - first * first, count * (count - 1))
        return cls(
            count=count,
            mean=float(mean),
            variance=float(variance),
            histogram=dict(sorted(cleaned.items())),
        )

    def merge(self, other: "SampleStats") -> "SampleStats":
        merged = Counter(self.histogram)
        merged.update(other.histogram)
        return SampleStats.from_histogram(dict(merged))


def run_experiment(
    lam: CycleType,
    num_samples: int,
    seed: SeedSpec,
    validate: bool = False,
) -> SampleStats:
    """Draw ``num_samples`` class elements and tally their peak counts.

    ``validate`` re-derives the cycle type of every draw and fails loudly
    on a mismatch; meant for tests, not hot paths.
    """
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    rng = _generator(seed)
    n = lam.n
    nxt = _cycle_closers(lam)
    out = np.empty(n, dtype=np.int64)
    counts: Counter = Counter()
    expected = lam.parts() if validate else None
    for _ in range(num_samples):
        word = rng.permutation(n)
        _assemble(word, nxt, out)
        if n >= 3:
            mid = out[1:-1]
            k = int(np.count_nonzero((out[:-2] < mid) & (mid > out[2:])))
        else:
            k = 0
        counts[k] += 1
        if validate:
            drawn = Permutation((out + 1).tolist())
            if drawn.cycle_type().parts() != expected:
                raise InternalConsistencyError("draw left the target class")
    return SampleStats.from_histogram(dict(counts))


def element_histogram(
    lam: CycleType,
    num_samples: int,
    seed: SeedSpec,
) -> dict[tuple, int]:
    """Frequencies of the drawn one-line words, for uniformity audits."""
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    rng = _generator(seed)
    nxt = _cycle_closers(lam)
    out = np.empty(lam.n, dtype=np.int64)
    counts: Counter = Counter()
    for _ in range(num_samples):
        word = rng.permutation(lam.n)
        _assemble(word, nxt, out)
        counts[tuple(int(v) + 1 for v in out)] += 1
    return dict(counts)


def _normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def ks_distance(stats: SampleStats, mean: float, variance: float) -> float:
    """Two-sided KS statistic against a normal law, on the half-integer grid.

    The empirical CDF of the integer-valued sample is compared with the
    normal CDF at k - 1/2 and k + 1/2 around every support point; the
    half-unit shift removes the lattice bias of order 1/(2 sigma).
    """
    if variance <= 0:
        raise ValueError("variance must be positive")
    sd = math.sqrt(variance)
    total = stats.count
    cum = 0
    worst = 0.0
    for k in sorted(stats.histogram):
        below = _normal_cdf((k - 0.5 - mean) / sd)
        worst = max(worst, abs(cum / total - below))
        cum += stats.histogram[k]
        above = _normal_cdf((k + 0.5 - mean) / sd)
        worst = max(worst, abs(cum / total - above))
    return worst


def chi_square_uniformity(observed: Mapping, size: int) -> tuple[float, int]:
    """Pearson statistic for uniformity over ``size`` equally likely cells.

    ``observed`` maps outcomes to frequencies; outcomes never seen
    contribute expected-count mass.  Requires at least 5 expected counts
    per cell.  Returns (statistic, degrees of freedom).
    """
    if size < 2:
        raise ValueError("need at least 2 cells")
    if len(observed) > size:
        raise ValueError("more distinct outcomes than cells")
    total = 0
    for value in observed.values():
        if value < 0:
            raise ValueError("negative frequency")
        total += value
    if total < 5 * size:
        raise ValueError(
            f"insufficient samples: need >= {5 * size} for {size} cells, got {total}"
        )
    expected = total / size
    stat = sum((c - expected) ** 2 / expected for c in observed.values())
    stat += (size - len(observed)) * expected
    return stat, size - 1
