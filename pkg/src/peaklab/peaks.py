"""Exact peak statistics on the symmetric group and its conjugacy classes.

A peak of a permutation w of {1..n} is an interior position i with
2 <= i <= n-1 and w(i-1) < w(i) > w(i+1); a descent is a position i < n
with w(i) > w(i+1).  The peak generating polynomial of S_n is tied to the
descent (Eulerian) polynomial by the substitution q = 4t/(1+t)^2:

    W_n(4t/(1+t)^2) = (2/(1+t))^{n+1} * A_n(t),

where A_n(t) = sum_w t^{des(w)+1} and W_n(t) = sum_w t^{peaks(w)+1}.
The per-class refinement replaces A_n by a weighted sum over an outer
integer index a, with weights built from necklace counts; this module
solves both identities exactly over the rationals.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from fractions import Fraction
from itertools import permutations as _it_permutations
from typing import Iterable, Mapping, Sequence

from mpmath import mp

from .combinatorics import CycleType, class_size, moebius, stirling2_row
from .errors import InternalConsistencyError, SizeLimitError
from .polynomial import DensePolynomial, TruncatedSeries

EULERIAN_GUARD = 2000
PEAK_POLY_GUARD = 500
SERIES_COEFF_GUARD = 2000
BRUTE_FORCE_GUARD = 10
EXACT_CLASS_GUARD = 300


def exact_class_guard() -> int:
    """Size guard for exact per-class work; PEAKLAB_MAX_N overrides it."""
    raw = os.environ.get("PEAKLAB_MAX_N")
    if raw is None:
        return EXACT_CLASS_GUARD
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"PEAKLAB_MAX_N must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"PEAKLAB_MAX_N must be >= 1, got {value}")
    return value


class Permutation:
    """Permutation of {1..n} in one-line notation."""

    __slots__ = ("word",)

    def __init__(self, word: Iterable[int]):
        w = tuple(int(v) for v in word)
        if not w:
            raise ValueError("empty permutation")
        if sorted(w) != list(range(1, len(w) + 1)):
            raise ValueError("word is not a bijection on 1..n")
        self.word = w

    @property
    def n(self) -> int:
        return len(self.word)

    def cycle_type(self) -> CycleType:
        return CycleType.from_parts(_cycle_parts(self.word))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.word == other.word

    def __hash__(self) -> int:
        return hash(self.word)

    def __repr__(self) -> str:
        return f"Permutation({list(self.word)!r})"


def _cycle_parts(word: Sequence[int]) -> tuple[int, ...]:
    n = len(word)
    seen = bytearray(n)
    parts: list[int] = []
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = 1
            j = word[j] - 1
            length += 1
        parts.append(length)
    return tuple(parts)


def _word_of(pi: "Permutation | Sequence[int]") -> Sequence[int]:
    return pi.word if isinstance(pi, Permutation) else pi


def count_peaks(pi: "Permutation | Sequence[int]") -> int:
    """Number of interior positions i (2 <= i <= n-1) with a strict local max."""
    w = _word_of(pi)
    return sum(1 for j in range(1, len(w) - 1) if w[j - 1] < w[j] > w[j + 1])


def count_descents(pi: "Permutation | Sequence[int]") -> int:
    """Number of positions i < n with w(i) > w(i+1)."""
    w = _word_of(pi)
    return sum(1 for j in range(len(w) - 1) if w[j] > w[j + 1])


def eulerian_polynomial(n: int, max_n: int = EULERIAN_GUARD) -> DensePolynomial:
    """A_n(t) = sum over S_n of t^{des+1}, via the Stirling-number form.

    A_n(t) = sum_k k! S(n, k) t^k (1-t)^{n-k}; all integer arithmetic.
    """
    if n < 1:
        raise ValueError("eulerian_polynomial requires n >= 1")
    if n > max_n:
        raise SizeLimitError(f"eulerian_polynomial limited to n <= {max_n}, got {n}")
    row = stirling2_row(n)
    acc = [0] * (n + 1)
    pw = [1]  # (1-t)^{n-k}, grown as k steps downward
    fact = math.factorial(n)
    for k in range(n, -1, -1):
        weight = fact * row[k]
        if weight:
            for j, pc in enumerate(pw):
                acc[k + j] += weight * pc
        if k:
            fact //= k
            pw = [1] + [pw[j] - pw[j - 1] for j in range(1, len(pw))] + [-pw[-1]]
    return DensePolynomial(acc)


def _power_sum_numerators(max_m: int) -> list[DensePolynomial]:
    """B_0..B_max with sum_{a>=1} a^m t^a = B_m(t) / (1-t)^{m+1}.

    B_0 = t; for m >= 1, B_m is the Eulerian polynomial A_m.  Built by the
    recurrence B_{m+1} = t((1-t)B_m' + (m+1)B_m), which follows from
    applying t d/dt to the defining sum.
    """
    t = DensePolynomial([0, 1])
    one_minus_t = DensePolynomial([1, -1])
    out = [t]
    cur = t
    for m in range(max_m):
        cur = (one_minus_t * cur.derivative() + (m + 1) * cur) * t
        out.append(cur)
    return out


def eulerian_derivative_at_one(n: int, p: int) -> Fraction:
    """p-th derivative of A_n at t = 1, closed form, for 0 <= p <= 4."""
    if n < 1:
        raise ValueError("eulerian_derivative_at_one requires n >= 1")
    fact = math.factorial(n)
    if p == 0:
        return Fraction(fact)
    if p == 1:
        return Fraction(fact * (n + 1), 2)
    if p == 2:
        if n < 2:
            return Fraction(0)
        return Fraction(fact * (3 * n**2 + n - 2), 12)
    if p == 3:
        if n < 3:
            return Fraction(0)
        return Fraction(fact * (n**3 - 2 * n**2 - n + 2), 8)
    if p == 4:
        if n < 4:
            return Fraction(0)
        return Fraction(fact * (15 * n**4 - 90 * n**3 + 125 * n**2 + 78 * n - 152), 240)
    raise ValueError(f"unsupported derivative order {p}; only 0..4 have closed forms")


def _reciprocal_one_plus_t(order: int) -> TruncatedSeries:
    return TruncatedSeries([1, 1], order).inverse()


def _peak_substitution_series(order: int) -> TruncatedSeries:
    """4t/(1+t)^2 as a truncated series."""
    inv_sq = TruncatedSeries([1, 2, 1], order).inverse()
    return inv_sq * TruncatedSeries([0, 4], order)


def peak_polynomial(n: int, max_n: int = PEAK_POLY_GUARD) -> DensePolynomial:
    """W_n(t) = sum over S_n of t^{peaks+1}, solved exactly from A_n.

    Expands both sides of W_n(4t/(1+t)^2) = (2/(1+t))^{n+1} A_n(t) to
    series order n+2.  The basis element (4t/(1+t)^2)^{k+1} has lowest
    term 4^{k+1} t^{k+1}, so coefficients of W_n peel off triangularly;
    the residual series must then vanish identically.
    """
    if n < 1:
        raise ValueError("peak_polynomial requires n >= 1")
    if n > max_n:
        raise SizeLimitError(f"peak_polynomial limited to n <= {max_n}, got {n}")
    order = n + 2
    rhs = TruncatedSeries.from_polynomial(eulerian_polynomial(n), order)
    rhs = rhs * _reciprocal_one_plus_t(order).pow(n + 1) * (2 ** (n + 1))
    q = _peak_substitution_series(order)
    residual = rhs
    qpow = q
    kmax = (n - 1) // 2
    wcoeffs = [0] * (kmax + 2)
    for k in range(kmax + 1):
        for j in range(k + 1):
            if residual.coeffs[j] != 0:
                raise InternalConsistencyError(
                    f"unexpected low-order residual at t^{j} for n={n}"
                )
        w = Fraction(residual.coeffs[k + 1], 4 ** (k + 1))
        if w.denominator != 1 or w < 0:
            raise InternalConsistencyError(
                f"peak coefficient for k={k}, n={n} is not a nonnegative integer: {w}"
            )
        wcoeffs[k + 1] = int(w)
        residual = residual - qpow * wcoeffs[k + 1]
        if k < kmax:
            qpow = qpow * q
    if not residual.is_zero:
        raise InternalConsistencyError(f"residual series does not vanish for n={n}")
    return DensePolynomial(wcoeffs)


def peak_moments(n: int) -> tuple[Fraction, Fraction]:
    """Exact (mean, variance) of the peak count over all of S_n.

    Closed forms ((n-2)/3, 2(n+1)/45) hold for n >= 4; tiny n fall back
    to direct enumeration.
    """
    if n < 1:
        raise ValueError("peak_moments requires n >= 1")
    if n >= 4:
        return Fraction(n - 2, 3), Fraction(2 * (n + 1), 45)
    total = math.factorial(n)
    tally = Counter(count_peaks(w) for w in _it_permutations(range(1, n + 1)))
    mean = Fraction(sum(k * c for k, c in tally.items()), total)
    second = Fraction(sum(k * k * c for k, c in tally.items()), total)
    return mean, second - mean * mean


def necklace_count(a: int, i: int) -> Fraction:
    """Signed divisor sum (1/2i) sum_{odd d | i} mu(d) (2a)^{i/d}.

    Counts a family of primitive necklaces; always a positive integer for
    a >= 1 (verified by tests, returned as an exact rational).
    """
    if a < 1 or i < 1:
        raise ValueError("necklace_count requires a >= 1 and i >= 1")
    total = 0
    for d in range(1, i + 1, 2):
        if i % d == 0:
            mu = moebius(d)
            if mu:
                total += mu * (2 * a) ** (i // d)
    return Fraction(total, 2 * i)


def necklace_poly(i: int) -> DensePolynomial:
    """necklace_count(a, i) as a polynomial in a (degree i, leading 2^i/2i)."""
    if i < 1:
        raise ValueError("necklace_poly requires i >= 1")
    coeffs = [Fraction(0)] * (i + 1)
    for d in range(1, i + 1, 2):
        if i % d == 0:
            mu = moebius(d)
            if mu:
                e = i // d
                coeffs[e] += Fraction(mu * 2**e, 2 * i)
    return DensePolynomial(coeffs)


def series_coeff_poly(m: int, max_m: int = SERIES_COEFF_GUARD) -> DensePolynomial:
    """[x^m] ((1+x)/(1-x))^f as a polynomial in f, exact.

    Built from the recurrence (m+1) e_{m+1} = 2f e_m + (m-1) e_{m-1},
    which encodes (1-x^2) G' = 2f G for G = ((1+x)/(1-x))^f.  Degree m,
    leading coefficient 2^m/m!.
    """
    if m < 0:
        raise ValueError("series_coeff_poly requires m >= 0")
    if m > max_m:
        raise SizeLimitError(f"series_coeff_poly limited to m <= {max_m}, got {m}")
    prev = DensePolynomial([1])
    if m == 0:
        return prev
    two_f = DensePolynomial([0, 2])
    cur = two_f
    for j in range(1, m):
        prev, cur = cur, (two_f * cur + (j - 1) * prev) * Fraction(1, j + 1)
    return cur


def series_coeff_at(m: int, f: int) -> int:
    """[x^m] ((1+x)/(1-x))^f for integer f >= 0, by the binomial sum.

    sum_k C(f, k) C(f-1+m-k, m-k); terms with k > f vanish.  Kept as an
    independent route from series_coeff_poly on purpose.
    """
    if m < 0 or f < 0:
        raise ValueError("series_coeff_at requires m >= 0 and f >= 0")
    if f == 0:
        return 1 if m == 0 else 0
    return sum(
        math.comb(f, k) * math.comb(f - 1 + m - k, m - k) for k in range(m + 1)
    )


class PeakDistribution:
    """Exact tally of peak counts over one conjugacy class.

    ``counts[k]`` is the number of class elements with exactly k peaks;
    zero tallies are omitted.  The tallies must sum to the class size and
    vanish beyond floor((n-1)/2).
    """

    __slots__ = ("cycle_type", "counts")

    def __init__(self, cycle_type: CycleType, counts: Mapping[int, int]):
        n = cycle_type.n
        kmax = (n - 1) // 2
        cleaned: dict[int, int] = {}
        for k, v in counts.items():
            k = int(k)
            v = int(v)
            if v < 0:
                raise ValueError(f"negative tally at k={k}")
            if v == 0:
                continue
            if not 0 <= k <= kmax:
                raise ValueError(f"peak count {k} impossible for n={n}")
            cleaned[k] = v
        if sum(cleaned.values()) != class_size(cycle_type):
            raise ValueError("tallies do not sum to the class size")
        self.cycle_type = cycle_type
        self.counts = dict(sorted(cleaned.items()))

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def count(self, k: int) -> int:
        return self.counts.get(k, 0)

    def mean(self) -> Fraction:
        return Fraction(sum(k * v for k, v in self.counts.items()), self.total)

    def variance(self) -> Fraction:
        mean = self.mean()
        second = Fraction(sum(k * k * v for k, v in self.counts.items()), self.total)
        return second - mean * mean

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PeakDistribution):
            return NotImplemented
        return self.cycle_type == other.cycle_type and self.counts == other.counts

    def __repr__(self) -> str:
        return f"PeakDistribution({self.cycle_type!r}, {self.counts!r})"


def class_peak_distribution(
    lam: CycleType, max_n: int | None = None
) -> PeakDistribution:
    """Exact peak distribution of the conjugacy class with cycle type lam.

    Works entirely over the rationals:

    1. P(a) = prod_i series_coeff_poly(m_i)(necklace_poly(i)(a)), a
       polynomial in the outer index a of degree exactly n.
    2. With sum_{a>=1} a^m t^a = B_m(t)/(1-t)^{m+1}, the weighted sum
       sum_{a>=1} P(a) t^a becomes sum_m c_m B_m(t)/(1-t)^{m+1}.
    3. The class identity times (1+t)^{n+1} turns its right side into the
       polynomial T(t) = 2 sum_m c_m B_m(t) (1-t)^{n-m}.
    4. The left side times (1+t)^{n+1} is
       sum_k N_k 4^{k+1} t^{k+1} (1+t)^{n-2k-1}.
    5. Coefficients of t^1, t^2, ... pin N_0, N_1, ... triangularly; every
       remaining coefficient is then verified to match exactly.
    """
    n = lam.n
    guard = exact_class_guard() if max_n is None else max_n
    if n > guard:
        raise SizeLimitError(
            f"exact class distribution limited to n <= {guard}, got {n}"
        )
    prod = DensePolynomial([1])
    for size, mult in lam.items():
        prod = prod * series_coeff_poly(mult).compose(necklace_poly(size))
    if prod.degree != n or prod.coefficient(0) != 0:
        raise InternalConsistencyError("product polynomial has wrong shape")

    numerators = _power_sum_numerators(n)
    one_minus_t = DensePolynomial([1, -1])
    acc = numerators[0] * prod.coefficient(0)
    for m in range(1, n + 1):
        acc = acc * one_minus_t + numerators[m] * prod.coefficient(m)
    tpoly = acc * 2

    if tpoly.degree > n or tpoly.coefficient(0) != 0:
        raise InternalConsistencyError("class identity polynomial has wrong shape")
    tc = [tpoly.coefficient(j) for j in range(n + 1)]

    kmax = (n - 1) // 2
    tallies: list[int] = []
    for k in range(kmax + 1):
        j = k + 1
        known = sum(
            tallies[kp] * 4 ** (kp + 1) * math.comb(n - 2 * kp - 1, j - kp - 1)
            for kp in range(k)
        )
        value = Fraction(tc[j] - known, 4 ** (k + 1))
        if value.denominator != 1 or value < 0:
            raise InternalConsistencyError(
                f"tally for k={k} is not a nonnegative integer: {value}"
            )
        tallies.append(int(value))
    for j in range(kmax + 2, n + 1):
        expected = sum(
            tallies[kp] * 4 ** (kp + 1) * math.comb(n - 2 * kp - 1, j - kp - 1)
            for kp in range(min(j, kmax + 1))
        )
        if tc[j] != expected:
            raise InternalConsistencyError(f"residual mismatch at t^{j}")
    if sum(tallies) != class_size(lam):
        raise InternalConsistencyError("tallies do not sum to the class size")
    return PeakDistribution(lam, dict(enumerate(tallies)))


def brute_force_all_classes(
    n: int, max_n: int = BRUTE_FORCE_GUARD
) -> dict[CycleType, PeakDistribution]:
    """Peak distributions of every class of S_n by direct enumeration."""
    if n < 1:
        raise ValueError("brute_force_all_classes requires n >= 1")
    if n > max_n:
        raise SizeLimitError(f"brute force limited to n <= {max_n}, got {n}")
    tallies: dict[tuple[int, ...], Counter] = {}
    for word in _it_permutations(range(1, n + 1)):
        key = tuple(sorted(_cycle_parts(word), reverse=True))
        tallies.setdefault(key, Counter())[count_peaks(word)] += 1
    out: dict[CycleType, PeakDistribution] = {}
    for parts, counter in tallies.items():
        lam = CycleType.from_parts(parts)
        out[lam] = PeakDistribution(lam, dict(counter))
    return out


def brute_force_peak_distribution(
    lam: CycleType, max_n: int = BRUTE_FORCE_GUARD
) -> PeakDistribution:
    """Peak distribution of one class by direct enumeration (oracle route)."""
    n = lam.n
    if n > max_n:
        raise SizeLimitError(f"brute force limited to n <= {max_n}, got {n}")
    target = lam.parts()
    counter: Counter = Counter()
    for word in _it_permutations(range(1, n + 1)):
        if tuple(sorted(_cycle_parts(word), reverse=True)) == target:
            counter[count_peaks(word)] += 1
    return PeakDistribution(lam, dict(counter))


def class_mgf(
    lam: CycleType,
    s,
    dist: PeakDistribution | None = None,
    prec: int = 200,
):
    """E[exp(-s * peaks / sqrt(n))] over the class, from exact tallies.

    Evaluated in extended-precision floating point (``prec`` bits, well
    above an 80-bit significand).  Returns an mpmath float.
    """
    if dist is None:
        dist = class_peak_distribution(lam)
    n = lam.n
    with mp.workprec(prec):
        sv = mp.mpmathify(s)
        if sv <= 0:
            raise ValueError("class_mgf requires s > 0")
        ratio = mp.exp(-sv / mp.sqrt(n))
        total = mp.mpf(0)
        for k, v in dist.counts.items():
            total += v * ratio**k
        return total / dist.total
