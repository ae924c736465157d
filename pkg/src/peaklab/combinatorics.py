"""Exact combinatorial primitives: cycle types, Stirling numbers, partitions.

Everything in this module is integer or rational arithmetic on Python's
unbounded ints and ``fractions.Fraction``; no floating point enters any
code path, and rationals stay in lowest terms with positive denominator.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import SizeLimitError

STIRLING_GUARD = 10_000
PARTITION_GUARD = 30


class CycleType:
    """A partition of n stored as multiplicities of part sizes.

    ``mult(i)`` is the number of parts of size ``i``; absent sizes have
    multiplicity zero.  A ``CycleType`` names the conjugacy class of the
    symmetric group on ``n`` symbols whose elements have that cycle
    structure.
    """

    __slots__ = ("_n", "_mults")

    def __init__(self, mults: Mapping[int, int] | Iterable[tuple[int, int]]):
        cleaned: dict[int, int] = {}
        pairs = mults.items() if isinstance(mults, Mapping) else mults
        for size, mult in pairs:
            size = int(size)
            mult = int(mult)
            if size < 1:
                raise ValueError(f"part size must be >= 1, got {size}")
            if mult < 0:
                raise ValueError(f"multiplicity must be >= 0, got {mult}")
            if mult:
                cleaned[size] = cleaned.get(size, 0) + mult
        n = sum(size * mult for size, mult in cleaned.items())
        if n == 0:
            raise ValueError("a cycle type needs at least one part")
        self._n = n
        self._mults = dict(sorted(cleaned.items()))

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "CycleType":
        mults: dict[int, int] = {}
        for p in parts:
            p = int(p)
            mults[p] = mults.get(p, 0) + 1
        return cls(mults)

    @property
    def n(self) -> int:
        return self._n

    @property
    def mults(self) -> dict[int, int]:
        """Copy of the size -> multiplicity map (only positive entries)."""
        return dict(self._mults)

    def mult(self, size: int) -> int:
        return self._mults.get(size, 0)

    @property
    def fixed_points(self) -> int:
        return self._mults.get(1, 0)

    @property
    def fixed_point_density(self) -> Fraction:
        """Fraction of symbols lying in parts of size 1."""
        return Fraction(self._mults.get(1, 0), self._n)

    def parts(self) -> tuple[int, ...]:
        """All parts, largest first."""
        out: list[int] = []
        for size in sorted(self._mults, reverse=True):
            out.extend([size] * self._mults[size])
        return tuple(out)

    def items(self) -> tuple[tuple[int, int], ...]:
        """(size, multiplicity) pairs, size ascending."""
        return tuple(self._mults.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CycleType):
            return NotImplemented
        return self._mults == other._mults

    def __hash__(self) -> int:
        return hash(tuple(self._mults.items()))

    def __str__(self) -> str:
        return " ".join(f"{size}^{mult}" for size, mult in self._mults.items())

    def __repr__(self) -> str:
        return f"CycleType({self._mults!r})"


def class_size(lam: CycleType) -> int:
    """Number of elements of S_n with cycle type ``lam``.

    Equals n! divided by the product of i^{m_i} m_i! over part sizes i.
    """
    denom = 1
    for size, mult in lam.items():
        denom *= size**mult * math.factorial(mult)
    return math.factorial(lam.n) // denom


def stirling2(n: int, k: int, max_n: int = STIRLING_GUARD) -> int:
    """Stirling number of the second kind S(n, k), exact.

    Counts set partitions of an n-set into k nonempty blocks; k > n gives 0.
    """
    if n < 0 or k < 0:
        raise ValueError("stirling2 requires n >= 0 and k >= 0")
    if n > max_n:
        raise SizeLimitError(f"stirling2 limited to n <= {max_n}, got {n}")
    if k > n:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    # row DP, keeping only columns <= k
    row = [1] + [0] * k  # S(0, *)
    for m in range(1, n + 1):
        new = [0] * (k + 1)
        top = min(m, k)
        for j in range(1, top + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]


def stirling2_row(n: int, max_n: int = STIRLING_GUARD) -> list[int]:
    """Full row [S(n, 0), ..., S(n, n)]."""
    if n < 0:
        raise ValueError("stirling2_row requires n >= 0")
    if n > max_n:
        raise SizeLimitError(f"stirling2_row limited to n <= {max_n}, got {n}")
    row = [1]
    for m in range(1, n + 1):
        new = [0] * (m + 1)
        for j in range(1, m):
            new[j] = j * row[j] + row[j - 1]
        new[m] = 1
        row = new
    return row


def moebius(d: int) -> int:
    """Moebius function by trial division; 0 on any squared prime factor."""
    if d < 1:
        raise ValueError("moebius requires d >= 1")
    result = 1
    p = 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return 0
            result = -result
        p += 1 if p == 2 else 2
    if d > 1:
        result = -result
    return result


def partitions_of(n: int, max_n: int = PARTITION_GUARD) -> Iterator[CycleType]:
    """All partitions of n in decreasing lexicographic order of part lists.

    Starts at [n] and ends at [1]*n.
    """
    if n < 1:
        raise ValueError("partitions_of requires n >= 1")
    if n > max_n:
        raise SizeLimitError(f"partitions_of limited to n <= {max_n}, got {n}")

    def gen(remaining: int, cap: int, acc: list[int]) -> Iterator[CycleType]:
        if remaining == 0:
            yield CycleType.from_parts(acc)
            return
        for p in range(min(cap, remaining), 0, -1):
            acc.append(p)
            yield from gen(remaining - p, p, acc)
            acc.pop()

    yield from gen(n, n, [])
