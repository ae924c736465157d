"""Dense polynomials and truncated power series over exact rationals.

Coefficients are Python ints or ``fractions.Fraction``; both are exact and
mix freely.  Nothing here ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class DensePolynomial:
    """Immutable univariate polynomial, coefficient of degree d at index d.

    Trailing zero coefficients are trimmed on construction; the zero
    polynomial stores an empty tuple and reports degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff: Scalar = 1) -> "DensePolynomial":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, d: int) -> Scalar:
        if 0 <= d < len(self.coeffs):
            return self.coeffs[d]
        return 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensePolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"DensePolynomial({list(self.coeffs)!r})"

    def __add__(self, other: "DensePolynomial") -> "DensePolynomial":
        if not isinstance(other, DensePolynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return DensePolynomial(out)

    def __neg__(self) -> "DensePolynomial":
        return DensePolynomial([-c for c in self.coeffs])

    def __sub__(self, other: "DensePolynomial") -> "DensePolynomial":
        if not isinstance(other, DensePolynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "DensePolynomial | Scalar") -> "DensePolynomial":
        if isinstance(other, DensePolynomial):
            if self.is_zero or other.is_zero:
                return DensePolynomial()
            a, b = self.coeffs, other.coeffs
            out = [0] * (len(a) + len(b) - 1)
            for i, ca in enumerate(a):
                if ca == 0:
                    continue
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
            return DensePolynomial(out)
        if isinstance(other, (int, Fraction)):
            return DensePolynomial([c * other for c in self.coeffs])
        return NotImplemented

    def __rmul__(self, other: "Scalar") -> "DensePolynomial":
        if isinstance(other, (int, Fraction)):
            return DensePolynomial([other * c for c in self.coeffs])
        return NotImplemented

    def derivative(self) -> "DensePolynomial":
        return DensePolynomial([d * c for d, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: Scalar) -> Scalar:
        acc: Scalar = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "DensePolynomial") -> "DensePolynomial":
        """self(inner(x)), exact."""
        acc = DensePolynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + DensePolynomial([c])
        return acc


class TruncatedSeries:
    """Power series known exactly through degree ``order`` inclusive.

    The coefficient tuple always has length order + 1.  Arithmetic between
    two series requires matching orders; a mismatch is a bug in the
    caller, not something to patch silently.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable[Scalar], order: int):
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = list(coeffs)[: order + 1]
        cs.extend([0] * (order + 1 - len(cs)))
        self.coeffs = tuple(cs)
        self.order = order

    @classmethod
    def from_polynomial(cls, poly: DensePolynomial, order: int) -> "TruncatedSeries":
        return cls(poly.coeffs, order)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def coefficient(self, d: int) -> Scalar:
        if not 0 <= d <= self.order:
            raise IndexError(f"coefficient {d} outside known order {self.order}")
        return self.coeffs[d]

    def _check(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise ValueError("series orders differ")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(self.coeffs)!r}, order={self.order})"

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        return TruncatedSeries(
            [a + b for a, b in zip(self.coeffs, other.coeffs)], self.order
        )

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        return TruncatedSeries(
            [a - b for a, b in zip(self.coeffs, other.coeffs)], self.order
        )

    def __mul__(self, other: "TruncatedSeries | Scalar") -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._check(other)
            out = [0] * (self.order + 1)
            for i, ca in enumerate(self.coeffs):
                if ca == 0:
                    continue
                top = self.order - i
                for j, cb in enumerate(other.coeffs[: top + 1]):
                    out[i + j] += ca * cb
            return TruncatedSeries(out, self.order)
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries([c * other for c in self.coeffs], self.order)
        return NotImplemented

    def __rmul__(self, other: "Scalar") -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries([other * c for c in self.coeffs], self.order)
        return NotImplemented

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        a0 = self.coeffs[0]
        if a0 == 0:
            raise ValueError("series with zero constant term has no inverse")
        inv0 = Fraction(1, 1) / a0 if not isinstance(a0, Fraction) else 1 / a0
        out: list[Scalar] = [inv0]
        for k in range(1, self.order + 1):
            s: Scalar = 0
            for j in range(1, k + 1):
                s += self.coeffs[j] * out[k - j]
            out.append(-s * inv0)
        return TruncatedSeries(out, self.order)

    def pow(self, k: int) -> "TruncatedSeries":
        """Nonnegative integer power by binary exponentiation."""
        if k < 0:
            raise ValueError("pow requires k >= 0")
        result = TruncatedSeries([1], self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def compose_series(
    outer: DensePolynomial | TruncatedSeries, inner: TruncatedSeries
) -> TruncatedSeries:
    """outer(inner(t)) as a truncated series; inner must vanish at 0."""
    if inner.coeffs[0] != 0:
        raise ValueError("inner series must have zero constant term")
    coeffs: Sequence[Scalar] = outer.coeffs
    acc = TruncatedSeries([0], inner.order)
    for c in reversed(coeffs):
        acc = acc * inner + TruncatedSeries([c], inner.order)
    return acc
