"""Large-n analysis of peak counts: exact rearranged sums and the
normal-limit prediction.

The exact moment generating function of the peak count over a conjugacy
class can be rearranged into a sum over a single integer index a >= 1
whose summands factor through the necklace counts of the class's cycle
sizes.  This module evaluates that sum with controlled precision,
splits off the correction factors whose drift drives the limit law, and
exposes the predicted limit in terms of the fixed-point density alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from mpmath import mp

from .combinatorics import CycleType
from .errors import InternalConsistencyError, PrecisionError
from .peaks import PeakDistribution, class_mgf, necklace_count, series_coeff_at

# The ratio of a necklace count to its leading term (2a)^i / (2i) lies in
# [exp(-c (2a)^{-2i/3}), exp(c (2a)^{-2i/3})] with this constant.
NECKLACE_RATIO_CONSTANT = 4

Scalar = Union[int, float, Fraction]


def _to_mpf(value):
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    return mp.mpf(value)


def substitution_point(n: int, s, prec: int = 200):
    """The point t in (0,1) with 4t/(1+t)^2 = exp(-s/sqrt(n)).

    Inverting u = 4t/(1+t)^2 for the root inside the unit interval gives
    t = u / (1 + sqrt(1-u))^2, evaluated here from expm1 so that the
    small-s cancellation in 1-u costs no precision.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    with mp.workprec(prec):
        sv = _to_mpf(s)
        if sv <= 0:
            raise ValueError("s must be positive")
        x = sv / mp.sqrt(n)
        u = mp.exp(-x)
        w = -mp.expm1(-x)
        return u / (1 + mp.sqrt(w)) ** 2


def range_split_threshold(s, prec: int = 200):
    """Reciprocal of sup_n n^{1/4} log(1/t_n(s)) e^{c/4 + 1}.

    Index ranges are split at a = threshold * n^{5/4}: below it the
    necklace-ratio corrections may be large, above it they are tame.
    The supremum over n is taken by doubling a finite grid until stable
    and comparing with the n -> infinity limit 2 sqrt(s) e^{c/4 + 1}.
    """
    with mp.workprec(prec):
        sv = _to_mpf(s)
        if sv <= 0:
            raise ValueError("s must be positive")
        scale = mp.exp(mp.mpf(NECKLACE_RATIO_CONSTANT) / 4 + 1)
        tail = 2 * mp.sqrt(sv) * scale

        def grid_max(start: int, stop: int, running):
            best = running
            for n in range(start, stop + 1):
                t = substitution_point(n, sv, prec=prec)
                val = mp.power(n, mp.mpf(1) / 4) * (-mp.log(t)) * scale
                if val > best:
                    best = val
            return best

        limit = 64
        best = grid_max(1, limit, mp.mpf("-inf"))
        while True:
            wider = grid_max(limit + 1, 2 * limit, best)
            if abs(wider - best) < mp.mpf("1e-9"):
                best = wider
                break
            best = wider
            limit *= 2
        return 1 / max(best, tail)


@dataclass(frozen=True)
class AsymptoticParams:
    """Bundle of the scaled-exponent bookkeeping for one (n, s) pair."""

    n: int
    s: object
    t: object
    split_threshold: object
    ratio_constant: int = NECKLACE_RATIO_CONSTANT

    @classmethod
    def from_scale(cls, n: int, s, prec: int = 200) -> "AsymptoticParams":
        t = substitution_point(n, s, prec=prec)
        with mp.workprec(prec):
            sv = _to_mpf(s)
            lhs = 4 * t / (1 + t) ** 2
            rhs = mp.exp(-sv / mp.sqrt(n))
            if abs(lhs - rhs) > mp.mpf("1e-15") * rhs:
                raise InternalConsistencyError(
                    "substitution point fails its defining identity"
                )
            threshold = range_split_threshold(sv, prec=prec)
        return cls(n=n, s=sv, t=t, split_threshold=threshold)

    def small_range_end(self) -> int:
        """Largest index of the small-a regime, floor(threshold * n^{5/4})."""
        return int(mp.floor(self.split_threshold * mp.power(self.n, mp.mpf(5) / 4)))


def necklace_ratio(a: int, i: int) -> Fraction:
    """Necklace count divided by its leading term (2a)^i / (2i)."""
    if a < 1 or i < 1:
        raise ValueError("a and i must be >= 1")
    return necklace_count(a, i) * Fraction(2 * i, (2 * a) ** i)


def binomial_correction(f: int, m: int) -> Fraction:
    """Ratio of [x^m] ((1+x)/(1-x))^f to its large-f leading term (2f)^m/m!.

    Equals 2^{-m} sum_nu C(m,nu) (f-nu+m-1)! / ((f-nu)! f^{m-1}); the
    terms with nu > f vanish and are skipped.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if f < 1:
        raise ValueError("f must be >= 1")
    if m == 0:
        return Fraction(1)
    total = 0
    for nu in range(min(m, f) + 1):
        total += math.comb(m, nu) * math.perm(f - nu + m - 1, m - 1)
    return Fraction(total, 2**m * f ** (m - 1))


def fixed_point_correction_expansion(num_fixed: int, a: int) -> float:
    """Two-term expansion of the fixed-point correction factor at large a.

    exp(n1^3/(12 a^2) - 3 n1^5/(160 a^4)) for n1 = num_fixed; accurate
    once a >= 2 * num_fixed, which is required.
    """
    if num_fixed < 0:
        raise ValueError("num_fixed must be >= 0")
    if a < 1 or a < 2 * num_fixed:
        raise ValueError("need a >= max(1, 2 * num_fixed)")
    n1 = num_fixed
    return math.exp(n1**3 / (12 * a**2) - 3 * n1**5 / (160 * a**4))


def _integer_necklace_count(a: int, size: int) -> int:
    f = necklace_count(a, size)
    if f.denominator != 1 or f.numerator < 1:
        raise InternalConsistencyError(
            f"necklace count for a={a}, i={size} is not a positive integer"
        )
    return f.numerator


def range_sum(
    lam: CycleType,
    s,
    lo: int = 1,
    hi: Optional[int] = None,
    prec: int = 300,
):
    """The rearranged class sum restricted to indices lo <= a <= hi.

    The summand at index a is

        log(1/t)^{n+1} / n!  *  t^a  *  2^{-n} prod_i m_i! i^{m_i} E_{m_i}(f_{a,i})

    where t is the substitution point for (n, s), f_{a,i} the necklace
    counts, and E_m(f) = [x^m]((1+x)/(1-x))^f; terms are accumulated in
    the log domain.  With hi=None the sum runs to infinity: scanning
    stops once a certified geometric tail bound falls below 1e-20 of the
    accumulated sum, and a PrecisionError reports failure to certify.
    """
    if lo < 1:
        raise ValueError("lo must be >= 1")
    if hi is not None and hi < lo:
        return mp.mpf(0)
    n = lam.n
    items = lam.items()
    with mp.workprec(prec):
        t = substitution_point(n, s, prec=prec)
        log_t = mp.log(t)
        log_inv = -log_t
        prefix = (n + 1) * mp.log(log_inv) - mp.loggamma(n + 1)
        const = -n * mp.log(2)
        for size, mult in items:
            const += mp.log(mp.factorial(mult)) + mult * mp.log(size)
        peak_index = n / log_inv
        scan_cap = max(1_000_000, 1000 * (int(peak_index) + 10))
        drop = 30 * mp.log(10)
        total = mp.mpf(0)
        max_log = mp.mpf("-inf")
        a = lo
        while True:
            if hi is not None and a > hi:
                return total
            log_corr = mp.mpf(0)
            for size, mult in items:
                log_corr += mp.log(series_coeff_at(mult, _integer_necklace_count(a, size)))
            log_term = prefix + const + a * log_t + log_corr
            total += mp.exp(log_term)
            if log_term > max_log:
                max_log = log_term
            if hi is None and a > peak_index and log_term < max_log - drop:
                # Envelope: E_m(f) <= (2f)^m/m! e^{m^2/f} and
                # 2 f_{a,i} <= (2a)^i e^{1/a^2} / i give, for all a' >= a,
                # summand(a') <= prefix-part * t^{a'} (2a')^n
                #                 * exp(n/a^2 + sum_i m_i^2 / f_{a,i});
                # consecutive such envelopes shrink by t (1+1/a)^n.
                log_r = log_t + n * mp.log1p(mp.mpf(1) / a)
                if log_r < 0:
                    slack = n / mp.mpf(a) ** 2
                    for size, mult in items:
                        slack += (
                            mp.mpf(mult * mult) / _integer_necklace_count(a, size)
                        )
                    r = mp.exp(log_r)
                    log_env = (
                        prefix - n * mp.log(2) + a * log_t + n * mp.log(2 * a) + slack
                    )
                    tail = mp.exp(log_env) * r / (1 - r)
                    if tail <= mp.mpf("1e-20") * total:
                        return total
            if a >= scan_cap:
                raise PrecisionError(
                    "tail bound failed to reach 1e-20 of the accumulated sum"
                )
            a += 1


def limit_variance(density: Scalar) -> Scalar:
    """Variance of the limiting normal law at the given fixed-point density.

    2/45 + d^3/9 - 3 d^5/5 + 4 d^6/9; exact when the input is exact.
    """
    _check_density(density)
    d = density
    return (
        Fraction(2, 45)
        + d**3 * Fraction(1, 9)
        - d**5 * Fraction(3, 5)
        + d**6 * Fraction(4, 9)
    )


def mgf_quadratic_coefficient(density: Scalar) -> Scalar:
    """Coefficient of s^2 in the limiting log-mgf: 1/45 + d^3/18
    - 3 d^5/10 + 2 d^6/9.  Exact when the input is exact."""
    _check_density(density)
    d = density
    return (
        Fraction(1, 45)
        + d**3 * Fraction(1, 18)
        - d**5 * Fraction(3, 10)
        + d**6 * Fraction(2, 9)
    )


def _check_density(density: Scalar) -> None:
    if not 0 <= density <= 1:
        raise ValueError("fixed-point density must lie in [0, 1]")


def _drift_coefficient(density: Scalar) -> Scalar:
    return (1 - density**3) * Fraction(1, 3)


def predicted_mgf(n: int, density: Scalar, s, prec: int = 200):
    """exp(-(1-d^3)/3 s sqrt(n) + (quadratic coefficient) s^2).

    The normal-limit prediction for E exp(-s P / sqrt(n)) over a class
    on n points with fixed-point density d.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_density(density)
    drift = _drift_coefficient(density)
    quad = mgf_quadratic_coefficient(density)
    with mp.workprec(prec):
        sv = _to_mpf(s)
        if sv <= 0:
            raise ValueError("s must be positive")
        exponent = -_to_mpf(drift) * sv * mp.sqrt(n) + _to_mpf(quad) * sv**2
        return mp.exp(exponent)


@dataclass(frozen=True)
class PredictionBreakdown:
    """Exact log-mgf of a class split against its normal-limit prediction."""

    n: int
    s: float
    fixed_point_density: float
    mean_term: float
    s2_term: float
    log_mgf_exact: float
    residual: float


def prediction_residual(
    lam: CycleType,
    s,
    dist: Optional[PeakDistribution] = None,
    prec: int = 300,
) -> PredictionBreakdown:
    """log E exp(-s P/sqrt(n)) minus the two predicted terms.

    The residual is the remainder the limit law controls at rate
    n^{-1/4}; it is reported raw so callers can watch it decay.
    """
    n = lam.n
    density = lam.fixed_point_density
    with mp.workprec(prec):
        sv = _to_mpf(s)
        if sv <= 0:
            raise ValueError("s must be positive")
        exact = class_mgf(lam, sv, dist=dist, prec=prec)
        log_exact = mp.log(exact)
        mean_term = -_to_mpf(_drift_coefficient(density)) * sv * mp.sqrt(n)
        s2_term = _to_mpf(mgf_quadratic_coefficient(density)) * sv**2
        residual = log_exact - mean_term - s2_term
        return PredictionBreakdown(
            n=n,
            s=float(sv),
            fixed_point_density=float(density),
            mean_term=float(mean_term),
            s2_term=float(s2_term),
            log_mgf_exact=float(log_exact),
            residual=float(residual),
        )


def gaussian_approximant(n: int, x: float) -> float:
    """(1 + x/sqrt(n))^n exp(-sqrt(n) x), clamped to 0 for x <= -sqrt(n).

    Increases to exp(-x^2/2) pointwise in n for x <= 0 and decreases to
    it for x >= 0; evaluated via log1p to stay stable for large n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    root = math.sqrt(n)
    if x <= -root:
        return 0.0
    return math.exp(n * math.log1p(x / root) - root * x)
