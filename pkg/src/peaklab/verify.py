"""Self-contained verification checks.

Each check exercises one published contract of the package: exact
oracles against independent recomputation, inequality envelopes on
grids, statistical behaviour of the sampler, and the decay of the
normal-limit residual.  Checks return a CheckResult and never raise on
a mere numeric failure; they do raise if they cannot even compute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional

from mpmath import mp

from .asymptotics import (
    NECKLACE_RATIO_CONSTANT,
    PredictionBreakdown,
    binomial_correction,
    fixed_point_correction_expansion,
    gaussian_approximant,
    limit_variance,
    mgf_quadratic_coefficient,
    necklace_ratio,
    prediction_residual,
    range_split_threshold,
    range_sum,
    substitution_point,
)
from .combinatorics import CycleType, partitions_of
from .peaks import (
    PeakDistribution,
    brute_force_all_classes,
    class_mgf,
    class_peak_distribution,
    eulerian_derivative_at_one,
    eulerian_polynomial,
    necklace_count,
    peak_polynomial,
    series_coeff_at,
)
from .polynomial import DensePolynomial
from .sampling import (
    SeedSpec,
    chi_square_uniformity,
    element_histogram,
    ks_distance,
    run_experiment,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    bound: float
    detail: str = ""


def _fmt(x) -> str:
    return f"{float(x):.6g}"


@lru_cache(maxsize=None)
def _distribution(lam: CycleType) -> PeakDistribution:
    return class_peak_distribution(lam)


def _two_cycle_class(n: int) -> CycleType:
    if n % 2:
        raise ValueError("n must be even")
    return CycleType({2: n // 2})


@lru_cache(maxsize=None)
def _two_cycle_breakdown(n: int) -> PredictionBreakdown:
    lam = _two_cycle_class(n)
    return prediction_residual(lam, 1, dist=_distribution(lam))


def check_oracle_equivalence() -> CheckResult:
    """Symbolic per-class distributions match brute-force enumeration, n <= 8."""
    mismatches = 0
    classes = 0
    for n in range(1, 9):
        enumerated = brute_force_all_classes(n)
        for lam, expected in enumerated.items():
            classes += 1
            if _distribution(lam) != expected:
                mismatches += 1
    return CheckResult(
        name="oracle-equivalence",
        passed=mismatches == 0,
        measured=mismatches,
        bound=0,
        detail=f"{classes} classes compared",
    )


def check_aggregation_consistency() -> CheckResult:
    """Class tallies summed over all classes of S_n equal the global tallies."""
    mismatches = 0
    for n in range(1, 9):
        whole = peak_polynomial(n)
        kmax = (n - 1) // 2
        totals = {k: 0 for k in range(kmax + 1)}
        for lam in partitions_of(n):
            dist = _distribution(lam)
            for k in range(kmax + 1):
                totals[k] += dist.count(k)
        for k in range(kmax + 1):
            if totals[k] != whole.coefficient(k + 1):
                mismatches += 1
    return CheckResult(
        name="aggregation-consistency",
        passed=mismatches == 0,
        measured=mismatches,
        bound=0,
    )


def check_global_moments() -> CheckResult:
    """Whole-group peak counts have mass n!, mean (n-2)/3, variance 2(n+1)/45."""
    mismatches = 0
    for n in range(4, 61):
        whole = peak_polynomial(n)
        kmax = (n - 1) // 2
        counts = [whole.coefficient(k + 1) for k in range(kmax + 1)]
        total = sum(counts)
        if total != math.factorial(n):
            mismatches += 1
            continue
        mean = Fraction(sum(k * c for k, c in enumerate(counts)), total)
        second = Fraction(sum(k * k * c for k, c in enumerate(counts)), total)
        variance = second - mean * mean
        if mean != Fraction(n - 2, 3) or variance != Fraction(2 * (n + 1), 45):
            mismatches += 1
    return CheckResult(
        name="global-moments",
        passed=mismatches == 0,
        measured=mismatches,
        bound=0,
        detail="n = 4..60",
    )


def check_derivative_forms() -> CheckResult:
    """Closed-form derivatives at 1 match symbolic differentiation, n <= 40."""
    mismatches = 0
    for n in range(1, 41):
        poly = eulerian_polynomial(n)
        for order in range(5):
            symbolic = poly(1)
            if eulerian_derivative_at_one(n, order) != symbolic:
                mismatches += 1
            poly = poly.derivative()
    return CheckResult(
        name="derivative-forms",
        passed=mismatches == 0,
        measured=mismatches,
        bound=0,
        detail="n = 1..40, order 0..4",
    )


_FIGURE_SEED = SeedSpec(seed=20260817)


def check_figure_experiment() -> CheckResult:
    """10^5 draws from the class with 250 2-cycles and 125 4-cycles on 1000
    points reproduce the normal law N(332.67, 44.49)."""
    lam = CycleType({2: 250, 4: 125})
    stats = run_experiment(lam, 100_000, _FIGURE_SEED)
    ks = ks_distance(stats, 332.67, 44.49)
    mean_ok = 331.7 <= stats.mean <= 333.7
    var_ok = 42.0 <= stats.variance <= 47.0
    return CheckResult(
        name="figure-experiment",
        passed=mean_ok and var_ok and ks < 0.015,
        measured=ks,
        bound=0.015,
        detail=f"mean={_fmt(stats.mean)} var={_fmt(stats.variance)}",
    )


def check_residual_decay() -> CheckResult:
    """Scaled residual n^{1/4} |E| stays within 2x its n=16 value along
    the 2-cycle classes n = 16, 64, 144, 256 at s = 1."""
    sizes = (16, 64, 144, 256)
    scaled = []
    for n in sizes:
        breakdown = _two_cycle_breakdown(n)
        scaled.append(abs(breakdown.residual) * n**0.25)
    reference = scaled[0]
    worst = max(scaled) / reference
    return CheckResult(
        name="residual-decay",
        passed=worst <= 2.0,
        measured=worst,
        bound=2.0,
        detail="scaled=[" + ", ".join(_fmt(v) for v in scaled) + "]",
    )


def check_prediction_pipeline() -> CheckResult:
    """Raw residual |E| strictly decreases along n = 16, 64, 256 at s = 1."""
    values = [abs(_two_cycle_breakdown(n).residual) for n in (16, 64, 256)]
    ratios = [values[i + 1] / values[i] for i in range(len(values) - 1)]
    worst = max(ratios)
    return CheckResult(
        name="prediction-pipeline",
        passed=worst < 1.0,
        measured=worst,
        bound=1.0,
        detail="residuals=[" + ", ".join(_fmt(v) for v in values) + "]",
    )


def check_necklace_ratio_bounds() -> CheckResult:
    """exp(-c (2a)^{-2i/3}) <= ratio <= exp(c (2a)^{-2i/3}) on a <= 50, i <= 30."""
    worst = 0.0
    # The tightest grid point leaves a true margin near 1e-40, far above
    # the 1e-80 roundoff allowance at 400 bits but far below double ulp,
    # so the comparison happens on logs in extended precision.
    with mp.workprec(400):
        c = mp.mpf(NECKLACE_RATIO_CONSTANT)
        tol = mp.mpf("1e-80")
        for a in range(1, 51):
            for i in range(1, 31):
                g = necklace_ratio(a, i)
                log_g = mp.log(mp.mpf(g.numerator)) - mp.log(mp.mpf(g.denominator))
                expo = c * mp.power(2 * a, mp.mpf(-2 * i) / 3)
                excess = abs(log_g) - expo
                if excess > tol:
                    worst = max(worst, float(excess))
    return CheckResult(
        name="necklace-ratio-bounds",
        passed=worst == 0.0,
        measured=worst,
        bound=0,
        detail="a = 1..50, i = 1..30",
    )


def check_necklace_integrality() -> CheckResult:
    """Necklace counts are positive integers on a <= 50, i <= 30."""
    failures = 0
    for a in range(1, 51):
        for i in range(1, 31):
            f = necklace_count(a, i)
            if f.denominator != 1 or f.numerator < 1:
                failures += 1
    return CheckResult(
        name="necklace-integrality",
        passed=failures == 0,
        measured=failures,
        bound=0,
        detail="a = 1..50, i = 1..30",
    )


def check_gaussian_envelopes() -> CheckResult:
    """Monotonicity and envelopes of (1 + x/sqrt(n))^n e^{-sqrt(n) x}."""
    xs = [j / 2 for j in range(-20, 21)]
    ns = [2**j for j in range(11)]
    rel = 1e-9
    violations = 0
    for x in xs:
        limit = math.exp(-x * x / 2)
        values = {n: gaussian_approximant(n, x) for n in ns}
        for smaller, larger in zip(ns, ns[1:]):
            if x >= 0 and values[larger] > values[smaller] * (1 + rel):
                violations += 1
            if x <= 0 and values[smaller] > values[larger] * (1 + rel):
                violations += 1
        for n in ns:
            if x >= 0:
                envelope = math.exp(n * (math.log(2) - 0.5) - math.sqrt(n) * x / 2)
                if values[n] > envelope * (1 + rel):
                    violations += 1
            if x <= 0 and values[n] > limit * (1 + rel):
                violations += 1
        gaps = [abs(gaussian_approximant(4**j, x) - limit) for j in range(6)]
        for earlier, later in zip(gaps, gaps[1:]):
            if later > earlier + 1e-15:
                violations += 1
    return CheckResult(
        name="gaussian-envelopes",
        passed=violations == 0,
        measured=violations,
        bound=0,
        detail="x in {0, +-0.5, ..., +-10}, n = 1..1024",
    )


def check_sampler_uniformity() -> CheckResult:
    """Chi-square uniformity over every conjugacy class of S_4, 10^5 draws."""
    from scipy.stats import chi2

    draws = 100_000
    worst = 0.0
    details = []
    ok = True
    for index, lam in enumerate(partitions_of(4)):
        seed = SeedSpec(seed=9001 + index)
        size = int(_distribution(lam).total)
        observed = element_histogram(lam, draws, seed)
        if size == 1:
            only = next(iter(observed))
            if len(observed) != 1 or only != (1, 2, 3, 4):
                ok = False
            details.append(f"{lam}: singleton")
            continue
        stat, dof = chi_square_uniformity(observed, size)
        threshold = float(chi2.ppf(0.999, dof))
        worst = max(worst, stat / threshold)
        if stat >= threshold:
            ok = False
        details.append(f"{lam}: {stat:.1f}/{threshold:.1f}")
    return CheckResult(
        name="sampler-uniformity",
        passed=ok and worst < 1.0,
        measured=worst,
        bound=1.0,
        detail="; ".join(details),
    )


def check_rearranged_identity() -> CheckResult:
    """Assembled single-index sum reproduces the exact mgf to 1e-9,
    2-cycle classes n = 8, 12, 16, 20 at s = 1."""
    worst = 0.0
    for n in (8, 12, 16, 20):
        lam = _two_cycle_class(n)
        with mp.workprec(300):
            t = substitution_point(n, 1, prec=300)
            prefactor = (2 * (1 - t) / ((1 + t) * (-mp.log(t)))) ** (n + 1)
            total = range_sum(lam, 1, prec=300)
            assembled = mp.exp(mp.mpf(1) / mp.sqrt(n)) * prefactor * total
            exact = class_mgf(lam, 1, dist=_distribution(lam), prec=300)
            rel = abs(assembled - exact) / exact
            worst = max(worst, float(rel))
    return CheckResult(
        name="rearranged-identity",
        passed=worst < 1e-9,
        measured=worst,
        bound=1e-9,
    )


def _poly_sign(coeffs, x: Fraction) -> int:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    if acc > 0:
        return 1
    if acc < 0:
        return -1
    return 0


def _poly_derivative(coeffs):
    return tuple(coeffs[j] * j for j in range(1, len(coeffs)))


def _cauchy_bound(coeffs) -> Fraction:
    lead = coeffs[-1]
    return Fraction(1) + max(abs(Fraction(c) / lead) for c in coeffs[:-1])


_ROOT_WIDTH = Fraction(1, 10**9)


def _certified_roots(coeffs, lo: Fraction, hi: Fraction) -> Optional[list]:
    """Brackets of width <= _ROOT_WIDTH for all real roots in (lo, hi),
    or None if as many as the degree cannot be certified."""
    degree = len(coeffs) - 1
    if degree <= 0:
        return []
    if degree == 1:
        root = -Fraction(coeffs[0]) / coeffs[1]
        return [(root, root)]
    critical = _certified_roots(_poly_derivative(coeffs), lo, hi)
    if critical is None:
        return None
    points = [lo]
    for _, upper in critical:
        if upper <= points[-1] or upper >= hi:
            continue
        points.append(upper)
    points.append(hi)
    signs = []
    for p in points:
        s = _poly_sign(coeffs, p)
        tries = 0
        while s == 0 and tries < 3:
            p = p + _ROOT_WIDTH / 7
            s = _poly_sign(coeffs, p)
            tries += 1
        if s == 0:
            return None
        signs.append((p, s))
    brackets = []
    for (pl, sl), (pr, sr) in zip(signs, signs[1:]):
        if sl * sr >= 0:
            continue
        a, b = pl, pr
        while b - a > _ROOT_WIDTH:
            mid = (a + b) / 2
            sm = _poly_sign(coeffs, mid)
            if sm == 0:
                a = b = mid
                break
            if sm == sl:
                a = mid
            else:
                b = mid
        brackets.append((a, b))
    if len(brackets) != degree:
        return None
    return brackets


def certify_real_rooted(poly: DensePolynomial) -> bool:
    """True when every root of the polynomial is certified real, via
    derivative interlacing and exact-sign bisection."""
    coeffs = tuple(poly.coeffs)
    if len(coeffs) <= 1:
        return True
    bound = _cauchy_bound(coeffs)
    chain = coeffs
    while len(chain) > 2:
        chain = _poly_derivative(chain)
        bound = max(bound, _cauchy_bound(chain))
    return _certified_roots(coeffs, -bound, bound) is not None


def check_real_rootedness() -> CheckResult:
    """Peak-count polynomials have only real roots, n = 4..24, with
    floor((n+1)/2) roots once the root at zero is counted."""
    failures = 0
    for n in range(4, 25):
        whole = peak_polynomial(n)
        kmax = (n - 1) // 2
        reduced = DensePolynomial(
            [whole.coefficient(k + 1) for k in range(kmax + 1)]
        )
        if reduced.degree != kmax:
            failures += 1
            continue
        if not certify_real_rooted(reduced):
            failures += 1
            continue
        if kmax + 1 != (n + 1) // 2:
            failures += 1
    return CheckResult(
        name="real-rootedness",
        passed=failures == 0,
        measured=failures,
        bound=0,
        detail="n = 4..24",
    )


def check_variance_consistency() -> CheckResult:
    """Twice the s^2 coefficient equals the limiting variance, exactly."""
    mismatches = 0
    for density in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
        if 2 * mgf_quadratic_coefficient(density) != limit_variance(density):
            mismatches += 1
    return CheckResult(
        name="variance-consistency",
        passed=mismatches == 0,
        measured=mismatches,
        bound=0,
        detail="density in {0, 1/4, 1/2, 3/4, 1}",
    )


def check_correction_consistency() -> CheckResult:
    """E_m(f) = (2f)^m/m! K(f, m) exactly on 1 <= m <= 12, 12 <= f <= 40."""
    mismatches = 0
    for m in range(1, 13):
        for f in range(12, 41):
            lhs = Fraction(series_coeff_at(m, f))
            rhs = Fraction((2 * f) ** m, math.factorial(m)) * binomial_correction(f, m)
            if lhs != rhs:
                mismatches += 1
    return CheckResult(
        name="correction-consistency",
        passed=mismatches == 0,
        measured=mismatches,
        bound=0,
    )


def check_large_index_correction() -> CheckResult:
    """|log prod_{i>=2} K(f_{a,i}, m_i)| <= e^4 n^2 / a^2 once
    a >= max(e^4, 2) n, over all classes of S_6, S_12, S_20."""
    worst = 0.0
    with mp.workprec(120):
        e4 = mp.e**4
        for n in (6, 12, 20):
            base = int(mp.ceil(max(e4, 2) * n))
            for lam in partitions_of(n):
                sizes = [(size, mult) for size, mult in lam.items() if size >= 2]
                if not sizes:
                    continue
                for a in (base, 2 * base):
                    log_prod = mp.mpf(0)
                    for size, mult in sizes:
                        f = necklace_count(a, size)
                        k = binomial_correction(f.numerator, mult)
                        log_prod += mp.log(mp.mpf(k.numerator)) - mp.log(
                            mp.mpf(k.denominator)
                        )
                    allowance = e4 * n * n / mp.mpf(a) ** 2
                    worst = max(worst, float(abs(log_prod) / allowance))
    return CheckResult(
        name="large-index-correction",
        passed=worst <= 1.0,
        measured=worst,
        bound=1.0,
    )


def check_small_range_envelope() -> CheckResult:
    """log K stays below the small-index envelope n log(delta n^{5/4}/a)
    + (1/delta + e^4/delta^2) n^{3/4} on the 2-cycle classes, n = 16, 64."""
    worst = -math.inf
    with mp.workprec(200):
        delta = range_split_threshold(1, prec=200)
        c2 = 1 / delta + mp.e**4 / delta**2
        for n in (16, 64):
            end = int(mp.floor(delta * mp.power(n, mp.mpf(5) / 4)))
            if end < 1:
                end = 1
            samples = sorted({1, 2, max(1, end // 2), end})
            for a in samples:
                if a > end:
                    continue
                f = necklace_count(a, 2)
                k = binomial_correction(f.numerator, n // 2)
                log_k = mp.log(mp.mpf(k.numerator)) - mp.log(mp.mpf(k.denominator))
                envelope = n * mp.log(delta * mp.power(n, mp.mpf(5) / 4) / a)
                envelope += c2 * mp.power(n, mp.mpf(3) / 4)
                worst = max(worst, float(log_k - envelope))
    return CheckResult(
        name="small-range-envelope",
        passed=worst <= 0.0,
        measured=worst,
        bound=0,
    )


def check_fixed_point_expansion() -> CheckResult:
    """The two-term expansion of K(a, n1) tightens like a^{-2} as a doubles."""
    ok = True
    worst = 0.0
    with mp.workprec(120):
        for n1 in (8, 16):
            errors = []
            for j in range(6):
                a = 2 * n1 * 2**j
                exact = binomial_correction(a, n1)
                log_exact = mp.log(mp.mpf(exact.numerator)) - mp.log(
                    mp.mpf(exact.denominator)
                )
                predicted = mp.mpf(n1) ** 3 / (12 * mp.mpf(a) ** 2) - 3 * mp.mpf(
                    n1
                ) ** 5 / (160 * mp.mpf(a) ** 4)
                err = abs(log_exact - predicted)
                errors.append((a, err))
                worst = max(worst, float(err * a * a / (n1 * n1)))
            for (_, earlier), (_, later) in zip(errors, errors[1:]):
                if later > earlier * mp.mpf("0.6"):
                    ok = False
    return CheckResult(
        name="fixed-point-expansion",
        passed=ok and worst <= 1.0,
        measured=worst,
        bound=1.0,
        detail="n1 in {8, 16}, a doubling from 2 n1",
    )


def check_substitution_expansion() -> CheckResult:
    """Substitution point at n = 10^4, s = 1 matches its four-term
    expansion value 0.8186 to 5e-5."""
    t = substitution_point(10_000, 1, prec=200)
    measured = abs(float(t) - 0.8186)
    return CheckResult(
        name="substitution-expansion",
        passed=measured < 5e-5,
        measured=measured,
        bound=5e-5,
    )


def check_empirical_exact() -> CheckResult:
    """Sampled mean and variance sit within 4 standard errors of the
    exact values for the class with two 3-cycles and one 2-cycle."""
    lam = CycleType({3: 2, 2: 1})
    dist = _distribution(lam)
    mean = dist.mean()
    variance = dist.variance()
    total = dist.total
    fourth = Fraction(0)
    for k in range(0, (lam.n - 1) // 2 + 1):
        c = dist.count(k)
        if c:
            fourth += c * (Fraction(k) - mean) ** 4
    fourth = fourth / total
    draws = 100_000
    stats = run_experiment(lam, draws, SeedSpec(seed=777))
    se_mean = math.sqrt(float(variance) / draws)
    se_var = math.sqrt(float(fourth - variance * variance) / draws)
    dev_mean = abs(stats.mean - float(mean)) / (4 * se_mean)
    dev_var = abs(stats.variance - float(variance)) / (4 * se_var)
    worst = max(dev_mean, dev_var)
    return CheckResult(
        name="empirical-exact",
        passed=worst <= 1.0,
        measured=worst,
        bound=1.0,
        detail=f"mean dev {_fmt(dev_mean)}, variance dev {_fmt(dev_var)} (in 4-SE units)",
    )


CHECKS: dict[str, Callable[[], CheckResult]] = {
    "oracle-equivalence": check_oracle_equivalence,
    "aggregation-consistency": check_aggregation_consistency,
    "global-moments": check_global_moments,
    "derivative-forms": check_derivative_forms,
    "figure-experiment": check_figure_experiment,
    "residual-decay": check_residual_decay,
    "necklace-ratio-bounds": check_necklace_ratio_bounds,
    "gaussian-envelopes": check_gaussian_envelopes,
    "sampler-uniformity": check_sampler_uniformity,
    "rearranged-identity": check_rearranged_identity,
    "real-rootedness": check_real_rootedness,
    "variance-consistency": check_variance_consistency,
    "necklace-integrality": check_necklace_integrality,
    "correction-consistency": check_correction_consistency,
    "large-index-correction": check_large_index_correction,
    "small-range-envelope": check_small_range_envelope,
    "fixed-point-expansion": check_fixed_point_expansion,
    "substitution-expansion": check_substitution_expansion,
    "empirical-exact": check_empirical_exact,
    "prediction-pipeline": check_prediction_pipeline,
}

SUITES: dict[str, tuple[str, ...]] = {
    "oracle": (
        "oracle-equivalence",
        "aggregation-consistency",
        "sampler-uniformity",
    ),
    "moments": (
        "global-moments",
        "real-rootedness",
        "variance-consistency",
    ),
    "bounds": (
        "derivative-forms",
        "necklace-ratio-bounds",
        "gaussian-envelopes",
        "necklace-integrality",
        "correction-consistency",
        "large-index-correction",
        "small-range-envelope",
        "fixed-point-expansion",
    ),
    "residuals": (
        "residual-decay",
        "rearranged-identity",
        "figure-experiment",
        "substitution-expansion",
        "empirical-exact",
        "prediction-pipeline",
    ),
}
SUITES["all"] = tuple(CHECKS)


def run_checks(names: Iterable[str]) -> Iterator[CheckResult]:
    for name in names:
        if name not in CHECKS:
            raise KeyError(f"unknown check {name!r}")
        yield CHECKS[name]()
