"""Correlation and significance machinery.

Pearson's r follows the textbook two-pass form

    r = sum((x_i - mx) (y_i - my)) / (sqrt(sum((x_i - mx)^2)) sqrt(sum((y_i - my)^2)))

The Student-t and standard-normal tail probabilities are computed in-package
(regularized incomplete beta via continued fraction; complementary error
function) so that results do not depend on an external statistics stack.
The test suite pins both against independent quadrature oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError, DegenerateStatisticsError, FormatMismatchError
from .lexicon import Lexicon, MatchPolicy, align_words

_P_MIN = 5e-324                                   # smallest positive double
_P_MAX = float.fromhex("0x1.fffffffffffffp-1")    # largest double below 1.0
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class CorrelationResult:
    """Sample Pearson correlation together with its sample size."""

    r: float
    n: int


def pearson(x, y) -> CorrelationResult:
    """Two-pass sample correlation of two equal-length series.

    Raises DegenerateStatisticsError when either series is constant (zero
    variance, e.g. constant predictions), DataError on shape problems.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.ndim != 1 or ya.ndim != 1 or xa.shape != ya.shape:
        raise DataError(
            f"series must be equal-length 1-d, got shapes {xa.shape} and {ya.shape}"
        )
    n = int(xa.size)
    if n < 2:
        raise DataError("correlation needs at least two paired observations")
    if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(ya))):
        raise DataError("series contain non-finite values")
    if bool(np.all(xa == xa[0])) or bool(np.all(ya == ya[0])):
        raise DegenerateStatisticsError(
            "constant series: correlation is undefined (zero variance)"
        )
    xd = xa - xa.mean()
    yd = ya - ya.mean()
    r = float((xd @ yd) / (math.sqrt(xd @ xd) * math.sqrt(yd @ yd)))
    return CorrelationResult(r=r, n=n)


def isr(
    a: Lexicon, b: Lexicon, policy: MatchPolicy = MatchPolicy.EXACT
) -> dict[str, CorrelationResult]:
    """Inter-study reliability: per shared dimension, the correlation between
    two lexicons' ratings over their overlapping words.

    The overlap count is carried in each result's ``n``.
    """
    canon_b = set(b.format.canonical_dimensions)
    shared = [d for d in a.format.canonical_dimensions if d in canon_b]
    if not shared:
        raise FormatMismatchError(
            f"no shared dimensions between {a.format.name!r} and {b.format.name!r}"
        )
    rows_a, rows_b = align_words(a.words, b.words, policy, strict=False)
    if len(rows_a) < 2:
        raise DataError(
            f"only {len(rows_a)} overlapping words; need at least 2"
        )
    out: dict[str, CorrelationResult] = {}
    for dim in shared:
        col_a = a.ratings[rows_a, a.format.index_of(dim)]
        col_b = b.ratings[rows_b, b.format.index_of(dim)]
        out[dim] = pearson(col_a, col_b)
    return out


@dataclass(frozen=True)
class IsrFloor:
    """Per-dimension minimum reliability over a set of study pairs."""

    minima: dict[str, float]

    def __getitem__(self, dimension: str) -> float:
        return self.minima[dimension]

    def get(self, dimension: str, default=None):
        return self.minima.get(dimension, default)


def isr_floor(
    pair_results: Iterable[Mapping[str, "CorrelationResult | float"]],
) -> IsrFloor:
    """Minimum per dimension across pairs; dimensions with no data stay absent."""
    minima: dict[str, float] = {}
    empty = True
    for pair in pair_results:
        empty = False
        for dim, value in pair.items():
            r = value.r if isinstance(value, CorrelationResult) else float(value)
            if dim not in minima or r < minima[dim]:
                minima[dim] = r
    if empty:
        raise DataError("no study pairs supplied")
    return IsrFloor(minima)


def t_test_one_sample_one_tailed(
    samples: Sequence[float], mu0: float
) -> tuple[float, float]:
    """Upper-tailed one-sample t test of H1: mean(samples) > mu0.

    t = (mean - mu0) / (s / sqrt(n)) with s the unbiased (n-1) sample SD;
    p is the upper tail of Student's t with n-1 degrees of freedom.
    """
    arr = [float(v) for v in samples]
    n = len(arr)
    if n < 2:
        raise DataError("t test needs at least two samples")
    if any(not math.isfinite(v) for v in arr):
        raise DataError("samples contain non-finite values")
    if all(v == arr[0] for v in arr):
        raise DegenerateStatisticsError("zero sample standard deviation")
    mean = math.fsum(arr) / n
    ss = math.fsum((v - mean) ** 2 for v in arr)
    s = math.sqrt(ss / (n - 1))
    t = (mean - mu0) / (s / math.sqrt(n))
    return t, student_t_upper_tail(t, n - 1)


def z_test_correlations_one_tailed(
    r1: float, n1: int, r2: float, n2: int
) -> tuple[float, float]:
    """Upper-tailed comparison of two correlations via the atanh transform.

    z = (atanh(r1) - atanh(r2)) / sqrt(1/(n1-3) + 1/(n2-3)); H1 is r1 > r2.
    """
    for r in (r1, r2):
        if not abs(r) < 1.0:
            raise DataError(f"|r| must be below 1 for the atanh transform, got {r}")
    for n in (n1, n2):
        if n <= 3:
            raise DataError(f"sample size must exceed 3, got {n}")
    se = math.sqrt(1.0 / (n1 - 3) + 1.0 / (n2 - 3))
    z = (math.atanh(r1) - math.atanh(r2)) / se
    return z, normal_upper_tail(z)


def student_t_upper_tail(t: float, df: float) -> float:
    """P(T >= t) for Student's t with df degrees of freedom.

    For t >= 0 this is I_x(df/2, 1/2) / 2 with x = df / (df + t^2); the
    negative side is the exact reflection 1 - P(T >= |t|), evaluated in that
    form so t = 0 gives exactly 0.5 and the reflection is bitwise consistent.
    """
    if df <= 0:
        raise DataError("degrees of freedom must be positive")
    if not math.isfinite(t):
        raise DataError("non-finite t statistic")
    x = df / (df + t * t)
    upper_at_abs = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x)
    p = upper_at_abs if t >= 0 else 1.0 - upper_at_abs
    return _clamp_open_unit(p)


def normal_upper_tail(z: float) -> float:
    """P(Z >= z) for the standard normal, via the complementary error function."""
    if not math.isfinite(z):
        raise DataError("non-finite z statistic")
    base = 0.5 * math.erfc(abs(z) / _SQRT2)
    p = base if z >= 0 else 1.0 - base
    return _clamp_open_unit(p)


def _clamp_open_unit(p: float) -> float:
    """Pin a tail probability into the open unit interval at double precision."""
    return min(max(p, _P_MIN), _P_MAX)


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), the regularized incomplete beta function.

    Continued-fraction evaluation (modified Lentz), switching to the
    symmetric form 1 - I_{1-x}(b, a) where the fraction converges faster.
    """
    if a <= 0 or b <= 0:
        raise DataError("beta parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def _beta_continued_fraction(
    a: float, b: float, x: float, max_iter: int = 500, eps: float = 1e-16
) -> float:
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        numerator = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        numerator = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + numerator * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + numerator / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")
