"""Probability mass functions on {0, ..., N}: construction, algebra, moments
and ultra log-concavity classification."""

from __future__ import annotations

import functools
import logging
import math
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from scipy import stats

from .exceptions import (
    BadParameter,
    DegreeTooSmall,
    DividedByZeroMass,
    EmptySupport,
    NegativeMass,
    NotNormalized,
    ParseError,
)
from .parsers import format_pmf_text, parse_pmf_text
from .types import Moments, Pmf, UlcClass

_LOGGER = logging.getLogger(__name__)

DEFAULT_TAIL_EPS = 1e-12
# Ingestion tolerance on the total mass.
MASS_TOL = 1e-6
# "Nonincreasing" allows rho(x+1) <= rho(x) * (1 + RATIO_RTOL).
RATIO_RTOL = 1e-12
MAX_BINOMIAL_N = 100_000
MIN_DEGREE_CAP = 1024

PathLike = Union[str, Path]


def _normalized(weights: np.ndarray) -> Pmf:
    """Trim trailing zeros and rescale to unit mass without a tolerance check."""
    w = np.asarray(weights, dtype=np.float64)
    nonzero = np.flatnonzero(w > 0.0)
    if nonzero.size == 0:
        raise EmptySupport("pmf has no positive mass", payload=w)
    w = w[: nonzero[-1] + 1]
    return Pmf(w / w.sum())


def _from_log_weights(log_w: np.ndarray) -> Pmf:
    w = np.exp(log_w - np.max(log_w))
    # subnormal tails carry no usable ratio information
    w[w < np.finfo(np.float64).tiny] = 0.0
    return _normalized(w)


def make_pmf(entries: Sequence[float]) -> Pmf:
    """Validate and normalize a weight vector indexed from 0.

    Raises:
        NegativeMass: If any entry is negative.
        EmptySupport: If all entries are zero.
        NotNormalized: If the sum is more than 1e-6 away from 1.
    """
    arr = np.asarray(entries, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise EmptySupport("pmf needs a non-empty 1-D weight vector", payload=entries)
    if not np.all(np.isfinite(arr)):
        raise BadParameter("pmf entries must be finite", payload=entries)
    if np.any(arr < 0.0):
        raise NegativeMass(
            f"negative mass at x={int(np.flatnonzero(arr < 0.0)[0])}", payload=entries
        )
    total = float(arr.sum())
    if total == 0.0:
        raise EmptySupport("all pmf entries are zero", payload=entries)
    if abs(total - 1.0) > MASS_TOL:
        raise NotNormalized(f"pmf sums to {total!r}, expected 1", payload=entries)
    return _normalized(arr)


def pmf_point_mass(k: int = 0) -> Pmf:
    if k < 0:
        raise BadParameter("point mass location must be >= 0", payload=k)
    probs = np.zeros(k + 1)
    probs[k] = 1.0
    return Pmf(probs)


def pmf_uniform(lo: int, hi: int) -> Pmf:
    """Uniform pmf on {lo, ..., hi}."""
    if lo < 0 or hi < lo:
        raise BadParameter(f"bad uniform range [{lo}, {hi}]", payload=(lo, hi))
    probs = np.zeros(hi + 1)
    probs[lo:] = 1.0
    return _normalized(probs)


def poisson_truncation_point(lam: float, tail_eps: float) -> int:
    """Smallest N whose Poisson tail mass beyond N is at most `tail_eps`.

    Below N0 = max(0, floor(lam) - 1) the exact survival function is used;
    from N0 on the certified bound P(N+1) / (1 - lam / (N+2)) is summed forward.
    """
    start = max(0, int(math.floor(lam)) - 1)
    if start > 0:
        head = stats.poisson.sf(np.arange(start), lam)
        hits = np.flatnonzero(head <= tail_eps)
        if hits.size:
            return int(hits[0])
    n = start
    while True:
        bound = math.exp(stats.poisson.logpmf(n + 1, lam)) / (1.0 - lam / (n + 2))
        if bound <= tail_eps:
            return n
        n += 1


def pmf_poisson(lam: float, tail_eps: float = DEFAULT_TAIL_EPS) -> Pmf:
    """Poisson(lam) truncated where the tail mass drops below `tail_eps`.

    Raises:
        BadParameter: Unless lam > 0 and 0 < tail_eps < 1.
    """
    if not (math.isfinite(lam) and lam > 0.0):
        raise BadParameter("lambda must be a positive finite number", payload=lam)
    if not 0.0 < tail_eps < 1.0:
        raise BadParameter("tail_eps must lie in (0, 1)", payload=tail_eps)
    n = poisson_truncation_point(lam, tail_eps)
    _LOGGER.debug("Poisson(%s) truncated at N=%s (tail_eps=%s)", lam, n, tail_eps)
    return _from_log_weights(stats.poisson.logpmf(np.arange(n + 1), lam))


def pmf_binomial(n: int, p: float) -> Pmf:
    """Binomial B(n, p) pmf.

    Raises:
        BadParameter: Unless 1 <= n <= 1e5 and 0 < p < 1.
    """
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= MAX_BINOMIAL_N:
        raise BadParameter(f"n must be an integer in [1, {MAX_BINOMIAL_N}]", payload=n)
    if not 0.0 < p < 1.0:
        raise BadParameter("p must lie in (0, 1)", payload=p)
    return _from_log_weights(stats.binom.logpmf(np.arange(int(n) + 1), int(n), p))


def pmf_bernoulli_sum(ps: Sequence[float]) -> Pmf:
    """Law of a sum of independent Bernoulli(p_i) variables."""
    if len(ps) == 0:
        raise BadParameter("bernoulli sum needs at least one p", payload=ps)
    for p in ps:
        if not 0.0 < p < 1.0:
            raise BadParameter("every p_i must lie in (0, 1)", payload=p)
    probs = functools.reduce(
        np.convolve, (np.array([1.0 - p, p]) for p in ps), np.array([1.0])
    )
    return _normalized(probs)


def convolve(a: Pmf, b: Pmf) -> Pmf:
    """Law of X + Y for independent X ~ a and Y ~ b."""
    return _normalized(np.convolve(a.probs, b.probs))


def mixture(alpha: float, a: Pmf, b: Pmf) -> Pmf:
    """Pointwise mixture alpha * a + (1 - alpha) * b."""
    if not 0.0 < alpha <= 1.0:
        raise BadParameter("alpha must lie in (0, 1]", payload=alpha)
    length = max(len(a), len(b))
    return _normalized(alpha * a.padded(length) + (1.0 - alpha) * b.padded(length))


def cdf(p: Pmf) -> np.ndarray:
    """F(x) = P(X <= x) for x = 0..N, clipped to [0, 1] with F(N) = 1."""
    f = np.minimum(np.cumsum(p.probs), 1.0)
    f[-1] = 1.0
    return f


def survival(p: Pmf) -> np.ndarray:
    """S(x) = P(X > x) for x = 0..N, summed from the right so tails stay accurate."""
    tail = np.cumsum(p.probs[::-1])[::-1]
    return np.append(tail[1:], 0.0)


def moments(p: Pmf) -> Moments:
    x = np.arange(len(p), dtype=np.float64)
    mean = float(np.dot(x, p.probs))
    variance = float(np.dot((x - mean) ** 2, p.probs))
    return Moments(mean=mean, variance=variance, second_moment=variance + mean**2)


def support_is_interval(p: Pmf) -> bool:
    return bool(np.all(p.probs[p.support_min :] > 0.0))


def interior_gap(p: Pmf) -> Optional[int]:
    """First zero-mass state strictly inside the support, if any."""
    zeros = np.flatnonzero(p.probs[p.support_min :] == 0.0)
    if zeros.size == 0:
        return None
    return int(zeros[0] + p.support_min)


def score_ratio_inf(p: Pmf, x: int) -> float:
    """rho(x) = x P(x) / P(x-1), with rho(0) = 0.

    Raises:
        BadParameter: If x is outside 0..N.
        DividedByZeroMass: If P(x-1) = 0.
    """
    if x == 0:
        return 0.0
    if not 1 <= x <= p.N:
        raise BadParameter(f"x={x} outside 1..{p.N}", payload=x)
    prev = p.probs[x - 1]
    if prev == 0.0:
        raise DividedByZeroMass(f"P({x - 1}) = 0", payload=x)
    return float(x * p.probs[x] / prev)


def score_ratio_n(p: Pmf, n: int, x: int) -> float:
    """rho^(n)(x) = x P(x) / ((n - x + 1) P(x-1)), with rho^(n)(0) = 0.

    Raises:
        DegreeTooSmall: If N > n.
        BadParameter: If x is outside 0..min(N, n).
        DividedByZeroMass: If P(x-1) = 0.
    """
    if p.N > n:
        raise DegreeTooSmall(f"support reaches {p.N} > n={n}", payload=n)
    if x == 0:
        return 0.0
    if not 1 <= x <= min(p.N, n):
        raise BadParameter(f"x={x} outside 1..{min(p.N, n)}", payload=x)
    prev = p.probs[x - 1]
    if prev == 0.0:
        raise DividedByZeroMass(f"P({x - 1}) = 0", payload=x)
    return float(x * p.probs[x] / ((n - x + 1) * prev))


def ulc_inf_holds(p: Pmf) -> bool:
    """rho nonincreasing, checked as x P(x)^2 >= (x+1) P(x+1) P(x-1)."""
    if not support_is_interval(p):
        return False
    probs = p.probs
    x = np.arange(1, p.N, dtype=np.float64)
    lhs = x * probs[1:-1] ** 2 * (1.0 + RATIO_RTOL)
    rhs = (x + 1.0) * probs[2:] * probs[:-2]
    return bool(np.all(rhs <= lhs))


def ulc_n_holds(p: Pmf, n: int) -> bool:
    """rho^(n) nonincreasing on a support inside {0, ..., n}."""
    if p.N > n or not support_is_interval(p):
        return False
    probs = p.probs
    x = np.arange(1, p.N, dtype=np.float64)
    lhs = x * probs[1:-1] ** 2 * (n - x) * (1.0 + RATIO_RTOL)
    rhs = (x + 1.0) * probs[2:] * probs[:-2] * (n - x + 1.0)
    return bool(np.all(rhs <= lhs))


def degree_cap(p: Pmf) -> int:
    return max(4 * p.N, MIN_DEGREE_CAP)


def min_ulc_degree(p: Pmf) -> Optional[int]:
    """Smallest n >= max(N, 1) with ULC(n), searched up to `degree_cap`.

    ULC(n) implies ULC(n+1), so the predicate is monotone and bisection applies.
    """
    lo, hi = max(p.N, 1), degree_cap(p)
    if not ulc_n_holds(p, hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if ulc_n_holds(p, mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def classify_ulc(p: Pmf) -> UlcClass:
    interval = support_is_interval(p)
    if not interval:
        return UlcClass(
            is_ulc_inf=False, min_ulc_degree=None, support_is_interval=False
        )
    result = UlcClass(
        is_ulc_inf=ulc_inf_holds(p),
        min_ulc_degree=min_ulc_degree(p),
        support_is_interval=True,
    )
    _LOGGER.debug("Classified pmf with N=%s as %s", p.N, result)
    return result


def read_pmf(path: PathLike) -> Pmf:
    """Load a pmf from the "x p" text format.

    Raises:
        ParseError: If the file cannot be read or parsed.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as err:
        _LOGGER.error("Cannot read pmf file %s: %s", path, err)
        raise ParseError(f"Cannot read {path}: {err}", payload=str(path)) from err
    entries, err = parse_pmf_text(text, source=str(path))
    if entries is None:
        raise ParseError(err or f"Could not parse {path}", payload=str(path))
    return make_pmf(entries)


def write_pmf(p: Pmf, path: PathLike, *, header: Optional[str] = None) -> None:
    Path(path).write_text(format_pmf_text(p.probs, header=header), encoding="utf-8")


__all__ = [
    "DEFAULT_TAIL_EPS",
    "make_pmf",
    "pmf_point_mass",
    "pmf_uniform",
    "poisson_truncation_point",
    "pmf_poisson",
    "pmf_binomial",
    "pmf_bernoulli_sum",
    "convolve",
    "mixture",
    "cdf",
    "survival",
    "moments",
    "support_is_interval",
    "interior_gap",
    "score_ratio_inf",
    "score_ratio_n",
    "ulc_inf_holds",
    "ulc_n_holds",
    "degree_cap",
    "min_ulc_degree",
    "classify_ulc",
    "read_pmf",
    "write_pmf",
]
