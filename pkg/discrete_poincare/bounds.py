"""Closed-form bounds, certificate searches and verifiers for R_X, and the
assembled `BoundReport`."""

from __future__ import annotations

import logging
import math
from concurrent.futures import Executor, Future
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from .dist_core import cdf, classify_ulc, moments, support_is_interval, survival
from .exceptions import (
    BadDecomposition,
    BadParameter,
    DegreeTooSmall,
    NegativeDiscriminant,
)
from .spectral_gap import centered_second_moment, dirichlet_form, poincare_exact
from .types import (
    BoundReport,
    Certificate,
    CertificateKind,
    ExactGap,
    GapKind,
    Moments,
    Pmf,
)

_LOGGER = logging.getLogger(__name__)

T = TypeVar("T")

# Verdict slack, relative to max(1, |lhs|, |rhs|).
VERDICT_SLACK = 1e-8
MOMENT_SLACK = 1e-10
DECOMPOSITION_TOL = 1e-12
# Relative slack on each crossing inequality.
CROSSING_RTOL = 1e-12
# Width to which a crossing constant is bisected below the first feasible candidate.
REFINE_WIDTH = 1e-12


# ----- Theorem-style moment bounds -----
def _checked_sqrt(disc: float, what: str) -> float:
    if disc < 0.0:
        if disc > -MOMENT_SLACK:
            return 0.0
        raise NegativeDiscriminant(
            f"{what}: square root argument {disc!r} is negative", payload=disc
        )
    return math.sqrt(disc)


def _check_degree(n: int) -> None:
    if n < 1:
        raise BadParameter("degree n must be >= 1", payload=n)


def bound_thm_ulc_inf(m: Moments) -> float:
    """E X + 1/2 + sqrt(1/4 + E X - Var X), valid for ULC(inf) laws.

    Raises:
        NegativeDiscriminant: If 1/4 + E X - Var X < 0.
    """
    disc = 0.25 + m.mean - m.variance
    return m.mean + 0.5 + _checked_sqrt(disc, "ULC(inf) bound")


def bound_thm_ulc_n(m: Moments, n: int) -> float:
    """E X + 1/2 - E X/(2n) + sqrt(1/4 + E X - Var X - E X/(2n)) for ULC(n)."""
    _check_degree(n)
    half = m.mean / (2.0 * n)
    disc = 0.25 + m.mean - m.variance - half
    return m.mean + 0.5 - half + _checked_sqrt(disc, "ULC(n) bound")


def bound_thm_ulc_n_refined(m: Moments, n: int) -> float:
    """The ULC(n) bound before dropping -(E X)^2/n + (E X)^2/(4n^2).

    Never exceeds `bound_thm_ulc_n`; for B(n, p) it collapses to np + 1 - p.
    """
    _check_degree(n)
    half = m.mean / (2.0 * n)
    disc = (
        0.25
        + m.mean
        - m.variance
        - half
        - m.mean**2 / n
        + m.mean**2 / (4.0 * n * n)
    )
    return m.mean + 0.5 - half + _checked_sqrt(disc, "refined ULC(n) bound")


def crossing_quadratic_roots(
    m: Moments, n: Optional[int] = None
) -> Tuple[float, float]:
    """Roots C- <= C+ of the quadratic every crossing constant must satisfy.

    ULC(inf): C^2 - C (2 E X + 1) + E X^2 <= 0.
    ULC(n):   C^2 - C (2 E X + 1 - E X / n) + E X^2 <= 0, with C = D n.
    """
    b = 2.0 * m.mean + 1.0
    if n is not None:
        _check_degree(n)
        b -= m.mean / n
    disc = b * b - 4.0 * m.second_moment
    root = _checked_sqrt(disc / 4.0, "crossing quadratic")
    return b / 2.0 - root, b / 2.0 + root


def variance_lower(p: Pmf) -> float:
    """Var X, a lower bound on R_X."""
    return moments(p).variance


def convolution_bound(component_bounds: Sequence[float]) -> float:
    """R_{X+Y} <= R_X + R_Y, extended to any number of independent summands."""
    for value in component_bounds:
        if value < 0:
            raise BadParameter("component bounds must be nonnegative", payload=value)
    return float(math.fsum(component_bounds))


def moment_feasible(m: Moments, n: Optional[int] = None) -> bool:
    """E X - Var X >= (E X)^2 / n, or >= 0 without a degree."""
    gap = m.mean - m.variance
    if n is None:
        return gap >= -MOMENT_SLACK
    _check_degree(n)
    return gap >= m.mean**2 / n - MOMENT_SLACK


def bernoulli_sum_thm_inf(ps: Sequence[float]) -> float:
    """Sum p + 1/2 + sqrt(1/4 + sum p^2): the ULC(inf) bound for Bernoulli sums."""
    return float(sum(ps)) + 0.5 + math.sqrt(0.25 + float(sum(p * p for p in ps)))


def bobkov_gotze(p: Pmf) -> Tuple[float, Optional[float]]:
    """C(P) = max F(x)(1 - F(x)) / P(x) over support points with F(x) < 1.

    Returns `(C, C / P(0))`; the upper value is None when P(0) = 0.
    """
    f, s = cdf(p), survival(p)
    mask = (p.probs > 0.0) & (s > 0.0)
    if not np.any(mask):
        c_value = 0.0
    else:
        c_value = float(np.max(f[mask] * s[mask] / p.probs[mask]))
    upper = c_value / float(p.probs[0]) if p.probs[0] > 0.0 else None
    return c_value, upper


def bobkov_gotze_binomial_upper(n: int, p: float) -> float:
    """1/(1-p)^n - 1, a lower estimate of the Bobkov-Gotze upper bound for B(n, p)."""
    return float((1.0 - p) ** (-n) - 1.0)


# ----- Klaasen kernel and tail certificates -----
def _centre_floor(x0: float) -> int:
    if not x0 >= 0.0:
        raise BadParameter("centre x0 must be >= 0", payload=x0)
    return math.floor(x0)


def klaasen_kernel(x: int, y: int, x0: float) -> float:
    """chi(x, y) for centre x0 >= 0."""
    k = _centre_floor(x0)
    value = 0.0
    if k <= y < x:
        value += 1.0
    if x <= y < k:
        value -= 1.0
    if y == k:
        value -= x0 - k
    return value


def kernel_apply(x0: float, x: int, h: Sequence[float]) -> float:
    """Sum over y of chi(x, y) h(y), through the three-case closed form.

    Taking h = Delta g gives g(x) - g*, with
    g* = g(floor x0) + (Delta g)(floor x0) (x0 - floor x0).
    """
    k = _centre_floor(x0)
    values = np.asarray(h, dtype=np.float64)
    frac_term = (k - x0) * float(values[k])
    if x < k:
        return -float(np.sum(values[x:k])) + frac_term
    if x == k:
        return frac_term
    return float(np.sum(values[k:x])) + frac_term


def weighted_kernel_sum(p: Pmf, x0: float, y: int) -> float:
    """Sum over x of chi(x, y) P(x) (x - x0)."""
    x = np.arange(len(p))
    chi = np.array([klaasen_kernel(int(xi), y, x0) for xi in x])
    return float(np.dot(chi, p.probs * (x - x0)))


def verify_tail_certificate(
    px: Pmf, p1: Pmf, alpha: float, x0: float, c: float
) -> bool:
    """Check the tail conditions that certify R_X <= c / alpha.

    For y >= x0: sum_{x > y} (x - x0) P(x) <= c P1(y).
    For y <  x0: -sum_{x <= y} (x - x0) P(x) <= c P1(y).
    Checked for y = 0..max(N, floor x0); beyond that both sides vanish. At
    y = floor(x0) with fractional x0 the kernel-weighted mix of both tails,
    which is what the variance bound consumes, must also stay below c P1(y).

    Raises:
        BadParameter: Unless c > 0 and 0 < alpha <= 1.
        BadDecomposition: If px - alpha * p1 dips below -1e-12.
    """
    if not c > 0.0:
        raise BadParameter("c must be positive", payload=c)
    if not 0.0 < alpha <= 1.0:
        raise BadParameter("alpha must lie in (0, 1]", payload=alpha)
    length = max(len(px), len(p1), _centre_floor(x0) + 1)
    probs = px.padded(length)
    probs1 = p1.padded(length)
    residual = probs - alpha * probs1
    if np.any(residual < -DECOMPOSITION_TOL):
        raise BadDecomposition(
            f"px - alpha*p1 has minimum {float(residual.min())!r}", payload=residual
        )

    x = np.arange(length, dtype=np.float64)
    weighted = (x - x0) * probs
    upper_tail = np.append(np.cumsum(weighted[::-1])[::-1][1:], 0.0)  # x > y
    lower_tail = -np.cumsum(weighted)  # -sum over x <= y
    lhs = np.where(x >= x0, upper_tail, lower_tail)
    k = math.floor(x0)
    frac = x0 - k
    if frac > 0.0:
        # the kernel mixes both tails at y = floor(x0)
        mixed = (1.0 - frac) * upper_tail[k] + frac * lower_tail[k]
        lhs[k] = max(lhs[k], mixed)
    slack = DECOMPOSITION_TOL * max(1.0, abs(x0))
    return bool(np.all(lhs <= c * probs1 + slack))


def _tail_certificate(p: Pmf, x0: float, c: float) -> Optional[Certificate]:
    if not verify_tail_certificate(p, p, 1.0, x0, c):
        return None
    return Certificate(
        kind=CertificateKind.TAIL_CONDITION, implied_bound=c, x0=x0, c=c, alpha=1.0
    )


def tail_certificate_from_crossing(p: Pmf, cert: Certificate) -> Optional[Certificate]:
    """Turn a crossing certificate into the tail certificate x0 = c = C (or Dn)."""
    if cert.kind is CertificateKind.TAIL_CONDITION:
        return cert
    return _tail_certificate(p, cert.implied_bound, cert.implied_bound)


# ----- Crossing-constant searches -----
def _crossing_inf_feasible(p: Pmf, const: float) -> bool:
    x = np.arange(1, len(p) + 1, dtype=np.float64)
    mass = np.append(p.probs[1:], 0.0)
    lhs = x * mass
    rhs = const * p.probs
    below = x < const
    ok_below = lhs[below] >= rhs[below] * (1.0 - CROSSING_RTOL)
    ok_above = lhs[~below] <= rhs[~below] * (1.0 + CROSSING_RTOL)
    return bool(np.all(ok_below) and np.all(ok_above))


def _crossing_n_feasible(p: Pmf, n: int, d: float) -> bool:
    r = d / (1.0 - d)
    x = np.arange(1, n + 1, dtype=np.float64)
    full = p.padded(n + 1)
    lhs = x * full[1:]
    rhs = r * (n - x + 1.0) * full[:-1]
    below = x < d * n
    ok_below = lhs[below] >= rhs[below] * (1.0 - CROSSING_RTOL)
    ok_above = lhs[~below] <= rhs[~below] * (1.0 + CROSSING_RTOL)
    return bool(np.all(ok_below) and np.all(ok_above))


def _minimal_feasible(
    candidates: np.ndarray, feasible: Callable[[float], bool], floor: float
) -> Optional[float]:
    """Smallest feasible candidate, pushed down by bisection toward its predecessor."""
    ordered = np.unique(candidates)
    previous = floor
    for candidate in ordered:
        value = float(candidate)
        if feasible(value):
            lo, hi = previous, value
            while hi - lo > REFINE_WIDTH:
                mid = 0.5 * (lo + hi)
                if feasible(mid):
                    hi = mid
                else:
                    lo = mid
            return hi
        previous = value
    return None


def _score_ratios(p: Pmf) -> np.ndarray:
    """rho(x) for x = 1..N where P(x-1) > 0."""
    prev = p.probs[:-1]
    x = np.arange(1, len(p), dtype=np.float64)
    ok = prev > 0.0
    return x[ok] * p.probs[1:][ok] / prev[ok]


def crossing_constant_inf(p: Pmf) -> Optional[Certificate]:
    """Smallest C with rho(x) >= C for x < C and rho(x) <= C for x >= C.

    Candidates are the score ratios and the integer thresholds 1..N+1; the
    first feasible one is bisected toward its predecessor to 1e-12.
    """
    ratios = _score_ratios(p)
    candidates = np.concatenate(
        (ratios[ratios > 0.0], np.arange(1, len(p) + 1, dtype=np.float64))
    )
    const = _minimal_feasible(
        candidates, lambda c: _crossing_inf_feasible(p, c), floor=0.0
    )
    if const is None or const <= 0.0:
        _LOGGER.debug("No crossing constant found for N=%s", p.N)
        return None
    return Certificate(kind=CertificateKind.CROSSING_INF, implied_bound=const, C=const)


def crossing_constant_n(p: Pmf, n: int) -> Optional[Certificate]:
    """Smallest D in (0, 1) solving the degree-n crossing condition; bound D n.

    Raises:
        DegreeTooSmall: If N > n.
    """
    if p.N > n:
        raise DegreeTooSmall(f"support reaches {p.N} > n={n}", payload=n)
    _check_degree(n)
    full = p.padded(n + 1)
    x = np.arange(1, n + 1, dtype=np.float64)
    prev = full[:-1]
    ok = prev > 0.0
    ratios = x[ok] * full[1:][ok] / ((n - x[ok] + 1.0) * prev[ok])
    ratios = ratios[ratios > 0.0]
    candidates = np.concatenate((ratios / (1.0 + ratios), np.arange(1, n) / n))
    candidates = candidates[(candidates > 0.0) & (candidates < 1.0)]
    d = _minimal_feasible(
        candidates, lambda v: _crossing_n_feasible(p, n, v), floor=0.0
    )
    if d is None or not 0.0 < d < 1.0:
        _LOGGER.debug("No degree-%s crossing constant found for N=%s", n, p.N)
        return None
    return Certificate(
        kind=CertificateKind.CROSSING_DEGREE_N, implied_bound=d * n, D=d, n=n
    )


# ----- Report assembly -----
def _optional(fn: Callable[[], float], label: str, notes: List[str]) -> Optional[float]:
    try:
        return fn()
    except NegativeDiscriminant as err:
        notes.append(f"{label} unavailable: {err}")
        return None


def _submit(
    executor: Optional[Executor], fn: Callable[..., T], *args: Any
) -> Future[T]:
    if executor is not None:
        return executor.submit(fn, *args)
    done: Future[T] = Future()
    done.set_result(fn(*args))
    return done


def _component_value(exact: ExactGap) -> Optional[float]:
    if exact.kind is GapKind.DEGENERATE:
        return 0.0  # a point mass only shifts the sum
    return exact.value if exact.is_finite else None


def _at_most(lhs: float, rhs: float) -> bool:
    """lhs <= rhs up to VERDICT_SLACK relative to max(1, |lhs|, |rhs|)."""
    return lhs <= rhs + VERDICT_SLACK * max(1.0, abs(lhs), abs(rhs))


def _record_verdicts(p: Pmf, report: BoundReport) -> None:
    exact, m, verdicts = report.exact, report.moments, report.verdicts
    degree = report.degree

    if exact.is_finite and exact.value is not None:
        verdicts["variance_le_exact"] = _at_most(m.variance, exact.value)
        verdicts["bg_C_le_exact"] = _at_most(report.bg_C, exact.value)
        uppers: Dict[str, Optional[float]] = {
            "bg_upper": report.bg_upper,
            "crossing_inf": (
                report.crossing_inf.implied_bound if report.crossing_inf else None
            ),
            "crossing_n": (
                report.crossing_n.implied_bound if report.crossing_n else None
            ),
            "convolution_note": report.convolution_note,
        }
        if "thm_inf" not in report.inapplicable:
            uppers["thm_inf"] = report.thm_inf
        if degree is not None:
            uppers["thm_n"] = report.thm_n
            uppers["thm_n_refined"] = report.thm_n_refined
        for name, bound in uppers.items():
            if bound is not None:
                verdicts[f"exact_le_{name}"] = _at_most(exact.value, bound)

    if exact.kind is GapKind.INFINITE and exact.witness is not None:
        verdicts["gap_witness_valid"] = (
            dirichlet_form(p, exact.witness) == 0.0
            and centered_second_moment(p, exact.witness) > 0.0
        )

    if report.ulc.is_ulc_inf:
        verdicts["moment_feasible_inf"] = moment_feasible(m)
        verdicts["ulc_inf_has_crossing"] = report.crossing_inf is not None
    if degree is None:
        return
    verdicts["moment_feasible_n"] = moment_feasible(m, degree)
    refined, thm_n, thm_inf = report.thm_n_refined, report.thm_n, report.thm_inf
    if report.crossing_n is not None and refined is not None:
        verdicts["crossing_n_le_thm_n_refined"] = (
            _at_most(report.crossing_n.implied_bound, refined)
        )
    if refined is not None and thm_n is not None:
        verdicts["thm_n_refined_le_thm_n"] = _at_most(refined, thm_n)
    if thm_n is not None and thm_inf is not None:
        verdicts["thm_n_le_thm_inf"] = _at_most(thm_n, thm_inf)


def full_report(
    p: Pmf,
    *,
    components: Optional[Sequence[Pmf]] = None,
    executor: Optional[Executor] = None,
) -> BoundReport:
    """Compute every applicable bound for `p` and compare it with R_X.

    Args:
        p: The pmf to analyse.
        components: Independent summands `p` was built from; enables the
            convolution bound.
        executor: Optional executor for the independent computations. Results
            are collected in a fixed order so the report does not depend on
            scheduling.

    Returns:
        BoundReport: Bound infeasibility is recorded in `inapplicable` and
        `notes`, never raised.
    """
    exact_f = _submit(executor, poincare_exact, p)
    ulc_f = _submit(executor, classify_ulc, p)
    bg_f = _submit(executor, bobkov_gotze, p)
    crossing_f = _submit(executor, crossing_constant_inf, p)
    parts_f = [_submit(executor, poincare_exact, c) for c in components or ()]

    m = moments(p)
    exact, ulc = exact_f.result(), ulc_f.result()
    bg_c, bg_upper = bg_f.result()
    report = BoundReport(
        exact=exact,
        moments=m,
        ulc=ulc,
        lower_variance=m.variance,
        bg_C=bg_c,
        bg_upper=bg_upper,
        crossing_inf=crossing_f.result(),
    )
    notes, inapplicable = report.notes, report.inapplicable

    if not support_is_interval(p):
        report.bg_upper = None
        inapplicable.append("bg_upper")
        notes.append("bg_upper inapplicable: zero mass inside the support")
    elif bg_upper is None:
        notes.append("bg_upper absent: P(0) = 0")
    if exact.kind is GapKind.INFINITE:
        notes.append(
            f"R_X is infinite: support gap at x={exact.gap_location}; "
            "no finite upper bound applies"
        )
    elif exact.kind is GapKind.DEGENERATE:
        notes.append("single-point support: no admissible g, R_X is undefined")

    # Moment bounds are always offered; they only count under ULC.
    report.thm_inf = _optional(lambda: bound_thm_ulc_inf(m), "thm_inf", notes)
    if not ulc.is_ulc_inf:
        inapplicable.append("thm_inf")
    degree = ulc.min_ulc_degree
    report.degree = degree
    if degree is not None:
        report.thm_n = _optional(lambda: bound_thm_ulc_n(m, degree), "thm_n", notes)
        report.thm_n_refined = _optional(
            lambda: bound_thm_ulc_n_refined(m, degree), "thm_n_refined", notes
        )
        report.crossing_n = crossing_constant_n(p, degree)
    else:
        inapplicable.extend(["thm_n", "thm_n_refined", "crossing_n"])

    if parts_f:
        values = [_component_value(f.result()) for f in parts_f]
        if all(v is not None for v in values):
            report.convolution_note = convolution_bound(
                [v for v in values if v is not None]
            )
        else:
            notes.append("convolution bound unavailable: a component is not finite")

    _record_verdicts(p, report)
    if report.failed_verdicts:
        _LOGGER.warning("Report has failed verdicts: %s", report.failed_verdicts)
    else:
        _LOGGER.debug("Report for N=%s: %d verdicts passed", p.N, len(report.verdicts))
    return report


__all__ = [
    "VERDICT_SLACK",
    "bound_thm_ulc_inf",
    "bound_thm_ulc_n",
    "bound_thm_ulc_n_refined",
    "crossing_quadratic_roots",
    "variance_lower",
    "convolution_bound",
    "moment_feasible",
    "bernoulli_sum_thm_inf",
    "bobkov_gotze",
    "bobkov_gotze_binomial_upper",
    "klaasen_kernel",
    "kernel_apply",
    "weighted_kernel_sum",
    "verify_tail_certificate",
    "tail_certificate_from_crossing",
    "crossing_constant_inf",
    "crossing_constant_n",
    "full_report",
]
