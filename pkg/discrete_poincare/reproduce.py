"""Named reproduction cases: canonical parameterizations with their claimed
values next to the computed ones."""

from __future__ import annotations

import logging
import math
from concurrent.futures import Executor
from typing import Callable, Dict, List, Optional

import numpy as np

from .bounds import (
    bernoulli_sum_thm_inf,
    bobkov_gotze_binomial_upper,
    convolution_bound,
    full_report,
)
from .charlier import (
    charlier,
    charlier_rayleigh,
    check_delta_identity,
    check_orthogonality,
)
from .dist_core import (
    DEFAULT_TAIL_EPS,
    convolve,
    mixture,
    pmf_bernoulli_sum,
    pmf_binomial,
    pmf_poisson,
    pmf_uniform,
)
from .exceptions import UnknownCase
from .spectral_gap import (
    centered_second_moment,
    dirichlet_form,
    poincare_exact,
    rayleigh,
    smoothed_step,
)
from .types import ClaimCheck, GapKind, Pmf

_LOGGER = logging.getLogger(__name__)

POISSON_LAMBDAS = (0.5, 1.0, 2.0, 5.0)
BINOMIAL_CASES = ((10, 0.3), (20, 0.5), (5, 0.9))
BERNOULLI_PS = (0.1,) * 10
SLACK = 1e-8

CaseRunner = Callable[[float, Optional[Executor]], List[ClaimCheck]]


def _fmt(value: Optional[float]) -> str:
    return "absent" if value is None else f"{value:.10g}"


def _close(
    label: str, target: float, value: Optional[float], tol: float, source: str
) -> ClaimCheck:
    ok = value is not None and abs(value - target) <= tol
    return ClaimCheck(label, f"= {target:.10g} (±{tol:g})", _fmt(value), ok, source)


def _at_least(
    label: str, target: float, value: Optional[float], source: str
) -> ClaimCheck:
    ok = value is not None and value >= target - SLACK * max(1.0, abs(target))
    return ClaimCheck(label, f">= {target:.10g}", _fmt(value), ok, source)


def _at_most(
    label: str, target: float, value: Optional[float], source: str
) -> ClaimCheck:
    ok = value is not None and value <= target + SLACK * max(1.0, abs(target))
    return ClaimCheck(label, f"<= {target:.10g}", _fmt(value), ok, source)


def case_poisson(tail_eps: float, executor: Optional[Executor]) -> List[ClaimCheck]:
    claims: List[ClaimCheck] = []
    for lam in POISSON_LAMBDAS:
        report = full_report(pmf_poisson(lam, tail_eps), executor=executor)
        tag = f"lambda={lam:g}"
        claims.append(
            _close(f"{tag} exact", lam, report.exact.value, 1e-6, "Poisson exactness")
        )
        claims.append(
            _close(
                f"{tag} crossing C",
                lam,
                report.crossing_inf.implied_bound if report.crossing_inf else None,
                1e-9,
                "crossing constant",
            )
        )
        claims.append(
            _at_least(
                f"{tag} bg_C", 1.0 - math.exp(-lam), report.bg_C, "Bobkov-Gotze lower"
            )
        )
        claims.append(
            _at_least(
                f"{tag} bg_upper",
                math.expm1(lam),
                report.bg_upper,
                "Bobkov-Gotze looseness",
            )
        )
        claims.append(
            _close(f"{tag} thm_inf", lam + 1.0, report.thm_inf, 1e-6, "ULC(inf) bound")
        )
    return claims


def case_binomial(tail_eps: float, executor: Optional[Executor]) -> List[ClaimCheck]:
    del tail_eps
    claims: List[ClaimCheck] = []
    for n, p in BINOMIAL_CASES:
        report = full_report(pmf_binomial(n, p), executor=executor)
        tag = f"B({n},{p:g})"
        exact = report.exact.value
        claims.append(
            _at_least(f"{tag} exact", n * p * (1.0 - p), exact, "variance lower bound")
        )
        claims.append(_at_most(f"{tag} exact", n * p, exact, "crossing bound np"))
        crossing = report.crossing_n
        claims.append(
            _close(
                f"{tag} crossing D",
                p,
                crossing.D if crossing else None,
                1e-9,
                "degree-n crossing",
            )
        )
        claims.append(
            _close(
                f"{tag} refined bound",
                n * p + 1.0 - p,
                report.thm_n_refined,
                1e-9,
                "refined ULC(n) bound",
            )
        )
        claims.append(
            _at_least(
                f"{tag} bg_upper",
                bobkov_gotze_binomial_upper(n, p),
                report.bg_upper,
                "Bobkov-Gotze looseness",
            )
        )
    return claims


def case_bernoulli_sum(
    tail_eps: float, executor: Optional[Executor]
) -> List[ClaimCheck]:
    del tail_eps
    ps = list(BERNOULLI_PS)
    parts = [pmf_bernoulli_sum([q]) for q in ps]
    report = full_report(pmf_bernoulli_sum(ps), components=parts, executor=executor)
    lower = float(sum(q - q * q for q in ps))
    thm = bernoulli_sum_thm_inf(ps)
    squares = float(sum(q * q for q in ps))
    return [
        _close("variance lower", lower, report.lower_variance, 1e-9, "variance bound"),
        _close(
            "convolution upper",
            float(sum(ps)),
            report.convolution_note,
            1e-9,
            "subadditivity",
        ),
        _close("thm_inf", thm, report.thm_inf, 1e-9, "ULC(inf) bound"),
        _at_least("exact", lower, report.exact.value, "variance bound"),
        _at_most("exact", float(sum(ps)), report.exact.value, "subadditivity"),
        _close(
            "thm_inf - lower",
            0.5 + squares + math.sqrt(0.25 + squares),
            thm - lower,
            1e-12,
            "gap tends to 1 as sum p^2 -> 0",
        ),
    ]


def _exact_value(p: Pmf) -> float:
    value = poincare_exact(p).value
    return math.nan if value is None else float(value)


def case_convolution(
    tail_eps: float, executor: Optional[Executor]
) -> List[ClaimCheck]:
    del executor
    a, b = pmf_poisson(1.0, tail_eps), pmf_poisson(2.0, tail_eps)
    claims = [
        _close(
            "Poisson(1) * Poisson(2)",
            convolution_bound([_exact_value(a), _exact_value(b)]),
            _exact_value(convolve(a, b)),
            1e-6,
            "subadditivity is tight for Poisson",
        )
    ]
    left = pmf_bernoulli_sum([0.2, 0.7])
    right = pmf_binomial(4, 0.35)
    claims.append(
        _at_most(
            "Bern-sum(0.2,0.7) * B(4,0.35)",
            convolution_bound([_exact_value(left), _exact_value(right)]),
            _exact_value(convolve(left, right)),
            "subadditivity",
        )
    )
    return claims


def counterexample_pmf() -> Pmf:
    """Even mixture of the uniform laws on {0, 1} and {3, 4}."""
    return mixture(0.5, pmf_uniform(0, 1), pmf_uniform(3, 4))


def case_counterexample(
    tail_eps: float, executor: Optional[Executor]
) -> List[ClaimCheck]:
    del tail_eps
    p = counterexample_pmf()
    report = full_report(p, executor=executor)
    exact = report.exact
    witness = exact.witness
    step_text = (
        "absent"
        if witness is None
        else " ".join(f"{v:+.2f}" for v in np.asarray(witness)[:-1])
    )
    claims = [
        ClaimCheck(
            "exact kind",
            GapKind.INFINITE.value,
            exact.kind.value,
            exact.kind is GapKind.INFINITE,
            "disconnected support",
        ),
        ClaimCheck(
            "witness step g(0..N)",
            "Dirichlet form 0, variance > 0",
            step_text,
            witness is not None
            and dirichlet_form(p, witness) == 0.0
            and centered_second_moment(p, witness) > 0.0,
            "disconnected support",
        ),
        ClaimCheck(
            "bg_C",
            "finite",
            _fmt(report.bg_C),
            math.isfinite(report.bg_C),
            "Bobkov-Gotze",
        ),
    ]
    if exact.gap_location is not None:
        big = 1e6
        quotient = rayleigh(p, smoothed_step(p, exact.gap_location, 1e-4))
        claims.append(
            ClaimCheck(
                "smoothed step quotient",
                f"> {big:g}",
                _fmt(quotient),
                quotient > big,
                "unbounded quotient",
            )
        )
    return claims


def case_charlier(tail_eps: float, executor: Optional[Executor]) -> List[ClaimCheck]:
    del executor
    c2 = charlier(2, 1.0).coeffs
    return [
        ClaimCheck(
            "c_2 at lambda=1",
            "x^2 - 3x + 1",
            " ".join(f"{v:g}" for v in c2[::-1]),
            bool(np.array_equal(c2, [1.0, -3.0, 1.0])),
            "three-term recurrence",
        ),
        _at_most(
            "difference n=2 lambda=1",
            1e-9,
            check_delta_identity(2, 1.0, 20),
            "difference",
        ),
        _at_most(
            "difference n=10 lambda=5",
            1e-6,
            check_delta_identity(10, 5.0, 40),
            "difference",
        ),
        _close(
            "<c_1, c_1> lambda=2",
            2.0,
            check_orthogonality(1, 1, 2.0, tail_eps),
            1e-8,
            "orthogonality",
        ),
        _close(
            "<c_3, c_5> lambda=1",
            0.0,
            check_orthogonality(3, 5, 1.0, tail_eps),
            1e-8,
            "orthogonality",
        ),
        _close(
            "quotient of c_1, lambda=2",
            2.0,
            charlier_rayleigh(1, 2.0, tail_eps),
            1e-6,
            "c_1 is extremal",
        ),
        _close(
            "quotient of c_2, lambda=2",
            1.0,
            charlier_rayleigh(2, 2.0, tail_eps),
            0.02,
            "quotient lambda/n",
        ),
    ]


CASES: Dict[str, CaseRunner] = {
    "poisson": case_poisson,
    "binomial": case_binomial,
    "bernoulli-sum": case_bernoulli_sum,
    "convolution": case_convolution,
    "counterexample": case_counterexample,
    "charlier": case_charlier,
}


def run_case(
    case: str,
    *,
    tail_eps: float = DEFAULT_TAIL_EPS,
    executor: Optional[Executor] = None,
) -> List[ClaimCheck]:
    """Run one named case.

    Raises:
        UnknownCase: If `case` is not one of `CASES`.
    """
    runner = CASES.get(case)
    if runner is None:
        raise UnknownCase(
            f"Unknown case {case!r}; expected one of {', '.join(CASES)}", payload=case
        )
    claims = runner(tail_eps, executor)
    failed = [c.label for c in claims if not c.ok]
    if failed:
        _LOGGER.warning("Case %s: %d claim(s) failed: %s", case, len(failed), failed)
    else:
        _LOGGER.debug("Case %s: %d claim(s) verified", case, len(claims))
    return claims


__all__ = ["CASES", "counterexample_pmf", "run_case"]
