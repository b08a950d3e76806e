"""Seeded randomized property suite behind `verify`.

Every trial draws its own generator from `numpy.random.SeedSequence(seed)`,
so a trial's instances do not depend on how trials are scheduled, and runs
each property exactly once.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .bounds import (
    VERDICT_SLACK,
    bobkov_gotze,
    crossing_constant_inf,
    crossing_quadratic_roots,
    full_report,
    kernel_apply,
    klaasen_kernel,
    verify_tail_certificate,
    weighted_kernel_sum,
)
from .charlier import check_delta_identity, check_orthogonality, squared_norm
from .dist_core import cdf, convolve, make_pmf, pmf_bernoulli_sum, survival
from .exceptions import BadParameter, DegenerateSupport, PoincareError
from .spectral_gap import poincare_exact
from .types import Pmf

_LOGGER = logging.getLogger(__name__)

DEFAULT_TRIALS = 200
MAX_BERNOULLI_TERMS = 30
ORACLE_MAX_N = 12
ORACLE_RTOL = 1e-5
CHARLIER_LAMBDAS = (0.5, 1.0, 2.0, 5.0, 10.0)

Property = Callable[[np.random.Generator], bool]


# ----- Instance generators -----
def random_bernoulli_ps(
    rng: np.random.Generator, max_terms: int = MAX_BERNOULLI_TERMS
) -> np.ndarray:
    k = int(rng.integers(1, max_terms + 1))
    return rng.uniform(0.05, 0.95, size=k)


def random_connected_pmf(rng: np.random.Generator, max_n: int = 10) -> Pmf:
    """Pmf on {0..N}, 1 <= N <= max_n, with every mass positive."""
    n = int(rng.integers(1, max_n + 1))
    weights = rng.uniform(0.05, 1.0, size=n + 1)
    return make_pmf(weights / weights.sum())


def random_non_ulc_pmf(rng: np.random.Generator, max_n: int = 10) -> Pmf:
    """Connected pmf on {0..N}, 2 <= N <= max_n, that is ULC of no degree.

    One interior mass is pushed below half of its smaller neighbour, which
    breaks x P(x)^2 >= (x + 1) P(x + 1) P(x - 1) and with it every ULC(n).
    """
    n = int(rng.integers(2, max(max_n, 2) + 1))
    weights = rng.uniform(0.05, 1.0, size=n + 1)
    j = int(rng.integers(1, n))
    weights[j] = rng.uniform(0.05, 0.5) * min(weights[j - 1], weights[j + 1])
    return make_pmf(weights / weights.sum())


# ----- Independent oracle -----
def rayleigh_ascent(
    p: Pmf,
    rng: np.random.Generator,
    *,
    restarts: int = 3,
    max_sweeps: int = 400,
    rtol: float = 1e-12,
) -> float:
    """Maximize Var g(X) / E (Delta g)(X)^2 directly over g.

    Each step maximizes exactly over span{g, 1{y > i}} by solving the 2x2
    generalized eigenproblem in closed form; sweeps cycle through i. Quadratic
    forms come straight from the masses, not from the covariance kernel.
    Meant for pmfs with connected support.

    Raises:
        DegenerateSupport: For single-point pmfs.
    """
    if p.is_point_mass:
        raise DegenerateSupport("no admissible g on a single point")
    probs = p.probs
    size = len(p)
    f, s = cdf(p), survival(p)
    movable = [i for i in range(size - 1) if probs[i] > 0.0]
    states = np.arange(size, dtype=np.float64)

    def forms(g: np.ndarray) -> Tuple[np.ndarray, float, float]:
        centered = g - float(np.dot(probs, g))
        var = float(np.dot(probs, centered**2))
        dirichlet = float(np.dot(probs[:-1], np.diff(g) ** 2))
        return centered, var, dirichlet

    best = 0.0
    for attempt in range(restarts):
        g = states.copy() if attempt == 0 else rng.standard_normal(size)
        centered, var, dirichlet = forms(g)
        if dirichlet <= 0.0:
            continue
        value = var / dirichlet
        for _ in range(max_sweeps):
            start = value
            for i in movable:
                c = float(np.dot(probs[i + 1 :], centered[i + 1 :]))
                d = f[i] * s[i]
                cross = probs[i] * (g[i + 1] - g[i])
                h = probs[i]
                alpha = dirichlet * h - cross * cross
                if alpha <= 1e-15 * dirichlet * h:
                    continue
                beta = var * h + d * dirichlet - 2.0 * c * cross
                gamma = var * d - c * c
                disc = max(beta * beta - 4.0 * alpha * gamma, 0.0)
                root = (beta + math.sqrt(disc)) / (2.0 * alpha)
                u, w = d - root * h, -(c - root * cross)
                if abs(u) + abs(w) <= 1e-300:
                    u, w = -(c - root * cross), var - root * dirichlet
                step = np.zeros(size)
                step[i + 1 :] = 1.0
                g = u * g + w * step
                centered, var, dirichlet = forms(g)
                if dirichlet <= 0.0 or var <= 0.0:
                    break
                g = g / math.sqrt(var)
                centered, var, dirichlet = forms(g)
                value = max(value, var / dirichlet)
            if value - start <= rtol * value:
                break
        best = max(best, value)
    return best


# ----- Properties -----
def _ulc_sandwich(rng: np.random.Generator) -> bool:
    ps = random_bernoulli_ps(rng)
    parts = [pmf_bernoulli_sum([q]) for q in ps]
    report = full_report(pmf_bernoulli_sum(ps), components=parts)
    exact = report.exact.value
    if report.failed_verdicts or exact is None or report.degree is None:
        return False
    if report.crossing_n is None or report.crossing_inf is None:
        return False
    chain = [
        report.lower_variance,
        exact,
        report.crossing_n.implied_bound,
        report.thm_n_refined,
        report.thm_n,
        report.thm_inf,
    ]
    if any(v is None for v in chain):
        return False
    ordered = all(
        float(lo) <= float(hi) + VERDICT_SLACK  # type: ignore[arg-type]
        for lo, hi in zip(chain, chain[1:])
    )
    lo_n, hi_n = crossing_quadratic_roots(report.moments, report.degree)
    lo_inf, hi_inf = crossing_quadratic_roots(report.moments)
    in_roots = (
        lo_n - VERDICT_SLACK <= report.crossing_n.implied_bound <= hi_n + VERDICT_SLACK
        and lo_inf - VERDICT_SLACK
        <= report.crossing_inf.implied_bound
        <= hi_inf + VERDICT_SLACK
    )
    return ordered and in_roots


def _sandwiched(p: Pmf) -> bool:
    exact = poincare_exact(p).value
    c_value, upper = bobkov_gotze(p)
    if exact is None or upper is None:
        return False
    return c_value <= exact + VERDICT_SLACK and exact <= upper + VERDICT_SLACK


def _bobkov_gotze(rng: np.random.Generator) -> bool:
    ulc = pmf_bernoulli_sum(random_bernoulli_ps(rng))
    return _sandwiched(ulc) and _sandwiched(random_non_ulc_pmf(rng))


def _convolution(rng: np.random.Generator) -> bool:
    a, b = random_connected_pmf(rng), random_connected_pmf(rng)
    values = [poincare_exact(q).value for q in (a, b, convolve(a, b))]
    if any(v is None for v in values):
        return False
    ra, rb, rab = (float(v) for v in values)  # type: ignore[arg-type]
    return rab <= ra + rb + VERDICT_SLACK


def _certificate_soundness(rng: np.random.Generator) -> bool:
    p = random_connected_pmf(rng)
    exact = poincare_exact(p).value
    if exact is None:
        return False
    pairs = [
        (float(rng.uniform(0.0, p.N)), float(exact * rng.uniform(0.5, 3.0)))
        for _ in range(4)
    ]
    crossing = crossing_constant_inf(p)
    if crossing is not None:
        pairs.append((crossing.implied_bound, crossing.implied_bound))
    ok = True
    for x0, c in pairs:
        if not verify_tail_certificate(p, p, 1.0, x0, c):
            continue
        ok &= exact <= c + VERDICT_SLACK
        ok &= all(
            weighted_kernel_sum(p, x0, y) <= c * p.probs[y] + 2e-12 * max(1.0, x0)
            for y in range(len(p))
        )
    return bool(ok)


def _kernel_identities(rng: np.random.Generator) -> bool:
    x0 = float(rng.uniform(0.0, 50.0))
    k = math.floor(x0)
    g = rng.standard_normal(52)
    h = np.diff(g)
    g_star = g[k] + h[k] * (x0 - k)
    ones = np.ones(51)
    for x in range(51):
        if abs(kernel_apply(x0, x, ones) - (x - x0)) > 1e-12:
            return False
        if abs(kernel_apply(x0, x, h) - (g[x] - g_star)) > 1e-10:
            return False
    x = int(rng.integers(0, 51))
    naive = sum(klaasen_kernel(x, y, x0) * h[y] for y in range(51))
    return abs(naive - kernel_apply(x0, x, h)) <= 1e-10


def _oracle_equivalence(rng: np.random.Generator) -> bool:
    p = random_connected_pmf(rng, ORACLE_MAX_N)
    exact = poincare_exact(p).value
    if exact is None:
        return False
    oracle = rayleigh_ascent(p, rng)
    return abs(exact - oracle) <= ORACLE_RTOL * exact


def _charlier_identities(rng: np.random.Generator) -> bool:
    n = int(rng.integers(1, 16))
    lam = float(rng.choice(CHARLIER_LAMBDAS))
    if check_delta_identity(n, lam, int(4 * lam + 8 * n)) > 1e-6:
        return False
    a, b = (int(v) for v in rng.integers(0, 11, size=2))
    lam = float(rng.choice(CHARLIER_LAMBDAS))
    target = squared_norm(a, lam) if a == b else 0.0
    tol = 1e-6 * max(1.0, squared_norm(a, lam), squared_norm(b, lam))
    return abs(check_orthogonality(a, b, lam, 1e-14) - target) <= tol


PROPERTIES: Dict[str, Property] = {
    "ulc_sandwich": _ulc_sandwich,
    "bobkov_gotze": _bobkov_gotze,
    "convolution": _convolution,
    "certificate_soundness": _certificate_soundness,
    "kernel_identities": _kernel_identities,
    "oracle_equivalence": _oracle_equivalence,
    "charlier_identities": _charlier_identities,
}


# ----- Suite -----
@dataclass
class SuiteSummary:
    """Per-property `[passed, failed]` counts, in `PROPERTIES` order."""

    seed: int
    trials: int
    properties: Dict[str, List[int]] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(counts[0] for counts in self.properties.values())

    @property
    def failed(self) -> int:
        return sum(counts[1] for counts in self.properties.values())


def run_trial(seq: np.random.SeedSequence, index: int) -> Dict[str, bool]:
    """Run every property once on generators spawned from `seq`."""
    outcome: Dict[str, bool] = {}
    for name, prop in PROPERTIES.items():
        rng = np.random.default_rng(seq.spawn(1)[0])
        try:
            outcome[name] = bool(prop(rng))
        except PoincareError as err:
            _LOGGER.warning("Trial %s property %s raised %r", index, name, err)
            outcome[name] = False
    return outcome


def run_suite(
    seed: int,
    trials: int = DEFAULT_TRIALS,
    *,
    executor: Optional[Executor] = None,
) -> SuiteSummary:
    """Run `trials` seeded trials and tally the results.

    Trials may run on `executor`; outcomes are tallied in trial order.
    """
    if trials < 1:
        raise BadParameter("trials must be >= 1", payload=trials)
    if seed < 0:
        raise BadParameter("seed must be a non-negative integer", payload=seed)
    seqs = np.random.SeedSequence(seed).spawn(trials)
    if executor is None:
        outcomes = [run_trial(seq, i) for i, seq in enumerate(seqs)]
    else:
        outcomes = list(executor.map(run_trial, seqs, range(trials)))

    wanted = list(PROPERTIES)
    summary = SuiteSummary(seed=seed, trials=trials)
    for name in wanted:
        summary.properties[name] = [0, 0]
    for index, outcome in enumerate(outcomes):
        for name in wanted:
            ok = outcome[name]
            summary.properties[name][0 if ok else 1] += 1
            if not ok:
                summary.failures.append(f"trial {index}: {name}")
    _LOGGER.info(
        "Suite seed=%s trials=%s: %s passed, %s failed",
        seed,
        trials,
        summary.passed,
        summary.failed,
    )
    return summary


__all__ = [
    "DEFAULT_TRIALS",
    "PROPERTIES",
    "SuiteSummary",
    "random_bernoulli_ps",
    "random_connected_pmf",
    "random_non_ulc_pmf",
    "rayleigh_ascent",
    "run_trial",
    "run_suite",
]
