"""Monic Poisson-Charlier polynomials and checks of their difference and
orthogonality identities."""

from __future__ import annotations

import logging
import math
from typing import Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import stats

from .dist_core import DEFAULT_TAIL_EPS, pmf_poisson, poisson_truncation_point
from .exceptions import BadParameter
from .spectral_gap import rayleigh
from .types import CharlierPoly

_LOGGER = logging.getLogger(__name__)

MAX_DEGREE = 30
MAX_LAMBDA = 30.0
# Safety cap on the adaptive truncation of orthogonality sums.
_MAX_SUM_POINTS = 1 << 16

Points = Union[Sequence[int], np.ndarray]


def _validate(n: int, lam: float) -> None:
    if not 0 <= n <= MAX_DEGREE:
        raise BadParameter(f"degree must lie in 0..{MAX_DEGREE}", payload=n)
    if not 0.0 < lam <= MAX_LAMBDA:
        raise BadParameter(f"lambda must lie in (0, {MAX_LAMBDA}]", payload=lam)


def charlier(n: int, lam: float) -> CharlierPoly:
    """Coefficients of c_n for parameter `lam`, lowest degree first.

    Built from c_0 = 1, c_1 = x - lam and
    c_{k+1} = (x - k - lam) c_k - k lam c_{k-1}.

    Raises:
        BadParameter: Unless 0 <= n <= 30 and 0 < lam <= 30.
    """
    _validate(n, lam)
    prev = np.array([1.0])
    if n == 0:
        return CharlierPoly(degree=0, lam=lam, coeffs=prev)
    cur = np.array([-lam, 1.0])
    for k in range(1, n):
        nxt = P.polysub(P.polymul([-k - lam, 1.0], cur), k * lam * prev)
        prev, cur = cur, nxt
    return CharlierPoly(degree=n, lam=lam, coeffs=cur)


def charlier_eval(poly: CharlierPoly, x: int) -> float:
    """Horner evaluation of the coefficient form."""
    return float(P.polyval(float(x), poly.coeffs))


def charlier_values(n: int, lam: float, xs: Points) -> np.ndarray:
    """Values of c_0..c_n at `xs` through the recurrence, shape (n + 1, len(xs)).

    Pointwise recurrence avoids the cancellation of the coefficient form at
    large degree.
    """
    _validate(n, lam)
    x = np.asarray(xs, dtype=np.float64)
    out = np.empty((n + 1, x.size))
    out[0] = 1.0
    if n >= 1:
        out[1] = x - lam
    for k in range(1, n):
        out[k + 1] = (x - k - lam) * out[k] - k * lam * out[k - 1]
    return out


def check_delta_identity(n: int, lam: float, xmax: int) -> float:
    """Largest relative residual of c_n(x+1) - c_n(x) = n c_{n-1}(x) on 0..xmax."""
    if n < 1:
        raise BadParameter("the difference identity needs n >= 1", payload=n)
    if xmax < 0:
        raise BadParameter("xmax must be >= 0", payload=xmax)
    vals = charlier_values(n, lam, np.arange(xmax + 2))
    c_n, c_prev = vals[n], vals[n - 1]
    residual = np.abs(np.diff(c_n) - n * c_prev[:-1]) / (1.0 + np.abs(c_n[:-1]))
    return float(residual.max())


def squared_norm(n: int, lam: float) -> float:
    """n! lam^n, the Poisson-weighted squared norm of c_n."""
    return float(math.factorial(n) * lam**n)


def check_orthogonality(
    n: int, m: int, lam: float, tail_eps: float = DEFAULT_TAIL_EPS
) -> float:
    """Sum over x of Pi_lam(x) c_n(x) c_m(x).

    The sum starts from the truncation point of the Poisson pmf at `tail_eps`
    and is extended until the weighted terms fall below
    tail_eps * max(1, n! lam^n, m! lam^m) and are decaying, since polynomial
    growth pushes mass of the integrand beyond the pmf's own truncation.
    """
    _validate(max(n, m), lam)
    scale = max(1.0, squared_norm(n, lam), squared_norm(m, lam))
    top = max(n, m)
    # past the largest zero of c_top the integrand no longer changes sign
    zeros_end = lam + top + 2.0 * math.sqrt(top * lam) + 1.0
    upper = max(poisson_truncation_point(lam, tail_eps), int(math.ceil(zeros_end)))
    while True:
        xs = np.arange(upper + 1)
        vals = charlier_values(top, lam, xs)
        terms = stats.poisson.pmf(xs, lam) * vals[n] * vals[m]
        last, before = abs(float(terms[-1])), abs(float(terms[-2]))
        if (last <= tail_eps * scale and last <= 0.5 * before) or (
            upper >= _MAX_SUM_POINTS
        ):
            break
        upper *= 2
    _LOGGER.debug("Orthogonality sum n=%s m=%s lam=%s over 0..%s", n, m, lam, upper)
    return float(math.fsum(terms))


def charlier_rayleigh(
    n: int, lam: float, tail_eps: float = DEFAULT_TAIL_EPS
) -> float:
    """Poincaré quotient of c_n under a truncated Poisson(lam); close to lam / n."""
    if n < 1:
        raise BadParameter("c_0 is constant; use n >= 1", payload=n)
    p = pmf_poisson(lam, tail_eps)
    g = charlier_values(n, lam, np.arange(len(p) + 1))[n]
    return rayleigh(p, g)


__all__ = [
    "MAX_DEGREE",
    "MAX_LAMBDA",
    "charlier",
    "charlier_eval",
    "charlier_values",
    "check_delta_identity",
    "squared_norm",
    "check_orthogonality",
    "charlier_rayleigh",
]
