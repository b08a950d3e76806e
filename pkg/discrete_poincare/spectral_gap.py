"""Exact discrete Poincaré constants of finitely supported pmfs.

With d(x) = sqrt(P(x)) * (Delta g)(x) the variance of g(X) becomes
d^T (D^-1/2 K D^-1/2) d and the Dirichlet form becomes |d|^2, where
K(u, v) = F(min(u, v)) (1 - F(max(u, v))) is the covariance of the threshold
indicators 1{X > u}. The Poincaré constant is therefore the top eigenvalue of
the conjugated kernel, computed here with LAPACK through scipy.
"""

from __future__ import annotations

import logging
from typing import Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from .dist_core import cdf, interior_gap, moments, survival
from .exceptions import (
    BadParameter,
    DegenerateSupport,
    LengthMismatch,
    NoConvergence,
    ZeroDirichlet,
)
from .types import ExactGap, GapKind, KernelMatrix, Pmf

_LOGGER = logging.getLogger(__name__)

SYMMETRY_RTOL = 1e-12
RESIDUAL_RTOL = 1e-10
WITNESS_RTOL = 1e-6
EIGVEC_FLOOR = 1e-10

FunctionValues = Union[Sequence[float], np.ndarray]


def _as_function(p: Pmf, g: FunctionValues) -> np.ndarray:
    arr = np.asarray(g, dtype=np.float64)
    if arr.shape != (len(p) + 1,):
        raise LengthMismatch(
            f"g must have N+2={len(p) + 1} values, got {arr.shape}", payload=arr.shape
        )
    return arr


def dirichlet_form(p: Pmf, g: FunctionValues) -> float:
    """Sum over x = 0..N of P(x) (g(x+1) - g(x))^2."""
    arr = _as_function(p, g)
    return float(np.dot(p.probs, np.diff(arr) ** 2))


def centered_second_moment(p: Pmf, g: FunctionValues) -> float:
    """Variance of g(X): g is centered first, which puts it in H(X)."""
    arr = _as_function(p, g)[:-1]
    mean = float(np.dot(p.probs, arr))
    return float(np.dot(p.probs, (arr - mean) ** 2))


def rayleigh(p: Pmf, g: FunctionValues) -> float:
    """Poincaré quotient Var g(X) / E (Delta g)(X)^2; a lower bound on R_X.

    Raises:
        ZeroDirichlet: If the Dirichlet form vanishes. The exception's
            `centered` attribute holds the numerator.
    """
    den = dirichlet_form(p, g)
    num = centered_second_moment(p, g)
    if den <= 0.0:
        raise ZeroDirichlet("Dirichlet form of g is zero", centered=num)
    return num / den


def kernel_matrix(p: Pmf) -> KernelMatrix:
    """Threshold-indicator covariance kernel on u, v in {0, ..., N-1}.

    Raises:
        DegenerateSupport: For single-point pmfs.
    """
    if p.is_point_mass:
        raise DegenerateSupport("kernel needs at least two support points")
    f = cdf(p)[:-1]
    s = survival(p)[:-1]
    idx = np.arange(p.N)
    lo = np.minimum.outer(idx, idx)
    hi = np.maximum.outer(idx, idx)
    entries = f[lo] * s[hi]
    entries.setflags(write=False)
    return KernelMatrix(entries=entries, index=idx)


def symmetric_eigen_max(m: np.ndarray) -> Tuple[float, np.ndarray]:
    """Largest eigenpair of a symmetric matrix.

    Uses LAPACK's relatively robust representations driver (`?syevr`) for the
    top index only. Sign is fixed so the largest-magnitude component is
    positive, which makes the output deterministic.

    Raises:
        BadParameter: If the matrix is not square and symmetric.
        NoConvergence: If LAPACK fails or the residual contract
            |Mv - lv| <= 1e-10 |M| |v| does not hold.
    """
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise BadParameter("matrix must be square and non-empty", payload=arr.shape)
    scale = float(np.linalg.norm(arr))
    if np.linalg.norm(arr - arr.T) > SYMMETRY_RTOL * max(scale, 1.0):
        raise BadParameter("matrix is not symmetric", payload=arr)
    sym = 0.5 * (arr + arr.T)
    k = sym.shape[0]
    try:
        values, vectors = scipy.linalg.eigh(sym, subset_by_index=[k - 1, k - 1])
    except np.linalg.LinAlgError as err:
        _LOGGER.error("Eigensolver failed on %sx%s matrix: %s", k, k, err)
        raise NoConvergence(f"eigensolver failed: {err}", payload=k) from err

    value = float(values[0])
    vector = vectors[:, 0]
    pivot = int(np.argmax(np.abs(vector)))
    if vector[pivot] < 0:
        vector = -vector
    residual = float(np.linalg.norm(sym @ vector - value * vector))
    if residual > RESIDUAL_RTOL * scale * float(np.linalg.norm(vector)):
        _LOGGER.error(
            "Eigen residual %.3e exceeds contract (|M|=%.3e)", residual, scale
        )
        raise NoConvergence(f"eigen residual {residual:.3e} too large", payload=k)
    return value, vector


def step_witness(p: Pmf, gap_location: int) -> np.ndarray:
    """Centered indicator of the states above a zero-mass gap state."""
    g = (np.arange(len(p) + 1) > gap_location).astype(np.float64)
    return g - float(np.dot(p.probs, g[:-1]))


def _conjugated_kernel(p: Pmf, active: np.ndarray) -> np.ndarray:
    """D^-1/2 K D^-1/2 on the active indices, as a(min(u, v)) * b(max(u, v)).

    a = F / sqrt(P) and b = (1 - F) / sqrt(P); no outer product of 1 / sqrt(P)
    is formed, since it overflows on far tails.
    """
    root = np.sqrt(p.probs[active])
    a = cdf(p)[active] / root
    b = survival(p)[active] / root
    pos = np.arange(active.size)
    return a[np.minimum.outer(pos, pos)] * b[np.maximum.outer(pos, pos)]


def _witness_from_eigenvector(p: Pmf, active: np.ndarray, d: np.ndarray) -> np.ndarray:
    """g with (Delta g)(u) = d(u) / sqrt(P(u)), anchored at the mode, then centered."""
    d = np.where(np.abs(d) > EIGVEC_FLOOR * float(np.max(np.abs(d))), d, 0.0)
    delta = np.zeros(len(p))
    delta[active] = d / np.sqrt(p.probs[active])
    witness = np.concatenate(([0.0], np.cumsum(delta)))
    witness -= witness[int(np.argmax(p.probs))]
    witness -= float(np.dot(p.probs, witness[:-1]))
    return witness


def poincare_exact(p: Pmf) -> ExactGap:
    """Exact Poincaré constant R_X of a finitely supported pmf.

    Single-point pmfs are Degenerate (no admissible g). A zero mass strictly
    inside the support gives an Infinite constant with a step witness.
    Otherwise the value is the top eigenvalue of D^-1/2 K D^-1/2 over the
    states with positive mass, and the witness is rebuilt from its
    eigenvector.

    Eigenvector entries below EIGVEC_FLOOR of the largest one are rounding
    noise and are zeroed before the division by sqrt(P).

    Raises:
        NoConvergence: If the eigensolver or the witness postcondition fails.
    """
    if p.is_point_mass:
        return ExactGap(kind=GapKind.DEGENERATE)

    gap = interior_gap(p)
    if gap is not None:
        _LOGGER.debug("Support has a gap at x=%s; constant is infinite", gap)
        return ExactGap(
            kind=GapKind.INFINITE, witness=step_witness(p, gap), gap_location=gap
        )

    active = np.flatnonzero(p.probs[:-1] > 0.0)
    value, d = symmetric_eigen_max(_conjugated_kernel(p, active))
    witness = _witness_from_eigenvector(p, active, d)

    achieved = rayleigh(p, witness)
    if achieved < value * (1.0 - WITNESS_RTOL):
        _LOGGER.error(
            "Witness quotient %.12g falls short of eigenvalue %.12g", achieved, value
        )
        raise NoConvergence("witness does not attain the eigenvalue", payload=value)
    _LOGGER.debug("Exact Poincaré constant %.12g (N=%s)", value, p.N)
    return ExactGap(kind=GapKind.FINITE, value=value, witness=witness)


def variance_witness(p: Pmf) -> np.ndarray:
    """g(x) = x - E X, whose quotient is Var X."""
    return np.arange(len(p) + 1, dtype=np.float64) - moments(p).mean


def threshold_witness(p: Pmf, x: int) -> np.ndarray:
    """g(y) = 1{y <= x} - F(x), whose quotient is F(x)(1 - F(x)) / P(x)."""
    if not 0 <= x <= p.N:
        raise BadParameter(f"x={x} outside 0..{p.N}", payload=x)
    g = (np.arange(len(p) + 1) <= x).astype(np.float64)
    return g - float(cdf(p)[x])


def smoothed_step(p: Pmf, gap_location: int, eps: float) -> np.ndarray:
    """Step across a support gap plus a slope `eps` everywhere else.

    The Dirichlet form is eps^2 (the jump sits on a zero-mass state) while the
    variance stays near that of the step, so the quotient grows like 1/eps^2.
    """
    if not eps > 0.0:
        raise BadParameter("eps must be positive", payload=eps)
    slope = eps * np.arange(len(p) + 1, dtype=np.float64)
    return step_witness(p, gap_location) + slope


__all__ = [
    "dirichlet_form",
    "centered_second_moment",
    "rayleigh",
    "kernel_matrix",
    "symmetric_eigen_max",
    "step_witness",
    "poincare_exact",
    "variance_witness",
    "threshold_witness",
    "smoothed_step",
]
