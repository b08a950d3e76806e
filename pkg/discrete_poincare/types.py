"""Data models and typed results for the discrete Poincaré toolkit."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, TypedDict

import numpy as np


def _frozen_array(values: Any) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function on {0, ..., N}.

    Build instances through `dist_core.make_pmf` or the named constructors; the
    dataclass itself only freezes the vector and checks its shape.
    """

    probs: np.ndarray

    def __post_init__(self) -> None:
        arr = _frozen_array(self.probs)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("probs must be a non-empty 1-D vector")
        if arr[-1] <= 0.0:
            raise ValueError("trailing zero masses must be trimmed")
        object.__setattr__(self, "probs", arr)

    @property
    def N(self) -> int:  # pylint: disable=invalid-name
        return int(self.probs.size - 1)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.probs > 0.0)

    @property
    def support_min(self) -> int:
        return int(self.support[0])

    @property
    def is_point_mass(self) -> bool:
        return self.support.size == 1

    def padded(self, length: int) -> np.ndarray:
        """Return probs zero-padded (never truncated) to `length` entries."""
        out = np.zeros(max(length, self.probs.size))
        out[: self.probs.size] = self.probs
        return out

    def __len__(self) -> int:
        return int(self.probs.size)


@dataclass(frozen=True)
class Moments:
    mean: float
    variance: float
    second_moment: float


@dataclass(frozen=True)
class UlcClass:
    """Ultra log-concavity classification of a pmf.

    `min_ulc_degree` is the smallest n for which ULC(n) holds, or None when no
    degree up to the search cap qualifies.
    """

    is_ulc_inf: bool
    min_ulc_degree: Optional[int]
    support_is_interval: bool

    @property
    def is_ulc(self) -> bool:
        return self.is_ulc_inf or self.min_ulc_degree is not None


class GapKind(str, enum.Enum):
    FINITE = "Finite"
    INFINITE = "Infinite"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True, eq=False)
class ExactGap:
    """Exact Poincaré constant of a pmf.

    `witness` is a function on {0, ..., N+1}: the maximizer for Finite results,
    a step across the support gap for Infinite ones.
    """

    kind: GapKind
    value: Optional[float] = None
    witness: Optional[np.ndarray] = None
    gap_location: Optional[int] = None

    @property
    def is_finite(self) -> bool:
        return self.kind is GapKind.FINITE


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Indicator covariance kernel K(u, v) = F(min(u, v)) (1 - F(max(u, v)))."""

    entries: np.ndarray
    index: np.ndarray

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])


class CertificateKind(str, enum.Enum):
    TAIL_CONDITION = "TailCondition"
    CROSSING_INF = "CrossingInf"
    CROSSING_DEGREE_N = "CrossingDegreeN"


@dataclass(frozen=True)
class Certificate:
    """A verified witness for one of the tail/crossing upper bounds.

    Only the `bounds` module constructs these, and only after the defining
    inequalities held on the pmf being certified.
    """

    kind: CertificateKind
    implied_bound: float
    x0: Optional[float] = None
    c: Optional[float] = None
    alpha: Optional[float] = None
    C: Optional[float] = None  # pylint: disable=invalid-name
    D: Optional[float] = None  # pylint: disable=invalid-name
    n: Optional[int] = None


@dataclass
class BoundReport:
    """Every bound and certificate for one pmf next to its exact constant.

    Fields left as None were not applicable or not computable; the reason is
    listed in `inapplicable` / `notes`. `verdicts` only holds comparisons whose
    hypotheses are met, so a False entry is a genuine inconsistency.
    """

    exact: ExactGap
    moments: Moments
    ulc: UlcClass
    lower_variance: float
    bg_C: float  # pylint: disable=invalid-name
    bg_upper: Optional[float] = None
    thm_inf: Optional[float] = None
    thm_n: Optional[float] = None
    thm_n_refined: Optional[float] = None
    degree: Optional[int] = None
    crossing_inf: Optional[Certificate] = None
    crossing_n: Optional[Certificate] = None
    convolution_note: Optional[float] = None
    verdicts: Dict[str, bool] = field(default_factory=dict)
    inapplicable: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def failed_verdicts(self) -> List[str]:
        return [name for name, ok in self.verdicts.items() if not ok]

    def as_flat(self) -> Dict[str, Any]:
        """Flat key-value form used by the json/csv writers."""
        flat: Dict[str, Any] = {
            "exact_kind": self.exact.kind.value,
            "exact_value": self.exact.value,
            "lower_variance": self.lower_variance,
            "bg_C": self.bg_C,
            "bg_upper": self.bg_upper,
            "thm_inf": self.thm_inf,
            "thm_n": self.thm_n,
            "thm_n_refined": self.thm_n_refined,
            "crossing_inf": (
                self.crossing_inf.implied_bound if self.crossing_inf else None
            ),
            "crossing_n_bound": (
                self.crossing_n.implied_bound if self.crossing_n else None
            ),
            "convolution_note": self.convolution_note,
        }
        for name, ok in self.verdicts.items():
            flat[f"verdict_{name}"] = ok
        return flat


@dataclass(frozen=True, eq=False)
class CharlierPoly:
    """Monic Poisson-Charlier polynomial; coeffs run from x^0 up to x^n."""

    degree: int
    lam: float
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _frozen_array(self.coeffs))


class DistKind(str, enum.Enum):
    POISSON = "poisson"
    BINOMIAL = "binomial"
    BERNOULLI_SUM = "bernoulli_sum"
    FILE = "file"
    MIXTURE = "mixture"
    CONVOLVE = "convolve"


@dataclass(frozen=True)
class DistSpec:
    """Parsed form of a distribution string such as ``binomial:10:0.3``."""

    kind: DistKind
    params: Tuple[Any, ...] = ()
    children: Tuple["DistSpec", ...] = ()
    text: str = ""


@dataclass(frozen=True)
class ClaimCheck:
    """One claimed value from a reproduction case next to the computed one."""

    label: str
    claimed: str
    computed: str
    ok: bool
    source: str = ""


class RunResult(TypedDict):
    """Base envelope returned by every workbench command.

    Fields:
    - spec: Echo of the input (distribution string, case name or seed/trials)
    - exit_code: 0 success, 1 input error, 2 internal inconsistency
    - elapsed_ms: Wall time of the command in milliseconds
    - error: Error message when not raising, else None
    """

    spec: str
    exit_code: int
    elapsed_ms: float
    error: Optional[str]


class AnalyzeResult(RunResult):
    """Result for `analyze`.

    Fields:
    - report: The `BoundReport`, or None on input error
    - flat: `report.as_flat()`, or None on input error
    """

    report: Optional[BoundReport]
    flat: Optional[Dict[str, Any]]


class ReproduceResult(RunResult):
    """Result for `reproduce`.

    Fields:
    - claims: Claimed-versus-computed rows of the case
    """

    claims: List[ClaimCheck]


class VerifyResult(RunResult):
    """Result for `verify`.

    Fields:
    - passed: Total passing property checks
    - failed: Total failing property checks
    - properties: Per-property `[passed, failed]` counts in a fixed order
    """

    passed: int
    failed: int
    properties: Dict[str, List[int]]


__all__ = [
    "Pmf",
    "Moments",
    "UlcClass",
    "GapKind",
    "ExactGap",
    "KernelMatrix",
    "CertificateKind",
    "Certificate",
    "BoundReport",
    "CharlierPoly",
    "DistKind",
    "DistSpec",
    "ClaimCheck",
    "RunResult",
    "AnalyzeResult",
    "ReproduceResult",
    "VerifyResult",
]
