"""discrete_poincare package

Exact discrete Poincaré constants of pmfs on the nonnegative integers, the
bounds and certificates that sandwich them, and the workbench/CLI around them.
"""

from .bounds import (
    bobkov_gotze,
    bound_thm_ulc_inf,
    bound_thm_ulc_n,
    bound_thm_ulc_n_refined,
    convolution_bound,
    crossing_constant_inf,
    crossing_constant_n,
    full_report,
    kernel_apply,
    klaasen_kernel,
    moment_feasible,
    variance_lower,
    verify_tail_certificate,
)
from .charlier import charlier, charlier_eval, check_delta_identity, check_orthogonality
from .dist_core import (
    classify_ulc,
    convolve,
    make_pmf,
    mixture,
    moments,
    pmf_bernoulli_sum,
    pmf_binomial,
    pmf_poisson,
    read_pmf,
    write_pmf,
)
from .exceptions import (
    BadDecomposition,
    BadParameter,
    DegenerateSupport,
    DegreeTooSmall,
    DividedByZeroMass,
    EmptySupport,
    LengthMismatch,
    NegativeDiscriminant,
    NegativeMass,
    NoConvergence,
    NotNormalized,
    ParseError,
    PoincareError,
    UnknownCase,
    ZeroDirichlet,
)
from .spectral_gap import dirichlet_form, kernel_matrix, poincare_exact, rayleigh
from .types import (
    BoundReport,
    Certificate,
    CertificateKind,
    CharlierPoly,
    ExactGap,
    GapKind,
    KernelMatrix,
    Moments,
    Pmf,
    UlcClass,
)
from .workbench import PoincareWorkbench

__all__ = [
    "PoincareWorkbench",
    "PoincareError",
    "NegativeMass",
    "NotNormalized",
    "EmptySupport",
    "BadParameter",
    "DividedByZeroMass",
    "DegreeTooSmall",
    "LengthMismatch",
    "ZeroDirichlet",
    "DegenerateSupport",
    "NoConvergence",
    "NegativeDiscriminant",
    "BadDecomposition",
    "ParseError",
    "UnknownCase",
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
    "make_pmf",
    "pmf_poisson",
    "pmf_binomial",
    "pmf_bernoulli_sum",
    "convolve",
    "mixture",
    "moments",
    "classify_ulc",
    "read_pmf",
    "write_pmf",
    "poincare_exact",
    "rayleigh",
    "dirichlet_form",
    "kernel_matrix",
    "bound_thm_ulc_inf",
    "bound_thm_ulc_n",
    "bound_thm_ulc_n_refined",
    "crossing_constant_inf",
    "crossing_constant_n",
    "klaasen_kernel",
    "kernel_apply",
    "verify_tail_certificate",
    "bobkov_gotze",
    "variance_lower",
    "convolution_bound",
    "moment_feasible",
    "full_report",
    "charlier",
    "charlier_eval",
    "check_delta_identity",
    "check_orthogonality",
]
