import numpy as np
import pytest

from discrete_poincare.types import (
    BoundReport,
    CharlierPoly,
    ExactGap,
    GapKind,
    Moments,
    Pmf,
    UlcClass,
)


def test_pmf_is_read_only():
    p = Pmf(np.array([0.25, 0.75]))
    with pytest.raises(ValueError):
        p.probs[0] = 0.5
    assert p.N == 1
    assert len(p) == 2
    assert p.padded(4).tolist() == [0.25, 0.75, 0.0, 0.0]
    assert p.padded(1).tolist() == [0.25, 0.75]


def test_pmf_shape_checks():
    with pytest.raises(ValueError):
        Pmf(np.array([0.5, 0.5, 0.0]))
    with pytest.raises(ValueError):
        Pmf(np.array([]))


def test_pmf_support_helpers():
    p = Pmf(np.array([0.0, 0.5, 0.0, 0.5]))
    assert p.support.tolist() == [1, 3]
    assert p.support_min == 1
    assert not p.is_point_mass


def test_bound_report_flat_form():
    report = BoundReport(
        exact=ExactGap(kind=GapKind.FINITE, value=1.5),
        moments=Moments(mean=1.0, variance=0.5, second_moment=1.5),
        ulc=UlcClass(is_ulc_inf=True, min_ulc_degree=2, support_is_interval=True),
        lower_variance=0.5,
        bg_C=0.75,
        verdicts={"variance_le_exact": True, "exact_le_thm_inf": False},
    )
    flat = report.as_flat()
    assert flat["exact_kind"] == "Finite"
    assert flat["crossing_inf"] is None
    assert flat["verdict_variance_le_exact"] is True
    assert report.failed_verdicts == ["exact_le_thm_inf"]
    assert report.ulc.is_ulc


def test_charlier_poly_coeffs_frozen():
    poly = CharlierPoly(degree=1, lam=2.0, coeffs=[-2.0, 1.0])
    assert isinstance(poly.coeffs, np.ndarray)
    with pytest.raises(ValueError):
        poly.coeffs[0] = 0.0
