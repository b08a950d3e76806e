import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from discrete_poincare.dist_core import (
    cdf,
    classify_ulc,
    convolve,
    interior_gap,
    make_pmf,
    min_ulc_degree,
    mixture,
    moments,
    pmf_bernoulli_sum,
    pmf_binomial,
    pmf_point_mass,
    pmf_poisson,
    pmf_uniform,
    poisson_truncation_point,
    read_pmf,
    score_ratio_inf,
    score_ratio_n,
    support_is_interval,
    ulc_n_holds,
    write_pmf,
)
from discrete_poincare.exceptions import (
    BadParameter,
    DegreeTooSmall,
    DividedByZeroMass,
    EmptySupport,
    NegativeMass,
    NotNormalized,
    ParseError,
)


def test_make_pmf_examples():
    assert make_pmf([0.5, 0.5]).probs.tolist() == [0.5, 0.5]
    point = make_pmf([1.0])
    assert point.N == 0
    assert point.is_point_mass
    assert make_pmf([0.25, 0.5, 0.25]).N == 2


def test_make_pmf_trims_trailing_zeros():
    p = make_pmf([0.5, 0.5, 0.0, 0.0])
    assert p.N == 1


@pytest.mark.parametrize(
    "entries, exc",
    [
        ([0.5, -0.1, 0.6], NegativeMass),
        ([0.0, 0.0], EmptySupport),
        ([], EmptySupport),
        ([0.5, 0.4], NotNormalized),
        ([float("nan"), 1.0], BadParameter),
    ],
)
def test_make_pmf_errors(entries, exc):
    with pytest.raises(exc):
        make_pmf(entries)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(min_value=0.01, max_value=10.0), min_size=1, max_size=40))
def test_make_pmf_normalizes(weights):
    arr = np.array(weights)
    p = make_pmf(arr / arr.sum())
    assert abs(float(p.probs.sum()) - 1.0) <= 1e-12


def test_poisson_small_lambda_large_eps_keeps_zero():
    p = pmf_poisson(1.0, 0.5)
    assert p.probs[0] > 0.0
    assert p.N >= 0


def test_poisson_truncation_tail_below_eps():
    for lam in (0.5, 2.0, 5.0, 20.0):
        n = poisson_truncation_point(lam, 1e-12)
        assert stats.poisson.sf(n, lam) <= 1e-12


def test_poisson_moments_and_score_ratio():
    m = moments(pmf_poisson(5.0, 1e-12))
    assert abs(m.mean - 5.0) <= 1e-8
    assert abs(m.variance - 5.0) <= 1e-8
    p = pmf_poisson(2.0, 1e-12)
    for x in range(1, p.N + 1):
        assert score_ratio_inf(p, x) == pytest.approx(2.0, rel=1e-9)


def test_poisson_rejects_bad_parameters():
    with pytest.raises(BadParameter):
        pmf_poisson(0.0)
    with pytest.raises(BadParameter):
        pmf_poisson(1.0, 1.5)


def test_binomial_examples():
    assert np.allclose(pmf_binomial(1, 0.3).probs, [0.7, 0.3])
    assert np.allclose(pmf_binomial(2, 0.5).probs, [0.25, 0.5, 0.25])
    m = moments(pmf_binomial(10, 0.3))
    assert m.mean == pytest.approx(3.0, abs=1e-12)
    assert m.variance == pytest.approx(2.1, abs=1e-12)
    with pytest.raises(BadParameter):
        pmf_binomial(0, 0.5)
    with pytest.raises(BadParameter):
        pmf_binomial(3, 1.0)


def test_bernoulli_sum_examples():
    assert np.allclose(pmf_bernoulli_sum([0.4]).probs, [0.6, 0.4])
    assert np.allclose(pmf_bernoulli_sum([0.5, 0.5]).probs, [0.25, 0.5, 0.25])
    m = moments(pmf_bernoulli_sum([0.1, 0.2, 0.3]))
    assert m.mean == pytest.approx(0.6, abs=1e-12)
    assert m.variance == pytest.approx(0.46, abs=1e-12)
    with pytest.raises(BadParameter):
        pmf_bernoulli_sum([])


def test_convolve_identity_and_poisson_additivity():
    a = pmf_binomial(4, 0.3)
    assert np.allclose(convolve(a, pmf_point_mass(0)).probs, a.probs)
    bern = pmf_bernoulli_sum([0.5])
    assert np.allclose(convolve(bern, bern).probs, [0.25, 0.5, 0.25])
    summed = convolve(pmf_poisson(1.0), pmf_poisson(2.0))
    direct = pmf_poisson(3.0)
    length = max(len(summed), len(direct))
    assert np.max(np.abs(summed.padded(length) - direct.padded(length))) <= 1e-9


def test_convolve_moment_additivity():
    rng = np.random.default_rng(7)
    for _ in range(10):
        wa = rng.uniform(0.0, 1.0, size=int(rng.integers(1, 51)))
        wb = rng.uniform(0.0, 1.0, size=int(rng.integers(1, 51)))
        a, b = make_pmf(wa / wa.sum()), make_pmf(wb / wb.sum())
        ma, mb, mab = moments(a), moments(b), moments(convolve(a, b))
        assert abs(mab.mean - ma.mean - mb.mean) <= 1e-10
        assert abs(mab.variance - ma.variance - mb.variance) <= 1e-10


def test_mixture_examples():
    a = pmf_binomial(3, 0.4)
    assert np.allclose(mixture(1.0, a, pmf_uniform(0, 5)).probs, a.probs)
    assert np.allclose(mixture(0.5, a, a).probs, a.probs)
    gap = mixture(0.5, pmf_uniform(0, 1), pmf_uniform(3, 4))
    assert np.allclose(gap.probs, [0.25, 0.25, 0.0, 0.25, 0.25])
    assert not support_is_interval(gap)
    assert interior_gap(gap) == 2
    with pytest.raises(BadParameter):
        mixture(0.0, a, a)


def test_point_mass_moments_and_shifted_support():
    p = pmf_point_mass(3)
    m = moments(p)
    assert m.mean == 3.0
    assert m.variance == 0.0
    assert p.support_min == 3
    assert support_is_interval(p)
    assert interior_gap(p) is None


def test_cdf_ends_at_one():
    f = cdf(pmf_binomial(7, 0.2))
    assert f[-1] == 1.0
    assert np.all(np.diff(f) >= 0.0)


def test_score_ratio_examples():
    n, p = 6, 0.35
    b = pmf_binomial(n, p)
    assert score_ratio_inf(b, 0) == 0.0
    for x in range(1, n + 1):
        expected = (n - x + 1) * p / (1.0 - p)
        assert score_ratio_inf(b, x) == pytest.approx(expected, rel=1e-9)
        assert score_ratio_n(b, n, x) == pytest.approx(p / (1.0 - p), rel=1e-9)
    bern = pmf_bernoulli_sum([0.2])
    assert score_ratio_n(bern, 1, 1) == pytest.approx(0.25)
    assert score_ratio_n(pmf_binomial(2, 0.5), 2, 1) == pytest.approx(1.0)


def test_score_ratio_errors():
    gap = mixture(0.5, pmf_uniform(0, 1), pmf_uniform(3, 4))
    with pytest.raises(DividedByZeroMass):
        score_ratio_inf(gap, 3)
    with pytest.raises(BadParameter):
        score_ratio_inf(gap, 9)
    with pytest.raises(DegreeTooSmall):
        score_ratio_n(pmf_binomial(5, 0.5), 3, 1)


def test_classify_ulc_examples():
    poisson = classify_ulc(pmf_poisson(3.0))
    assert poisson.is_ulc_inf
    assert poisson.min_ulc_degree is None

    binomial = classify_ulc(pmf_binomial(10, 0.3))
    assert binomial.is_ulc_inf
    assert binomial.min_ulc_degree == 10

    gap = classify_ulc(mixture(0.5, pmf_uniform(0, 1), pmf_uniform(3, 4)))
    assert not gap.support_is_interval
    assert not gap.is_ulc


def test_point_mass_degree_is_at_least_one():
    assert min_ulc_degree(pmf_point_mass(0)) == 1
    assert min_ulc_degree(pmf_point_mass(2)) == 2


def test_ulc_degree_monotone():
    p = pmf_bernoulli_sum([0.2, 0.6, 0.9])
    n = min_ulc_degree(p)
    assert n is not None
    assert ulc_n_holds(p, n + 1)
    assert ulc_n_holds(p, n + 5)


def test_convolution_of_ulc_degrees_adds():
    a = pmf_bernoulli_sum([0.3, 0.8])
    b = pmf_bernoulli_sum([0.1, 0.5, 0.7])
    na, nb = min_ulc_degree(a), min_ulc_degree(b)
    nab = min_ulc_degree(convolve(a, b))
    assert na is not None and nb is not None and nab is not None
    assert nab <= na + nb


def test_pmf_file_round_trip(tmp_path):
    path = tmp_path / "pm.txt"
    p = mixture(0.5, pmf_uniform(0, 1), pmf_uniform(3, 4))
    write_pmf(p, path, header="mixture")
    assert path.read_text(encoding="utf-8").splitlines()[1:] == [
        "0 0.25",
        "1 0.25",
        "3 0.25",
        "4 0.25",
    ]
    loaded = read_pmf(path)
    assert np.allclose(loaded.probs, p.probs)
    assert math.isclose(float(loaded.probs.sum()), 1.0)


def test_read_pmf_errors(tmp_path):
    with pytest.raises(ParseError):
        read_pmf(tmp_path / "missing.txt")
    bad = tmp_path / "bad.txt"
    bad.write_text("0 0.5\n0 0.5\n", encoding="utf-8")
    with pytest.raises(ParseError):
        read_pmf(bad)
    short = tmp_path / "short.txt"
    short.write_text("0 0.5\n1 0.4\n", encoding="utf-8")
    with pytest.raises(NotNormalized):
        read_pmf(short)


def test_read_pmf_rejects_invalid_utf8(tmp_path):
    path = tmp_path / "latin.txt"
    path.write_bytes(b"0 0.5\n1 0.5\xff\n")
    with pytest.raises(ParseError):
        read_pmf(path)
