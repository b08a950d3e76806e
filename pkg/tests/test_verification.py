from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from discrete_poincare.dist_core import (
    classify_ulc,
    pmf_binomial,
    pmf_point_mass,
    pmf_uniform,
)
from discrete_poincare.exceptions import BadParameter, DegenerateSupport
from discrete_poincare.spectral_gap import poincare_exact
from discrete_poincare.verification import (
    PROPERTIES,
    random_bernoulli_ps,
    random_connected_pmf,
    random_non_ulc_pmf,
    rayleigh_ascent,
    run_suite,
)


def test_generators_respect_ranges():
    rng = np.random.default_rng(11)
    for _ in range(20):
        ps = random_bernoulli_ps(rng)
        assert 1 <= len(ps) <= 30
        assert np.all((ps >= 0.05) & (ps <= 0.95))
        p = random_connected_pmf(rng)
        assert 1 <= p.N <= 10
        assert np.all(p.probs > 0.0)


def test_non_ulc_generator_never_yields_ulc_pmfs():
    rng = np.random.default_rng(3)
    for _ in range(100):
        p = random_non_ulc_pmf(rng)
        assert 2 <= p.N <= 10
        assert np.all(p.probs > 0.0)
        assert not classify_ulc(p).is_ulc


@pytest.mark.parametrize(
    "pmf", [pmf_uniform(0, 2), pmf_binomial(6, 0.3), pmf_binomial(1, 0.5)]
)
def test_rayleigh_ascent_matches_eigen_value(pmf):
    rng = np.random.default_rng(5)
    exact = poincare_exact(pmf).value
    assert rayleigh_ascent(pmf, rng) == pytest.approx(exact, rel=1e-5)


def test_rayleigh_ascent_rejects_point_mass():
    with pytest.raises(DegenerateSupport):
        rayleigh_ascent(pmf_point_mass(1), np.random.default_rng(0))


def test_single_trial_runs_each_property_once():
    summary = run_suite(0, 1)
    assert list(summary.properties) == list(PROPERTIES)
    for passed, failed in summary.properties.values():
        assert passed + failed == 1
    assert summary.failed == 0


def test_suite_has_no_failures_and_is_deterministic():
    first = run_suite(0, 5)
    second = run_suite(0, 5)
    assert first.failures == []
    assert first.passed == 5 * len(PROPERTIES)
    assert first.properties == second.properties


def test_suite_on_pool_matches_inline():
    inline = run_suite(3, 4)
    with ThreadPoolExecutor(max_workers=4) as pool:
        pooled = run_suite(3, 4, executor=pool)
    assert pooled.properties == inline.properties
    assert pooled.failures == inline.failures


def test_suite_needs_a_trial():
    with pytest.raises(BadParameter):
        run_suite(0, 0)


def test_suite_rejects_negative_seed():
    with pytest.raises(BadParameter):
        run_suite(-1, 1)
