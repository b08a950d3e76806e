import numpy as np
import pytest

from discrete_poincare.exceptions import ParseError
from discrete_poincare.parsers import (
    format_pmf_text,
    parse_dist_spec,
    parse_pmf_text,
    require_float,
    require_int,
    safe_float,
    safe_int,
    split_top_level,
)
from discrete_poincare.types import DistKind


def test_safe_converters():
    assert safe_int("7") == 7
    assert safe_int("x") is None
    assert safe_float("1e-3") == 1e-3
    assert safe_float(None) is None


def test_require_float_no_raise():
    value, err = require_float("abc", name="p", context="ctx", raise_on_error=False)
    assert value is None
    assert "Invalid p" in err


def test_require_int_raises():
    with pytest.raises(ParseError):
        require_int("1.5", name="n", context="ctx", raise_on_error=True)


def test_parse_pmf_text_skips_comments_and_fills_gaps():
    text = "# header\n\n0 0.5\n  # indented comment\n3 0.5\n"
    entries, err = parse_pmf_text(text)
    assert err is None
    assert entries == [0.5, 0.0, 0.0, 0.5]


def test_parse_pmf_text_rejects_unsorted_support():
    with pytest.raises(ParseError):
        parse_pmf_text("1 0.5\n0 0.5\n")


def test_parse_pmf_text_bad_line_no_raise():
    entries, err = parse_pmf_text("0 0.5 extra\n", raise_on_error=False)
    assert entries is None
    assert "Expected 'x p'" in err


def test_parse_pmf_text_empty():
    entries, err = parse_pmf_text("# nothing\n", raise_on_error=False)
    assert entries is None
    assert "No support points" in err


def test_format_pmf_text_skips_zero_mass():
    text = format_pmf_text([0.25, 0.0, 0.75], header="demo")
    assert text.splitlines() == ["# demo", "0 0.25", "2 0.75"]
    entries, _ = parse_pmf_text(text)
    assert entries == [0.25, 0.0, 0.75]


def test_format_pmf_text_writes_plain_floats_for_numpy_values():
    text = format_pmf_text(np.array([0.25, 0.0, 0.75]))
    assert text.splitlines() == ["0 0.25", "2 0.75"]


def test_split_top_level_respects_parentheses():
    assert split_top_level("0.5:(poisson:1):(binomial:2:0.5)") == [
        "0.5",
        "(poisson:1)",
        "(binomial:2:0.5)",
    ]
    with pytest.raises(ParseError):
        split_top_level("(poisson:1")
    with pytest.raises(ParseError):
        split_top_level("poisson:1)")


def test_parse_poisson_with_and_without_eps():
    spec = parse_dist_spec("poisson:5")
    assert spec.kind is DistKind.POISSON
    assert spec.params == (5.0, None)
    assert parse_dist_spec("poisson:5:1e-6").params == (5.0, 1e-6)


def test_parse_binomial_and_bernoulli_sum():
    assert parse_dist_spec("binomial:10:0.3").params == (10, 0.3)
    spec = parse_dist_spec("bernoulli-sum:0.1,0.2,0.3")
    assert spec.kind is DistKind.BERNOULLI_SUM
    assert spec.params == (0.1, 0.2, 0.3)


def test_parse_file_keeps_colons_in_path():
    spec = parse_dist_spec("file:C:/data/pm.txt")
    assert spec.kind is DistKind.FILE
    assert spec.params == ("C:/data/pm.txt",)


def test_parse_nested_mixture_and_convolve():
    spec = parse_dist_spec(
        "mixture:0.25:(poisson:1):(convolve:(poisson:1):(binomial:3:0.5))"
    )
    assert spec.kind is DistKind.MIXTURE
    assert spec.params == (0.25,)
    left, right = spec.children
    assert left.kind is DistKind.POISSON
    assert right.kind is DistKind.CONVOLVE
    assert [c.kind for c in right.children] == [DistKind.POISSON, DistKind.BINOMIAL]


@pytest.mark.parametrize(
    "text",
    ["", "gamma:1", "binomial:10", "poisson:x", "convolve:(poisson:1)", "file:"],
)
def test_parse_dist_spec_errors(text):
    with pytest.raises(ParseError):
        parse_dist_spec(text)
