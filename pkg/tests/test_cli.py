import csv
import io
import json

import pytest

from discrete_poincare import cli
from discrete_poincare.reproduce import CASES


def _run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


REPORT_KEYS = (
    "exact_kind",
    "exact_value",
    "lower_variance",
    "bg_C",
    "bg_upper",
    "thm_inf",
    "thm_n",
    "thm_n_refined",
    "crossing_inf",
    "crossing_n_bound",
)


def test_analyze_json_has_every_report_key():
    code, text = _run(["analyze", "--dist", "binomial:10:0.3", "--format", "json"])
    assert code == 0
    payload = json.loads(text)
    for key in REPORT_KEYS:
        assert key in payload
    assert payload["spec"] == "binomial:10:0.3"
    assert payload["degree"] == 10
    assert payload["crossing_n_bound"] == pytest.approx(3.0, abs=1e-8)
    assert any(key.startswith("verdict_") for key in payload)


def test_analyze_csv_has_header_and_value_row():
    code, text = _run(["analyze", "--dist", "poisson:2", "--format", "csv"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert len(rows) == 2
    header, values = rows
    assert len(header) == len(values)
    for key in REPORT_KEYS:
        assert key in header
    exact = float(values[header.index("exact_value")])
    assert exact == pytest.approx(2.0, abs=1e-6)


def test_analyze_text_prints_bound_chain():
    code, text = _run(["analyze", "--dist", "poisson:2"])
    assert code == 0
    assert "exact (Finite)" in text
    assert "<= R_X" in text
    assert ">= R_X" in text


def test_analyze_point_mass_file(tmp_path):
    path = tmp_path / "pm.txt"
    path.write_text("2 1.0\n", encoding="utf-8")
    code, text = _run(["analyze", "--dist", f"file:{path}", "--format", "json"])
    assert code == 0
    assert json.loads(text)["exact_kind"] == "Degenerate"


def test_analyze_is_deterministic():
    argv = ["analyze", "--dist", "bernoulli_sum:0.1,0.5,0.7", "--format", "json"]
    assert _run(argv) == _run(argv)
    pooled = _run(["--max-workers", "2"] + argv)
    assert pooled == _run(argv)


def test_input_errors_exit_one(capsys):
    code, text = _run(["analyze", "--dist", "gamma:3"])
    assert code == 1
    assert text == ""
    assert "error:" in capsys.readouterr().err
    assert _run(["reproduce", "nope"])[0] == 1
    assert _run(["verify", "--trials", "0"])[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--dist", "poisson:2", "--format", "xml"],
        ["verify", "--trials", "abc"],
        ["analyze"],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    with pytest.raises(SystemExit) as excinfo:
        _run(argv)
    assert excinfo.value.code == 1
    assert "error:" in capsys.readouterr().err


def test_negative_seed_is_an_input_error(capsys):
    code, text = _run(["verify", "--seed", "-1", "--trials", "1"])
    assert code == 1
    assert text == ""
    assert "seed" in capsys.readouterr().err


def test_undecodable_pmf_file_is_an_input_error(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_bytes(b"0 0.5\n1 0.5\xff\n")
    assert _run(["analyze", "--dist", f"file:{path}"])[0] == 1


def test_analyze_large_binomial_succeeds():
    code, text = _run(["analyze", "--dist", "binomial:2000:0.5", "--format", "json"])
    assert code == 0
    assert json.loads(text)["exact_kind"] == "Finite"


@pytest.mark.parametrize("case", sorted(CASES))
def test_reproduce_cases_exit_zero(case):
    code, text = _run(["reproduce", case])
    assert code == 0
    assert "FAIL" not in text


def test_reproduce_counterexample_shows_infinite():
    code, text = _run(["reproduce", "counterexample", "--format", "json"])
    assert code == 0
    claims = json.loads(text)["claims"]
    assert claims[0]["computed"] == "Infinite"


def test_verify_single_trial_csv():
    code, text = _run(["verify", "--seed", "0", "--trials", "1", "--format", "csv"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["property", "passed", "failed"]
    assert all(row[1:] == ["1", "0"] for row in rows[1:])


def test_verify_json_is_deterministic():
    argv = ["verify", "--seed", "7", "--trials", "2", "--format", "json"]
    first = _run(argv)
    assert first == _run(argv)
    assert json.loads(first[1])["failed"] == 0


def test_inconsistency_exit_code(monkeypatch):
    real = cli.PoincareWorkbench.analyze

    def broken(self, spec, **kwargs):
        res = real(self, spec, **kwargs)
        res["exit_code"] = 2
        return res

    monkeypatch.setattr(cli.PoincareWorkbench, "analyze", broken)
    assert _run(["analyze", "--dist", "poisson:1"])[0] == 2
