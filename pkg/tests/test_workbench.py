import pytest

from discrete_poincare import workbench as workbench_module
from discrete_poincare.bounds import full_report
from discrete_poincare.exceptions import BadParameter, ParseError, UnknownCase
from discrete_poincare.types import GapKind
from discrete_poincare.workbench import (
    EXIT_INCONSISTENT,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    TAIL_EPS_ENV,
    PoincareWorkbench,
)


def test_analyze_poisson():
    with PoincareWorkbench() as bench:
        res = bench.analyze("poisson:2")
    assert res["exit_code"] == EXIT_OK
    assert res["error"] is None
    assert res["flat"]["exact_value"] == pytest.approx(2.0, abs=1e-6)
    assert res["spec"] == "poisson:2"
    assert res["elapsed_ms"] >= 0.0


def test_analyze_binomial_crossing_bound():
    res = PoincareWorkbench().analyze("binomial:10:0.3")
    assert res["flat"]["crossing_n_bound"] == pytest.approx(3.0, abs=1e-8)


def test_analyze_point_mass_file(tmp_path):
    path = tmp_path / "pm.txt"
    path.write_text("# point mass\n3 1.0\n", encoding="utf-8")
    res = PoincareWorkbench().analyze(f"file:{path}")
    assert res["exit_code"] == EXIT_OK
    assert res["flat"]["exact_kind"] == GapKind.DEGENERATE.value


def test_analyze_convolution_carries_components():
    res = PoincareWorkbench().analyze("convolve:(poisson:1):(bernoulli_sum:0.2,0.4)")
    assert res["exit_code"] == EXIT_OK
    assert res["flat"]["convolution_note"] == pytest.approx(1.6, abs=1e-6)


def test_analyze_mixture_with_gap(tmp_path):
    left = tmp_path / "left.txt"
    left.write_text("0 0.5\n1 0.5\n", encoding="utf-8")
    right = tmp_path / "right.txt"
    right.write_text("3 0.5\n4 0.5\n", encoding="utf-8")
    res = PoincareWorkbench().analyze(f"mixture:0.5:(file:{left}):(file:{right})")
    assert res["exit_code"] == EXIT_OK
    assert res["flat"]["exact_kind"] == GapKind.INFINITE.value
    assert "bg_upper" in res["report"].inapplicable


def test_analyze_input_errors():
    bench = PoincareWorkbench()
    with pytest.raises(ParseError):
        bench.analyze("gamma:1")
    with pytest.raises(BadParameter):
        bench.analyze("binomial:10:1.5")
    res = bench.analyze("poisson:-1", raise_on_error=False)
    assert res["exit_code"] == EXIT_INPUT_ERROR
    assert res["report"] is None
    assert res["flat"] is None
    assert "lambda" in res["error"]


def test_tail_eps_precedence(monkeypatch):
    monkeypatch.setenv(TAIL_EPS_ENV, "1e-4")
    from_env = PoincareWorkbench()
    assert from_env.tail_eps == 1e-4
    assert PoincareWorkbench(tail_eps=1e-8).tail_eps == 1e-8
    coarse = from_env.build_pmf("poisson:2")
    fine = from_env.build_pmf("poisson:2:1e-12")
    assert coarse.N < fine.N


def test_invalid_tail_eps(monkeypatch):
    monkeypatch.setenv(TAIL_EPS_ENV, "abc")
    with pytest.raises(ParseError):
        PoincareWorkbench()
    with pytest.raises(BadParameter):
        PoincareWorkbench(tail_eps=2.0)


def test_inconsistency_callback_and_exit_code(monkeypatch):
    def broken_report(p, **kwargs):
        report = full_report(p, **kwargs)
        report.verdicts["exact_le_thm_inf"] = False
        return report

    monkeypatch.setattr(workbench_module, "full_report", broken_report)
    seen = []
    bench = PoincareWorkbench(on_inconsistency=seen.append)
    res = bench.analyze("binomial:4:0.5")
    assert res["exit_code"] == EXIT_INCONSISTENT
    assert seen == [["exact_le_thm_inf"]]


def test_callback_errors_are_swallowed(monkeypatch):
    def broken_report(p, **kwargs):
        report = full_report(p, **kwargs)
        report.verdicts["bg_C_le_exact"] = False
        return report

    def explode(_failed):
        raise RuntimeError("boom")

    monkeypatch.setattr(workbench_module, "full_report", broken_report)
    res = PoincareWorkbench(on_inconsistency=explode).analyze("binomial:3:0.5")
    assert res["exit_code"] == EXIT_INCONSISTENT


def test_reproduce_and_unknown_case():
    bench = PoincareWorkbench()
    res = bench.reproduce("counterexample")
    assert res["exit_code"] == EXIT_OK
    assert all(c.ok for c in res["claims"])
    with pytest.raises(UnknownCase):
        bench.reproduce("nope")
    res = bench.reproduce("nope", raise_on_error=False)
    assert res["exit_code"] == EXIT_INPUT_ERROR
    assert res["claims"] == []


def test_verify_counts_and_bad_trials():
    bench = PoincareWorkbench()
    res = bench.verify(seed=1, trials=2)
    assert res["exit_code"] == EXIT_OK
    assert res["failed"] == 0
    assert res["passed"] == 2 * len(res["properties"])
    res = bench.verify(seed=1, trials=0, raise_on_error=False)
    assert res["exit_code"] == EXIT_INPUT_ERROR


def test_max_workers_gives_same_report():
    inline = PoincareWorkbench().analyze("binomial:15:0.4")["flat"]
    with PoincareWorkbench(max_workers=3) as bench:
        pooled = bench.analyze("binomial:15:0.4")["flat"]
        bench.set_max_workers(1)
        single = bench.analyze("binomial:15:0.4")["flat"]
    assert pooled == inline
    assert single == inline
