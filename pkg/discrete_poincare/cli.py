"""Command-line front end.

Usage:
    discrete-poincare analyze --dist binomial:10:0.3 --format json
    discrete-poincare reproduce poisson
    discrete-poincare verify --seed 0 --trials 200

Exit codes: 0 success, 1 input error, 2 internal inconsistency (a failed
verdict, claim or property).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from typing import Any, Dict, List, NoReturn, Optional, Sequence, TextIO, Tuple

from dotenv import load_dotenv

from .exceptions import PoincareError
from .reproduce import CASES
from .types import AnalyzeResult, BoundReport, ReproduceResult, VerifyResult
from .verification import DEFAULT_TRIALS
from .workbench import EXIT_INPUT_ERROR, PoincareWorkbench

_LOGGER = logging.getLogger(__name__)

FORMATS = ("json", "csv", "text")

# (flat key, direction, label) for the text bound chain
_CHAIN: Tuple[Tuple[str, str, str], ...] = (
    ("lower_variance", "lower", "variance"),
    ("bg_C", "lower", "Bobkov-Gotze C(P)"),
    ("bg_upper", "upper", "Bobkov-Gotze C(P)/P(0)"),
    ("thm_inf", "upper", "ULC(inf) moment bound"),
    ("thm_n", "upper", "ULC(n) moment bound"),
    ("thm_n_refined", "upper", "refined ULC(n) moment bound"),
    ("crossing_inf", "upper", "crossing constant C"),
    ("crossing_n_bound", "upper", "degree-n crossing D n"),
    ("convolution_note", "upper", "sum of component constants"),
)


def _analyze_payload(result: AnalyzeResult) -> Dict[str, Any]:
    report = result["report"]
    payload: Dict[str, Any] = {"spec": result["spec"]}
    payload.update(result["flat"] or {})
    if report is not None:
        payload["degree"] = report.degree
        payload["inapplicable"] = list(report.inapplicable)
        payload["notes"] = list(report.notes)
    return payload


def format_analyze_json(result: AnalyzeResult) -> str:
    return json.dumps(_analyze_payload(result), indent=2)


def format_analyze_csv(result: AnalyzeResult) -> str:
    """One header row and one value row over the flat report keys."""
    flat: Dict[str, Any] = {"spec": result["spec"]}
    flat.update(result["flat"] or {})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(flat))
    writer.writerow(["" if v is None else v for v in flat.values()])
    return buf.getvalue()


def format_analyze_text(result: AnalyzeResult) -> str:
    """Bound chain from the lower bounds through the exact value to the uppers."""
    report: Optional[BoundReport] = result["report"]
    flat = result["flat"] or {}
    lines = [f"distribution: {result['spec']}"]
    if report is None:
        return "\n".join(lines) + "\n"
    rows: List[Tuple[float, str, str]] = []
    for key, direction, label in _CHAIN:
        value = flat.get(key)
        if value is None:
            continue
        if key.replace("_bound", "") in report.inapplicable:
            label += " (inapplicable)"
        rows.append((float(value), direction, f"{label} [{key}]"))
    lowers = sorted(r for r in rows if r[1] == "lower")
    uppers = sorted(r for r in rows if r[1] == "upper")
    for value, _, label in lowers:
        lines.append(f"  {value:>16.10g}  <= R_X   {label}")
    exact = report.exact
    shown = f"{exact.value:.10g}" if exact.value is not None else exact.kind.value
    lines.append(f"  {shown:>16}  =  R_X   exact ({exact.kind.value})")
    if exact.gap_location is not None:
        lines.append(f"  {'':>16}          support gap at x={exact.gap_location}")
    for value, _, label in uppers:
        lines.append(f"  {value:>16.10g}  >= R_X   {label}")
    for name, ok in report.verdicts.items():
        lines.append(f"  verdict {name}: {'pass' if ok else 'FAIL'}")
    for note in report.notes:
        lines.append(f"  note: {note}")
    return "\n".join(lines) + "\n"


def format_reproduce(result: ReproduceResult, fmt: str) -> str:
    rows = [
        {
            "label": c.label,
            "claimed": c.claimed,
            "computed": c.computed,
            "ok": c.ok,
            "source": c.source,
        }
        for c in result["claims"]
    ]
    if fmt == "json":
        return json.dumps({"case": result["spec"], "claims": rows}, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(
            buf,
            fieldnames=["label", "claimed", "computed", "ok", "source"],
            lineterminator="\n",
        )
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    width = max((len(r["label"]) for r in rows), default=0)
    lines = [f"case: {result['spec']}"]
    for r in rows:
        mark = "ok  " if r["ok"] else "FAIL"
        lines.append(
            f"  {mark} {r['label']:<{width}}  claimed {r['claimed']:<28} "
            f"computed {r['computed']:<16} ({r['source']})"
        )
    return "\n".join(lines) + "\n"


def format_verify(result: VerifyResult, fmt: str) -> str:
    if fmt == "json":
        payload = {
            "spec": result["spec"],
            "passed": result["passed"],
            "failed": result["failed"],
            "properties": result["properties"],
        }
        return json.dumps(payload, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["property", "passed", "failed"])
        for name, (passed, failed) in result["properties"].items():
            writer.writerow([name, passed, failed])
        return buf.getvalue()
    lines = [f"verify {result['spec']}"]
    for name, (passed, failed) in result["properties"].items():
        lines.append(f"  {name:<24} passed {passed:>5}  failed {failed:>5}")
    passed, failed = result["passed"], result["failed"]
    lines.append(f"  {'total':<24} passed {passed:>5}  failed {failed:>5}")
    return "\n".join(lines) + "\n"


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with the input-error exit code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="discrete-poincare",
        description="Exact discrete Poincaré constants and their bounds",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Distribution specs:
    poisson:<lambda>[:<tail_eps>]   binomial:<n>:<p>   bernoulli_sum:<p1>,<p2>,...
    file:<path>   mixture:<alpha>:(<spec>):(<spec>)   convolve:(<spec>):(<spec>)

The POINCARE_TAIL_EPS environment variable (or a .env file) sets the default
Poisson truncation.
        """,
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level for stderr diagnostics",
    )
    parser.add_argument(
        "--max-workers",
        type=int,
        default=0,
        help="Worker threads for independent computations (0 runs inline)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="Report every bound for one pmf")
    analyze.add_argument("--dist", required=True, help="Distribution spec")
    analyze.add_argument("--format", choices=FORMATS, default="text")

    reproduce = sub.add_parser("reproduce", help="Run a named reproduction case")
    reproduce.add_argument("case", help=f"One of: {', '.join(CASES)}")
    reproduce.add_argument("--format", choices=FORMATS, default="text")

    verify = sub.add_parser("verify", help="Run the seeded property suite")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    verify.add_argument("--format", choices=FORMATS, default="text")
    return parser


def _run(bench: PoincareWorkbench, args: argparse.Namespace) -> Tuple[str, int, float]:
    if args.command == "analyze":
        analyzed = bench.analyze(args.dist)
        formatter = {
            "json": format_analyze_json,
            "csv": format_analyze_csv,
            "text": format_analyze_text,
        }[args.format]
        return formatter(analyzed), analyzed["exit_code"], analyzed["elapsed_ms"]
    if args.command == "reproduce":
        reproduced = bench.reproduce(args.case)
        return (
            format_reproduce(reproduced, args.format),
            reproduced["exit_code"],
            reproduced["elapsed_ms"],
        )
    verified = bench.verify(args.seed, args.trials)
    return (
        format_verify(verified, args.format),
        verified["exit_code"],
        verified["elapsed_ms"],
    )


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    """Entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    stream = out if out is not None else sys.stdout
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    load_dotenv()

    try:
        with PoincareWorkbench(max_workers=args.max_workers) as bench:
            text, exit_code, elapsed = _run(bench, args)
    except PoincareError as err:
        _LOGGER.error("%s", err)
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    stream.write(text.rstrip("\n") + "\n")
    _LOGGER.info("%s finished in %.1f ms", args.command, elapsed)
    return exit_code


__all__ = [
    "build_parser",
    "main",
    "format_analyze_json",
    "format_analyze_csv",
    "format_analyze_text",
    "format_reproduce",
    "format_verify",
]
