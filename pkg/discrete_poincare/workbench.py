"""High-level facade over the library: build pmfs from distribution specs,
analyse them, run the reproduction cases and the verification suite.

`PoincareWorkbench` is what the CLI drives. Results are plain dicts
conforming to the `TypedDict` contracts in `discrete_poincare.types`.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple, Union

from .bounds import full_report
from .dist_core import (
    DEFAULT_TAIL_EPS,
    convolve,
    mixture,
    pmf_bernoulli_sum,
    pmf_binomial,
    pmf_poisson,
    read_pmf,
)
from .exceptions import BadParameter, PoincareError
from .parsers import parse_dist_spec, require_float
from .reproduce import run_case
from .types import (
    AnalyzeResult,
    DistKind,
    DistSpec,
    Pmf,
    ReproduceResult,
    VerifyResult,
)
from .verification import DEFAULT_TRIALS, run_suite

_LOGGER = logging.getLogger(__name__)

TAIL_EPS_ENV = "POINCARE_TAIL_EPS"

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INCONSISTENT = 2


def tail_eps_from_env(default: float = DEFAULT_TAIL_EPS) -> float:
    """Read `POINCARE_TAIL_EPS`, falling back to `default` when unset."""
    raw = os.environ.get(TAIL_EPS_ENV)
    if raw is None or not raw.strip():
        return default
    value, _ = require_float(
        raw.strip(), name="tail_eps", context=TAIL_EPS_ENV, raise_on_error=True
    )
    return float(value)  # type: ignore[arg-type]


def _elapsed_ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000.0, 3)


class PoincareWorkbench:
    """Facade for analysing discrete Poincaré constants.

    Configure the default Poisson truncation with `tail_eps` (a `tail_eps`
    field inside a distribution spec still wins), parallelism with
    `set_max_workers`, and per-call behaviour with `raise_on_error`. The
    `on_inconsistency` callback receives the names of failed verdicts or
    claims whenever a command finishes with exit code 2.
    """

    def __init__(
        self,
        tail_eps: Optional[float] = None,
        max_workers: Optional[int] = None,
        on_inconsistency: Optional[Callable[[List[str]], None]] = None,
    ):
        self.tail_eps = tail_eps if tail_eps is not None else tail_eps_from_env()
        if not 0.0 < self.tail_eps < 1.0:
            raise BadParameter("tail_eps must lie in (0, 1)", payload=self.tail_eps)
        self.on_inconsistency = on_inconsistency
        self._executor: Optional[ThreadPoolExecutor] = None
        self.set_max_workers(max_workers)

    # ----- Internal helpers -----
    def _notify(self, failed: List[str]) -> None:
        if not failed or not self.on_inconsistency:
            return
        try:
            self.on_inconsistency(failed)
        except Exception as cb_err:  # pylint: disable=broad-except
            _LOGGER.debug("on_inconsistency callback failed: %s", cb_err)

    def _build(self, spec: DistSpec) -> Tuple[Pmf, Optional[List[Pmf]]]:
        kind, params = spec.kind, spec.params
        if kind is DistKind.POISSON:
            lam, eps = params
            return pmf_poisson(lam, eps if eps is not None else self.tail_eps), None
        if kind is DistKind.BINOMIAL:
            return pmf_binomial(*params), None
        if kind is DistKind.BERNOULLI_SUM:
            parts = [pmf_bernoulli_sum([q]) for q in params]
            return pmf_bernoulli_sum(params), parts
        if kind is DistKind.FILE:
            return read_pmf(params[0]), None
        left, left_parts = self._build(spec.children[0])
        right, right_parts = self._build(spec.children[1])
        if kind is DistKind.MIXTURE:
            return mixture(params[0], left, right), None
        parts = (left_parts or [left]) + (right_parts or [right])
        return convolve(left, right), parts

    # ----- Public API -----
    def build_pmf(self, spec: Union[str, DistSpec]) -> Pmf:
        """Build the pmf a distribution spec describes.

        Raises:
            PoincareError: On parse errors or invalid parameters.
        """
        parsed = parse_dist_spec(spec) if isinstance(spec, str) else spec
        return self._build(parsed)[0]

    def analyze(
        self, spec: Union[str, DistSpec], *, raise_on_error: bool = True
    ) -> AnalyzeResult:
        """Build the pmf and run `full_report` on it.

        Args:
            spec: Distribution string such as ``binomial:10:0.3`` or a parsed spec.
            raise_on_error: If False, input errors are returned in `error` with
                exit code 1 instead of being raised.

        Returns:
            AnalyzeResult: Exit code 2 when any verdict fails.

        Raises:
            PoincareError: On invalid input when `raise_on_error=True`.
        """
        start = time.perf_counter()
        text = spec if isinstance(spec, str) else spec.text
        try:
            parsed = parse_dist_spec(spec) if isinstance(spec, str) else spec
            pmf, parts = self._build(parsed)
        except PoincareError as err:
            _LOGGER.error("Cannot build distribution %r: %s", text, err)
            if raise_on_error:
                raise
            return {
                "spec": text,
                "exit_code": EXIT_INPUT_ERROR,
                "elapsed_ms": _elapsed_ms(start),
                "error": str(err),
                "report": None,
                "flat": None,
            }

        _LOGGER.info("Analyzing %s (N=%s)", text, pmf.N)
        report = full_report(pmf, components=parts, executor=self._executor)
        failed = report.failed_verdicts
        self._notify(failed)
        return {
            "spec": text,
            "exit_code": EXIT_INCONSISTENT if failed else EXIT_OK,
            "elapsed_ms": _elapsed_ms(start),
            "error": None,
            "report": report,
            "flat": report.as_flat(),
        }

    def reproduce(self, case: str, *, raise_on_error: bool = True) -> ReproduceResult:
        """Run a named reproduction case.

        Raises:
            UnknownCase: For unrecognised names when `raise_on_error=True`.
        """
        start = time.perf_counter()
        try:
            claims = run_case(case, tail_eps=self.tail_eps, executor=self._executor)
        except PoincareError as err:
            _LOGGER.error("Cannot reproduce %r: %s", case, err)
            if raise_on_error:
                raise
            return {
                "spec": case,
                "exit_code": EXIT_INPUT_ERROR,
                "elapsed_ms": _elapsed_ms(start),
                "error": str(err),
                "claims": [],
            }
        failed = [c.label for c in claims if not c.ok]
        self._notify(failed)
        return {
            "spec": case,
            "exit_code": EXIT_INCONSISTENT if failed else EXIT_OK,
            "elapsed_ms": _elapsed_ms(start),
            "error": None,
            "claims": claims,
        }

    def verify(
        self,
        seed: int = 0,
        trials: int = DEFAULT_TRIALS,
        *,
        raise_on_error: bool = True,
    ) -> VerifyResult:
        """Run the seeded property suite; property failures are counted, not raised."""
        start = time.perf_counter()
        label = f"seed={seed} trials={trials}"
        try:
            summary = run_suite(seed, trials, executor=self._executor)
        except PoincareError as err:
            _LOGGER.error("Cannot run suite %s: %s", label, err)
            if raise_on_error:
                raise
            return {
                "spec": label,
                "exit_code": EXIT_INPUT_ERROR,
                "elapsed_ms": _elapsed_ms(start),
                "error": str(err),
                "passed": 0,
                "failed": 0,
                "properties": {},
            }
        self._notify(summary.failures)
        return {
            "spec": label,
            "exit_code": EXIT_INCONSISTENT if summary.failed else EXIT_OK,
            "elapsed_ms": _elapsed_ms(start),
            "error": None,
            "passed": summary.passed,
            "failed": summary.failed,
            "properties": summary.properties,
        }

    # ----- Lifecycle & concurrency helpers -----
    def set_max_workers(self, max_workers: Optional[int]) -> None:
        """Use a thread pool of `max_workers` threads; pass 0/None to run inline.

        Outputs are identical either way.
        """
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None
        if max_workers and max_workers > 0:
            self._executor = ThreadPoolExecutor(
                max_workers=int(max_workers), thread_name_prefix="poincare"
            )

    def close(self) -> None:
        """Shut down the worker pool, if any."""
        self.set_max_workers(None)

    def __enter__(self) -> "PoincareWorkbench":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()


__all__ = [
    "TAIL_EPS_ENV",
    "EXIT_OK",
    "EXIT_INPUT_ERROR",
    "EXIT_INCONSISTENT",
    "tail_eps_from_env",
    "PoincareWorkbench",
]
