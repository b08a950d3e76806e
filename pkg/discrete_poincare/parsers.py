"""Parsing and validation helpers for pmf files and distribution specs."""

from __future__ import annotations

import logging
from typing import Any, Iterable, List, Optional, Tuple

from .exceptions import ParseError
from .types import DistKind, DistSpec

_LOGGER = logging.getLogger(__name__)

_KIND_ALIASES = {
    "poisson": DistKind.POISSON,
    "binomial": DistKind.BINOMIAL,
    "bernoulli_sum": DistKind.BERNOULLI_SUM,
    "bernoulli-sum": DistKind.BERNOULLI_SUM,
    "file": DistKind.FILE,
    "mixture": DistKind.MIXTURE,
    "convolve": DistKind.CONVOLVE,
}


def safe_int(value: Any) -> Optional[int]:
    try:
        return int(value)
    except (ValueError, TypeError):
        return None


def safe_float(value: Any) -> Optional[float]:
    try:
        return float(value)
    except (ValueError, TypeError):
        return None


def require_float(
    token: str,
    *,
    name: str,
    context: str,
    raise_on_error: bool,
) -> Tuple[Optional[float], Optional[str]]:
    value = safe_float(token)
    if value is not None:
        return value, None
    msg = f"Invalid {name} {token!r} in {context}"
    _LOGGER.error(msg)
    if raise_on_error:
        raise ParseError(msg, payload=token)
    return None, msg


def require_int(
    token: str,
    *,
    name: str,
    context: str,
    raise_on_error: bool,
) -> Tuple[Optional[int], Optional[str]]:
    value = safe_int(token)
    if value is not None:
        return value, None
    msg = f"Invalid {name} {token!r} in {context}"
    _LOGGER.error(msg)
    if raise_on_error:
        raise ParseError(msg, payload=token)
    return None, msg


def parse_pmf_text(
    text: str,
    *,
    source: str = "<text>",
    raise_on_error: bool = True,
) -> Tuple[Optional[List[float]], Optional[str]]:
    """Parse the "x p" line format into a dense weight vector.

    Blank lines and lines starting with '#' are skipped; x must be strictly
    increasing and states between listed x carry zero mass. Normalization is
    left to `dist_core.make_pmf`.
    """
    points: List[Tuple[int, float]] = []
    last_x = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        where = f"{source}:{lineno}"
        if len(parts) != 2:
            msg = f"Expected 'x p' at {where}, got {line!r}"
            _LOGGER.error(msg)
            if raise_on_error:
                raise ParseError(msg, payload=line)
            return None, msg
        x, err = require_int(
            parts[0], name="support index", context=where, raise_on_error=raise_on_error
        )
        if x is None:
            return None, err
        p, err = require_float(
            parts[1], name="mass", context=where, raise_on_error=raise_on_error
        )
        if p is None:
            return None, err
        if x < 0 or x <= last_x:
            msg = f"Support index {x} at {where} must be >= 0 and strictly increasing"
            _LOGGER.error(msg)
            if raise_on_error:
                raise ParseError(msg, payload=line)
            return None, msg
        points.append((x, p))
        last_x = x

    if not points:
        msg = f"No support points found in {source}"
        _LOGGER.error(msg)
        if raise_on_error:
            raise ParseError(msg)
        return None, msg

    entries = [0.0] * (last_x + 1)
    for x, p in points:
        entries[x] = p
    return entries, None


def format_pmf_text(probs: Iterable[float], *, header: Optional[str] = None) -> str:
    """Render a weight vector in the "x p" format, skipping zero masses."""
    lines = [f"# {header}"] if header else []
    for x, p in enumerate(probs):
        if p > 0.0:
            lines.append(f"{x} {float(p)!r}")
    return "\n".join(lines) + "\n"


def split_top_level(text: str, sep: str = ":") -> List[str]:
    """Split on `sep` outside parentheses."""
    parts: List[str] = []
    depth = 0
    current: List[str] = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"Unbalanced ')' in {text!r}", payload=text)
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
            continue
        current.append(ch)
    if depth != 0:
        raise ParseError(f"Unbalanced '(' in {text!r}", payload=text)
    parts.append("".join(current))
    return parts


def _strip_parens(token: str) -> str:
    token = token.strip()
    if token.startswith("(") and token.endswith(")"):
        return token[1:-1].strip()
    return token


def _expect_fields(kind: str, fields: List[str], low: int, high: int, text: str):
    if not low <= len(fields) <= high:
        expected = str(low) if low == high else f"{low}-{high}"
        raise ParseError(
            f"{kind} expects {expected} field(s), got {len(fields)} in {text!r}",
            payload=text,
        )


def parse_dist_spec(text: str) -> DistSpec:
    """Parse a colon-separated distribution string.

    Grammar::

        poisson:<lambda>[:<tail_eps>]
        binomial:<n>:<p>
        bernoulli_sum:<p1>,<p2>,...
        file:<path>
        mixture:<alpha>:(<spec>):(<spec>)
        convolve:(<spec>):(<spec>)

    Only the syntax is checked here; parameter ranges are enforced by the
    `dist_core` constructors when the spec is built.

    Raises:
        ParseError: If the string does not follow the grammar.
    """
    raw = text.strip()
    if not raw:
        raise ParseError("Empty distribution spec", payload=text)
    head, _, rest = raw.partition(":")
    kind = _KIND_ALIASES.get(head.strip().lower())
    if kind is None:
        raise ParseError(f"Unknown distribution kind {head!r}", payload=text)

    if kind is DistKind.FILE:
        if not rest:
            raise ParseError("file spec needs a path", payload=text)
        return DistSpec(kind, (rest,), text=raw)

    fields = split_top_level(rest) if rest else []
    if kind is DistKind.POISSON:
        _expect_fields("poisson", fields, 1, 2, raw)
        lam, _ = require_float(
            fields[0], name="lambda", context=raw, raise_on_error=True
        )
        eps = None
        if len(fields) == 2:
            eps, _ = require_float(
                fields[1], name="tail_eps", context=raw, raise_on_error=True
            )
        return DistSpec(kind, (lam, eps), text=raw)
    if kind is DistKind.BINOMIAL:
        _expect_fields("binomial", fields, 2, 2, raw)
        n, _ = require_int(fields[0], name="n", context=raw, raise_on_error=True)
        p, _ = require_float(fields[1], name="p", context=raw, raise_on_error=True)
        return DistSpec(kind, (n, p), text=raw)
    if kind is DistKind.BERNOULLI_SUM:
        _expect_fields("bernoulli_sum", fields, 1, 1, raw)
        ps = tuple(
            require_float(tok, name="p", context=raw, raise_on_error=True)[0]
            for tok in fields[0].split(",")
        )
        return DistSpec(kind, ps, text=raw)
    if kind is DistKind.MIXTURE:
        _expect_fields("mixture", fields, 3, 3, raw)
        alpha, _ = require_float(
            fields[0], name="alpha", context=raw, raise_on_error=True
        )
        children = (
            parse_dist_spec(_strip_parens(fields[1])),
            parse_dist_spec(_strip_parens(fields[2])),
        )
        return DistSpec(kind, (alpha,), children, text=raw)

    _expect_fields("convolve", fields, 2, 2, raw)
    children = (
        parse_dist_spec(_strip_parens(fields[0])),
        parse_dist_spec(_strip_parens(fields[1])),
    )
    return DistSpec(kind, (), children, text=raw)


__all__ = [
    "safe_int",
    "safe_float",
    "require_float",
    "require_int",
    "parse_pmf_text",
    "format_pmf_text",
    "split_top_level",
    "parse_dist_spec",
]
