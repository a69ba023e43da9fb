"""Shared JSON encoding for series, frames and invariant tables.

Series serialize as a list of ``{"e": [ints], "c": "p/q"}`` records
sorted lexicographically by exponent; rationals are lowest-terms
strings.  The CLI and every module use this one format, so re-parsing a
document reproduces the in-memory value exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .fps import Frame, TruncatedSeries


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def parse_rational(text) -> Fraction:
    """Parse "p" or "p/q" with q > 0; anything else is an input error."""
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise InputError(f"rational literal must be a string, got {text!r}")
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed rational literal {text!r}: {exc}") from None
    return value


def series_to_records(series: TruncatedSeries) -> list[dict]:
    return [{"e": list(e), "c": format_rational(c)} for e, c in series.items()]


def series_from_records(frame: Frame, order: int, records) -> TruncatedSeries:
    terms = {}
    for rec in records:
        try:
            exps = tuple(int(x) for x in rec["e"])
            coeff = parse_rational(rec["c"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed series record {rec!r}: {exc}") from None
        if exps in terms:
            raise InputError(f"duplicate exponent {exps} in series records")
        terms[exps] = coeff
    return TruncatedSeries(frame, order, terms)


def frame_to_json(frame: Frame) -> dict:
    return {
        "names": list(frame.names),
        "grading": list(frame.grading),
        "boundary": list(frame.boundary),
    }


def frame_from_json(doc) -> Frame:
    try:
        return Frame(
            names=tuple(str(n) for n in doc["names"]),
            grading=tuple(int(g) for g in doc.get("grading", [])),
            boundary=tuple(int(b) for b in doc.get("boundary", [])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed frame document: {exc}") from None


def series_to_json(series: TruncatedSeries) -> dict:
    return {
        "frame": frame_to_json(series.frame),
        "order": series.order,
        "terms": series_to_records(series),
    }


def series_from_json(doc) -> TruncatedSeries:
    try:
        frame = frame_from_json(doc["frame"])
        order = int(doc["order"])
        records = doc["terms"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed series document: {exc}") from None
    return series_from_records(frame, order, records)
