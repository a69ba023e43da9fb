"""Command-line front end: one JSON job document in, JSON out.

Machine-readable JSON goes to stdout (or human tables with
``--output pretty``); a short human summary always goes to stderr.
Identical input bytes produce identical output bytes.  Exit codes:
0 success, 2 validation failure, 3 mathematical-precondition failure,
4 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import invariants as inv
from . import lattice, mirror
from .errors import InputError, MathDomainError, ValidationError
from .serialize import (
    format_rational,
    parse_rational,
    series_to_json,
    series_to_records,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_MATH = 3
EXIT_PARSE = 4


class Job:
    """Parsed job document: toric data, optional brane, global options."""

    def __init__(self, toric, brane, truncation, corrected, normalization):
        self.toric = toric
        self.brane = brane
        self.truncation = truncation
        self.corrected = corrected
        self.normalization = normalization


def _require(doc, key, where):
    if key not in doc:
        raise InputError(f"missing field {key!r} in {where}")
    return doc[key]


def _int_matrix(raw, where):
    try:
        return tuple(tuple(int(x) for x in row) for row in raw)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad integer matrix in {where}: {exc}") from None


def parse_job(doc) -> Job:
    if not isinstance(doc, dict):
        raise InputError("job document must be a JSON object")
    toric_doc = _require(doc, "toric", "job document")
    rays = _int_matrix(_require(toric_doc, "rays", "toric"), "toric.rays")
    u = tuple(int(x) for x in _require(toric_doc, "u", "toric"))
    offsets = tuple(parse_rational(x) for x in toric_doc.get("lambda", []))
    max_cones = None
    if "max_cones" in toric_doc:
        max_cones = _int_matrix(toric_doc["max_cones"], "toric.max_cones")
    charge_rows = None
    if "charge_basis" in toric_doc:
        charge_rows = _int_matrix(toric_doc["charge_basis"], "toric.charge_basis")
    try:
        toric = lattice.ToricCYData(
            rays=rays, u=u, offsets=offsets, max_cones=max_cones, charge_rows=charge_rows
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad toric data: {exc}") from None

    brane = None
    if doc.get("brane") is not None:
        bdoc = doc["brane"]
        charges = _int_matrix(_require(bdoc, "charges", "brane"), "brane.charges")
        constants = tuple(parse_rational(x) for x in _require(bdoc, "constants", "brane"))
        phases = tuple(parse_rational(x) for x in bdoc.get("phases", ["0"] * len(charges)))
        av_indices = None
        if "av_indices" in bdoc:
            av_indices = tuple(int(x) for x in bdoc["av_indices"])
            if len(av_indices) != 3:
                raise InputError("brane.av_indices must have 3 entries")
        m0 = tuple(parse_rational(x) for x in bdoc["m0"]) if "m0" in bdoc else None
        frame_generators = None
        if "frame" in bdoc:
            frame_generators = _int_matrix(bdoc["frame"], "brane.frame")
        boundary = None
        if "boundary_grading" in bdoc:
            boundary = tuple(int(x) for x in bdoc["boundary_grading"])
        try:
            brane = lattice.BraneSpec(
                charges=charges,
                constants=constants,
                phases=phases,
                av_indices=av_indices,
                m0=m0,
                frame_generators=frame_generators,
                boundary_grading=boundary,
            )
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad brane data: {exc}") from None

    truncation = int(doc.get("truncation", 8))
    if truncation < 1:
        raise InputError("truncation must be >= 1")
    corrected = bool(doc.get("corrected", True))
    normalization = None
    if doc.get("normalization") is not None:
        normalization = tuple(int(x) for x in doc["normalization"])
        if len(normalization) != 2 or any(x not in (1, -1) for x in normalization):
            raise InputError("normalization must be a pair of +-1")
    return Job(toric, brane, truncation, corrected, normalization)


def _need_brane(job) -> lattice.BraneSpec:
    if job.brane is None:
        raise InputError("this command needs a brane in the job document")
    return job.brane


def _monomial_string(names, exponents) -> str:
    factors = [
        f"{n}^{e}" if e != 1 else n for n, e in zip(names, exponents) if e != 0
    ]
    return "*".join(factors) if factors else "1"


# -- command bodies: each returns (json payload, pretty lines) --------


def cmd_validate(job):
    report = lattice.validate_cy(job.toric)
    brane_report = None
    if job.brane is not None:
        brane_report = lattice.validate_brane(job.toric, job.brane)
    ok = report.ok and (brane_report is None or brane_report.ok)
    payload = {
        "ok": ok,
        "toric_failures": list(report.failures),
        "brane_failures": list(brane_report.failures) if brane_report else [],
    }
    lines = [f"toric data: {report}"]
    if brane_report is not None:
        lines.append(f"brane: {brane_report}")
    return payload, lines, (EXIT_OK if ok else EXIT_VALIDATION)


def cmd_curve(job):
    curve = mirror.build_curve(job.toric, job.truncation, corrected=job.corrected)
    z_names = tuple(f"z{i}" for i in range(1, curve.n_z + 1))
    q_names = tuple(f"Q{a}" for a in range(1, job.toric.n_closed + 1))
    terms = []
    pretty_terms = []
    for term in curve.terms:
        terms.append(
            {
                "z": list(term.z_exponents),
                "Q": list(term.q_exponents),
                "coefficient": series_to_records(term.coefficient),
            }
        )
        mono_bits = []
        q_str = _monomial_string(q_names, term.q_exponents)
        z_str = _monomial_string(z_names, term.z_exponents)
        if q_str != "1":
            mono_bits.append(q_str)
        if z_str != "1":
            mono_bits.append(z_str)
        mono = "*".join(mono_bits) if mono_bits else "1"
        coeff = str(term.coefficient)
        if coeff == "1":
            pretty_terms.append(mono)
        elif mono == "1":
            pretty_terms.append(f"({coeff})")
        else:
            pretty_terms.append(f"({coeff})*{mono}")
    payload = {
        "corrected": job.corrected,
        "n_z": curve.n_z,
        "order": job.truncation,
        "terms": terms,
    }
    return payload, ["W = " + " + ".join(pretty_terms)], EXIT_OK


def _map_payload(mapdata):
    return {
        "direction": mapdata.direction,
        "order": mapdata.order,
        "A": [series_to_records(a) for a in mapdata.a_series],
        "closed": [series_to_records(s) for s in mapdata.closed],
        "open_unit": (
            series_to_records(mapdata.open_unit) if mapdata.open_unit is not None else None
        ),
    }


def cmd_mirror_map(job):
    data = mirror.mirror_map(job.toric, job.truncation, brane=job.brane)
    lines = [f"{data.direction}: closed image {i + 1}: {s}" for i, s in enumerate(data.closed)]
    if data.open_unit is not None:
        lines.append(f"open unit: {data.open_unit}")
    return _map_payload(data), lines, EXIT_OK


def cmd_inverse_map(job):
    data = mirror.inverse_mirror_map(job.toric, job.truncation, brane=job.brane)
    lines = [f"{data.direction}: closed image {i + 1}: {s}" for i, s in enumerate(data.closed)]
    if data.open_unit is not None:
        lines.append(f"open unit: {data.open_unit}")
    return _map_payload(data), lines, EXIT_OK


def cmd_fiber_invariants(job):
    series_list = mirror.fiber_open_gw(job.toric, job.truncation)
    payload = {
        "order": job.truncation,
        "series": [series_to_records(s) for s in series_list],
    }
    lines = [f"1+delta_{i} = {s}" for i, s in enumerate(series_list)]
    return payload, lines, EXIT_OK


def cmd_brane_mirror(job):
    brane = _need_brane(job)
    result = mirror.av_mirror_brane(
        job.toric, brane, job.truncation, normalization=job.normalization
    )
    payload = {
        "signs": list(result.signs),
        "frame_generators": [list(g) for g in brane.frame_generators],
        "z1": series_to_json(result.z1),
        "z2": series_to_json(result.z2),
        "residual_zero": result.residual.is_zero(),
    }
    lines = [
        f"signs (eps1, eps2) = {result.signs}",
        f"z1 = {result.z1}",
        f"z2 = {result.z2}",
        f"residual identically zero: {result.residual.is_zero()}",
    ]
    return payload, lines, EXIT_OK


def cmd_disc_invariants(job):
    brane = _need_brane(job)
    result = mirror.av_mirror_brane(
        job.toric, brane, job.truncation, normalization=job.normalization
    )
    table = inv.multiple_cover_inversion(inv.extract_open_gw(result.z2))
    report = inv.integrality_check(table)
    rows = []
    for beta in table.sorted_classes():
        entry = {"beta": list(beta)}
        if beta in table.n:
            entry["n"] = format_rational(table.n[beta])
        value = table.N.get(beta)
        if value is not None:
            entry["N"] = int(value) if value.denominator == 1 else format_rational(value)
        rows.append(entry)
    payload = {
        "signs": list(result.signs),
        "frame_generators": [list(g) for g in brane.frame_generators],
        "integral": report.ok,
        "flagged": [list(beta) for beta, _ in report.flagged],
        "table": rows,
    }
    names = result.z2.frame.names
    lines = [f"class {_monomial_string(names, b)}: n={e.get('n', '-')} N={e.get('N', '-')}"
             for b, e in zip(table.sorted_classes(), rows)]
    lines.append(f"integrality: {'pass' if report.ok else 'FAIL'}")
    return payload, lines, EXIT_OK


def cmd_compare_naive(job):
    brane = _need_brane(job)
    equations = mirror.naive_brane(job.toric, brane)
    comparison = mirror.compare_naive(
        job.toric, brane, job.truncation, normalization=job.normalization
    )
    payload = {
        "naive_equations": [
            {
                "z": list(eq.z_exponents),
                "Q": list(eq.q_exponents),
                "constant": format_rational(eq.constant),
                "phase_pi": format_rational(eq.phase),
            }
            for eq in equations
        ],
        "signs": list(comparison.signs),
        "z1_correction": series_to_json(comparison.z1_correction),
        "z1_in_closed_ideal": comparison.z1_in_closed_ideal,
        "z2_pure_open": series_to_json(comparison.z2_pure_open),
        "z2_mixed": series_to_json(comparison.z2_mixed),
    }
    lines = [
        f"z1 - Q0 = {comparison.z1_correction} (in closed ideal: {comparison.z1_in_closed_ideal})",
        f"z2 - 1, pure open part = {comparison.z2_pure_open}",
        f"z2 - 1, closed-ideal part = {comparison.z2_mixed}",
    ]
    return payload, lines, EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "curve": cmd_curve,
    "mirror-map": cmd_mirror_map,
    "inverse-map": cmd_inverse_map,
    "fiber-invariants": cmd_fiber_invariants,
    "brane-mirror": cmd_brane_mirror,
    "disc-invariants": cmd_disc_invariants,
    "compare-naive": cmd_compare_naive,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="syzmirror",
        description="Exact mirror-curve and open Gromov-Witten series computations",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--input", required=True, help="path to the JSON job document")
    parser.add_argument("--order", type=int, help="override the truncation order")
    parser.add_argument(
        "--corrected",
        nargs="?",
        const="true",
        help="use quantum-corrected curve coefficients (true/false)",
    )
    parser.add_argument(
        "--normalization", help="override the sign normalization, e.g. -1,-1"
    )
    parser.add_argument("--output", choices=["json", "pretty"], default="json")
    return parser


def _emit_error(code, message, exit_code):
    record = {"error": {"code": code, "message": message}}
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
    return exit_code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.input, "r", encoding="utf-8") as handle:
            try:
                doc = json.load(handle)
            except json.JSONDecodeError as exc:
                return _emit_error(
                    "parse", f"line {exc.lineno} column {exc.colno}: {exc.msg}", EXIT_PARSE
                )
    except OSError as exc:
        return _emit_error("parse", f"cannot read {args.input}: {exc}", EXIT_PARSE)

    try:
        job = parse_job(doc)
        if args.order is not None:
            if args.order < 1:
                raise InputError("--order must be >= 1")
            job.truncation = args.order
        if args.corrected is not None:
            text = args.corrected.lower()
            if text not in ("true", "false", "1", "0"):
                raise InputError("--corrected takes true or false")
            job.corrected = text in ("true", "1")
        if args.normalization is not None:
            try:
                pair = tuple(int(x) for x in args.normalization.split(","))
            except ValueError:
                raise InputError("--normalization takes two comma-separated signs") from None
            if len(pair) != 2 or any(x not in (1, -1) for x in pair):
                raise InputError("--normalization takes two signs from {1,-1}")
            job.normalization = pair
    except InputError as exc:
        return _emit_error("parse", str(exc), EXIT_PARSE)

    try:
        payload, lines, exit_code = COMMANDS[args.command](job)
    except InputError as exc:
        return _emit_error("parse", str(exc), EXIT_PARSE)
    except ValidationError as exc:
        return _emit_error("validation", str(exc), EXIT_VALIDATION)
    except MathDomainError as exc:
        return _emit_error("math", str(exc), EXIT_MATH)

    if args.output == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")
        for line in lines:
            sys.stderr.write(line + "\n")
    else:
        for line in lines:
            sys.stdout.write(line + "\n")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
