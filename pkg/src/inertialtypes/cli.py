"""Command-line frontend: classify curves, verify the golden corpus, print
the verified class-field-theory tables, and manage candidate-field data.

Exit codes: 0 success (ambiguous probes are reported in-band, not fatal),
1 internal error, 2 bad input; ``verify`` exits nonzero on any mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .classify import AmbiguousProbe, ClassificationReport, classify
from .curves import WeierstrassModel
from . import towers


def _parse_a(text: str):
    parts = [int(x) for x in text.replace(" ", "").split(",")]
    if len(parts) != 5:
        raise ValueError("need a1,a2,a3,a4,a6")
    return tuple(parts)


def _curves_from_args(args):
    out = []
    if args.a:
        out.append(WeierstrassModel(_parse_a(args.a)))
    if args.curve_file:
        with open(args.curve_file) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                rec = json.loads(line)
                out.append(WeierstrassModel(tuple(int(x) for x in rec["a"]),
                                            label=rec.get("label")))
    return out


def _report_text(E: WeierstrassModel, rep: ClassificationReport) -> str:
    j = rep.to_json()
    name = E.label or ",".join(str(int(c)) for c in E.a)
    e = j["defect_e"] if j["defect_e"] is not None else "-"
    return (f"{name}: p={rep.prime} {j['reduction']} ({j['kodaira']}) "
            f"f={j['cond_exp']} e={e}  type: {j['display']}")


def _classify_one(E, prime, as_json):
    try:
        rep = classify(E, prime)
        if as_json:
            rec = rep.to_json()
            rec["label"] = E.label
            rec["a"] = [int(c) for c in E.a]
            return json.dumps(rec), 0
        return _report_text(E, rep), 0
    except AmbiguousProbe as ex:
        rec = {"label": E.label, "a": [int(c) for c in E.a],
               "prime": prime, "ambiguous": str(ex)}
        return (json.dumps(rec) if as_json
                else f"{E.label or E.a}: ambiguous probe: {ex}"), 0


def cmd_classify(args) -> int:
    curves = _curves_from_args(args)
    if not curves:
        print("no curves given (use --a or --curve-file)", file=sys.stderr)
        return 2
    with ThreadPoolExecutor(max_workers=min(4, len(curves))) as pool:
        results = list(pool.map(
            lambda E: _classify_one(E, args.prime, args.json), curves))
    for text, _ in results:
        print(text)
    return 0


def cmd_verify(args) -> int:
    from .refdata import corpus_entries
    entries = corpus_entries()
    bad = 0
    rows = []
    for entry in entries:
        if args.prime and entry.prime != args.prime:
            continue
        rep = classify(entry.model, entry.prime)
        ok = (rep.label == entry.expected_type
              and rep.local.f == entry.expected_f
              and (rep.defect or 1) == entry.expected_e)
        rows.append((entry.label, entry.prime, ok, rep))
        if not ok:
            bad += 1
            print(f"MISMATCH {entry.label} @ {entry.prime}: got "
                  f"{rep.label.display()} f={rep.local.f} e={rep.defect}, "
                  f"expected {entry.expected_type.display()} "
                  f"f={entry.expected_f} e={entry.expected_e}")
    for label, p, ok, rep in rows:
        print(f"{'ok ' if ok else 'BAD'} {label:8s} @ {p}: "
              f"{rep.label.display()}")
    print(f"{len(rows) - bad}/{len(rows)} rows match")
    return 1 if bad else 0


def cmd_tables(args) -> int:
    from .cft import (GeneratorMismatch, QUADRATIC_RADICANDS, norm_group_row,
                      quotient_row, verify_tables_row)
    bad = 0
    for ell in (2, 3):
        for c in QUADRATIC_RADICANDS[ell]:
            for k in range(1, args.kmax + 1):
                try:
                    verify_tables_row(ell, c, k)
                    ustr, unames = norm_group_row(ell, c, k)
                    qstr, qnames = quotient_row(ell, c, k)
                    print(f"Q_{ell}(sqrt {c:3d}) k={k}:  U_f "
                          f"{ustr or 'trivial'} <{','.join(unames)}>  "
                          f"quotient {qstr or 'trivial'} "
                          f"<{','.join(qnames)}>")
                except GeneratorMismatch as ex:
                    bad += 1
                    print(f"GENERATOR MISMATCH: {ex}")
    return 1 if bad else 0


def cmd_enumerate_fields(args) -> int:
    from .fieldenum import load_fields
    fields = load_fields(args.prime, args.degree)
    for f in fields:
        print(f.line(with_aut=False))
    print(f"# {len(fields)} classes; Serre mass identity verified",
          file=sys.stderr)
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="inertial-types",
        description="Local reduction data and inertial Weil-Deligne types "
                    "of elliptic curves over Q_ell.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    pc = sub.add_parser("classify", help="classify curves at a prime")
    pc.add_argument("--prime", type=int, required=True)
    pc.add_argument("--a", help="inline a-invariants a1,a2,a3,a4,a6")
    pc.add_argument("--curve-file", help="JSON-lines file of curve records")
    pc.add_argument("--json", action="store_true", help="JSON output")
    pc.add_argument("--precision", type=int, default=None)
    pc.add_argument("--cache-dir", default=None)
    pc.set_defaults(fn=cmd_classify)

    pv = sub.add_parser("verify", help="re-derive the golden corpus")
    pv.add_argument("--prime", type=int, default=None)
    pv.add_argument("--cache-dir", default=None)
    pv.set_defaults(fn=cmd_verify)

    pt = sub.add_parser("tables", help="print the verified unit-group tables")
    pt.add_argument("--kmax", type=int, default=8)
    pt.set_defaults(fn=cmd_tables)

    pe = sub.add_parser("enumerate-fields",
                        help="list totally ramified extensions")
    pe.add_argument("--prime", type=int, required=True)
    pe.add_argument("--degree", type=int, required=True)
    pe.add_argument("--cache-dir", default=None)
    pe.set_defaults(fn=cmd_enumerate_fields)

    args = ap.parse_args(argv)
    if getattr(args, "cache_dir", None):
        os.environ["INERTIAL_CACHE"] = args.cache_dir
    if getattr(args, "precision", None):
        towers.DEFAULT_DIGITS = max(args.precision, towers.MIN_DIGITS + 10)
    try:
        return args.fn(args)
    except (OSError, json.JSONDecodeError, ValueError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2
    except Exception as ex:  # internal
        import traceback
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
