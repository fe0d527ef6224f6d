"""Frozen fixtures: the golden corpus with expected reduction data and
types, the eight reference curves of the octahedral families, the explicit
sextic/octic polynomials and characters behind them, and the precomputed
probe signatures."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .chars import TypeLabel, named_table
from .curves import WeierstrassModel


DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


class UnknownLabel(KeyError):
    pass


class MalformedRecord(ValueError):
    pass


# expected rows: (label, prime, e (None = potentially multiplicative or good
# reduction bookkeeping below), type spec, conductor exponent)
# type spec: ("triv",) | ("ps_split", tag) | ("named", table name, twist tag)
#            | ("exc", i, tag)

Q3_EXPECTED = [
    ("11a1", 3, 1, ("triv",), 0),
    ("99d2", 3, 2, ("ps_split", 3), 2),
    ("36a1", 3, 4, ("named", "sc_3(-1,1,4)", 1), 2),
    ("162b1", 3, 3, ("named", "ps_3(1,2,3)", 1), 4),
    ("162d1", 3, 3, ("named", "sc_3(-1,2,3)", 1), 4),
    ("162c2", 3, 6, ("named", "ps_3(1,2,3)", 3), 4),
    ("162a1", 3, 6, ("named", "sc_3(-1,2,3)", 3), 4),
    ("27a1", 3, 12, ("named", "sc_3(-3,2,6)", 1), 3),
    ("54a1", 3, 12, ("named", "sc_3(3,2,6)", 1), 3),
    ("243b1", 3, 12, ("named", "sc_3(-3,4,6)_0", 1), 5),
    ("243a1", 3, 12, ("named", "sc_3(-3,4,6)_1", 1), 5),
    ("972b1", 3, 12, ("named", "sc_3(-3,4,6)_2", 1), 5),
]

Q2_EXPECTED = [
    ("11a1", 2, 1, ("triv",), 0),
    ("176b2", 2, 2, ("ps_split", -4), 4),
    ("704a2", 2, 2, ("ps_split", 8), 6),
    ("704k2", 2, 2, ("ps_split", -8), 6),
    ("20a1", 2, 3, ("named", "sc_2(5,1,3)", 1), 2),
    ("80b1", 2, 6, ("named", "sc_2(5,1,3)", -4), 4),
    ("96a1", 2, 8, ("named", "sc_2(-20,3,4)", 1), 5),
    ("288a1", 2, 8, ("named", "sc_2(-4,3,4)", 1), 5),
    ("320c2", 2, 6, ("named", "sc_2(5,1,3)", 8), 6),
    ("320f2", 2, 6, ("named", "sc_2(5,1,3)", -8), 6),
    ("192a2", 2, 8, ("named", "sc_2(-20,3,4)", 8), 6),
    ("576f2", 2, 8, ("named", "sc_2(-4,3,4)", 8), 6),
    ("256b1", 2, 8, ("named", "sc_2(-4,6,4)", 8), 8),
    ("256c1", 2, 8, ("named", "sc_2(-4,6,4)", 1), 8),
    ("256a1", 2, 4, ("named", "sc_2(5,4,4)", 1), 8),
    ("256d1", 2, 4, ("named", "sc_2(5,4,4)", -4), 8),
    ("768b1", 2, 4, ("named", "ps_2(1,4,4)", 1), 8),
    ("768h1", 2, 4, ("named", "ps_2(1,4,4)", -4), 8),
]

# the octahedral reference curves r y^2 = x^3 + 3x + 2 and x^3 - 3x + 1
EXCEPTIONAL_EXPECTED = [
    ("E2,-1", 2, 24, ("exc", 2, 1), 3),
    ("E2,1", 2, 24, ("exc", 2, -4), 4),
    ("E2,-2", 2, 24, ("exc", 2, 8), 6),
    ("E2,2", 2, 24, ("exc", 2, -8), 6),
    ("E1,1", 2, 24, ("exc", 1, 1), 7),
    ("E1,-1", 2, 24, ("exc", 1, -4), 7),
    ("E1,2", 2, 24, ("exc", 1, 8), 7),
    ("E1,-2", 2, 24, ("exc", 1, -8), 7),
]

# coverage witnesses for the tame rows of the main table (ell >= 5); these
# are small j = 0 / j = 1728 models realizing each defect branch
TAME_WITNESSES = [
    ("w5-e6-sc", 5, 6, ("tame_sc", 6), 2, (0, 0, 0, 0, 5)),
    ("w5-e3-sc", 5, 3, ("tame_sc", 3), 2, (0, 0, 0, 0, 25)),
    ("w5-e4-ps", 5, 4, ("tame_ps", 4), 2, (0, 0, 0, 5, 0)),
    ("w5-e2", 5, 2, ("ps_split", 5), 2, (0, 0, 0, 0, 50)),
    ("w7-e6-ps", 7, 6, ("tame_ps", 6), 2, (0, 0, 0, 0, 7)),
    ("w7-e3-ps", 7, 3, ("tame_ps", 3), 2, (0, 0, 0, 0, 49)),
    ("w7-e4-sc", 7, 4, ("tame_sc", 4), 2, (0, 0, 0, 7, 0)),
]


def exceptional_curve(i: int, r: int) -> WeierstrassModel:
    base = WeierstrassModel((0, 0, 0, 3, 2) if i == 1 else (0, 0, 0, -3, 1))
    return base.quadratic_twist(r) if r != 1 else base


def exceptional_models():
    out = {}
    for i in (1, 2):
        for r in (1, -1, 2, -2):
            out[f"E{i},{r}"] = exceptional_curve(i, r)
    return out


def resolve_type(ell: int, spec) -> TypeLabel:
    kind = spec[0]
    if kind == "triv":
        return TypeLabel.trivial(ell)
    if kind == "ps_split":
        return TypeLabel.ps_split(ell, spec[1])
    if kind == "exc":
        return TypeLabel.exceptional(spec[1], spec[2])
    if kind == "named":
        names = {name: lab for lab, (name, _) in named_table(ell).items()}
        return names[spec[1]].twist(spec[2])
    if kind in ("tame_ps", "tame_sc"):
        from .chars import UnitChar, char_from_values, context, _primitive_root
        from fractions import Fraction
        e = spec[1]
        if kind == "tame_ps":
            ctx = context(ell, None)
            g = _primitive_root(ell)
            ch = char_from_values(ctx, [ctx.tower.from_int(g)],
                                  [Fraction(1, e)])
            return TypeLabel.principal_series(ch, ch.inv())
        ctx = context(ell, "u")
        ch = UnitChar(ctx, (Fraction(ctx.orders[0] // e, ctx.orders[0]),))
        return TypeLabel.supercuspidal("u", ch)
    raise ValueError(spec)


@dataclass
class ReferenceEntry:
    label: str
    prime: int
    model: WeierstrassModel
    expected_e: int
    expected_type: TypeLabel
    expected_f: int


def _expected_index():
    idx = {}
    for row in Q3_EXPECTED:
        idx[(row[0], row[1])] = row
    for row in Q2_EXPECTED:
        idx[(row[0], row[1])] = row
    return idx


def corpus_path() -> str:
    return os.path.join(DATA_DIR, "corpus.jsonl")


def load_corpus(path: str | None = None) -> list[ReferenceEntry]:
    """Load the golden corpus and join against the expected-type tables."""
    path = path or corpus_path()
    idx = _expected_index()
    out = []
    seen = set()
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rec = json.loads(line)
                label = rec["label"]
                a = tuple(int(x) for x in rec["a"])
                if len(a) != 5:
                    raise ValueError("need 5 a-invariants")
            except (KeyError, ValueError, TypeError) as ex:
                raise MalformedRecord(str(ex))
            model = WeierstrassModel(a, label=label)
            hit = [key for key in idx if key[0] == label]
            if not hit:
                raise UnknownLabel(label)
            for key in hit:
                row = idx[key]
                out.append(ReferenceEntry(
                    label, row[1], model, row[2],
                    resolve_type(row[1], row[3]), row[4]))
                seen.add(key)
    return out


def corpus_entries() -> list[ReferenceEntry]:
    entries = load_corpus()
    models = exceptional_models()
    for (label, ell, e, spec, f) in EXCEPTIONAL_EXPECTED:
        entries.append(ReferenceEntry(label, ell, models[label], e,
                                      resolve_type(ell, spec), f))
    for (label, ell, e, spec, f, a) in TAME_WITNESSES:
        entries.append(ReferenceEntry(label, ell, WeierstrassModel(a, label=label),
                                      e, resolve_type(ell, spec), f))
    return entries


# ----- section-7 fixtures -----------------------------------------------------

F1_POLY = (10, -24, 36, -32, 18, -6, 1)
F2_POLY = (918, -9882, 249264, -88434, 10728, -198, 1)
HK_E2 = (2, -8, 22, -38, 50, -46, 26, -8, 1)
HK_E1 = (2, -112, -164, -392, -104, -280, 236, -28, 1)

# chi_1 on the generators u_1..u_5 of (O_M1 / p^11)^x: -1 on u1, u2, u4, u5
# and i on u3; chi_2 on 1 + b_2 mod p^3: i.
CHI1_VALUES = {"u1": (1, 2), "u2": (1, 2), "u3": (1, 4), "u4": (1, 2),
               "u5": (1, 2)}
CHI2_VALUE = (1, 4)
M1_UNIT_STRUCTURE = [2, 2, 4, 4, 16]


def build_M(i: int, digits: int = 60):
    """The sextic field M_i = Q_2[x]/(f_i) as a cubic-then-quadratic tower,
    together with the image of b_i (a root of f_i).

    Returns (tower, b).  The cubic stage is x^3 - 2 (so the containment
    L = Q_2(cbrt 2) subset M_i is verified by root-finding f_i over the
    built tower).
    """
    from .kummer import ramified_quadratic_stages
    from .towers import FieldTower, find_roots
    Q2 = FieldTower(2, digits=digits)
    L = Q2.extend_eisenstein([-2, 0, 0])
    poly = F1_POLY if i == 1 else F2_POLY
    for coords, stage in ramified_quadratic_stages(L):
        M = L.extend_eisenstein(stage)
        roots = find_roots([M.from_int(c) for c in poly], M, max_count=1,
                           depth_cap=90)
        if roots:
            return M, roots[0]
    raise RuntimeError(f"f_{i} does not generate a quadratic extension of "
                       "Q_2(cbrt 2)")


def m1_unit_generators(M, b):
    """u_1..u_5 of (O_M1/p_M1^11)^x in the published normal form."""
    one = M.one()
    return [b + one, b**3 + one, b**5 + one, 2 * b + one, 2 * b**3 + one]


# ----- reference signature construction --------------------------------------

SIGNATURE_REFS = {
    # (ell, degree) -> list of (reference name, corpus label or model key)
    (3, 12): [("sc_3(-3,4,6)_0", "243b1"), ("sc_3(-3,4,6)_1", "243a1"),
              ("sc_3(-3,4,6)_2", "972b1")],
    (2, 8): [("sc_2(-4,3,4)", "288a1"), ("sc_2(-20,3,4)", "96a1"),
             ("sc_2(-4,6,4)", "256c1"), ("sc_2(-4,6,4)x8", "256b1")],
    (2, 4): [("ps_2(1,4,4)", "768b1"), ("ps_2(1,4,4)x-4", "768h1"),
             ("sc_2(5,4,4)", "256a1"), ("sc_2(5,4,4)x-4", "256d1")],
}


def build_reference_signatures(out_path: str | None = None) -> dict:
    """Compute and freeze the probe reference vectors from the corpus."""
    from .classify import good_reduction_signature
    by_label = {}
    for entry in load_corpus():
        by_label[entry.label] = entry.model
    data = {}
    for (ell, n), refs in SIGNATURE_REFS.items():
        table = {}
        for name, label in refs:
            sig = good_reduction_signature(by_label[label], ell, n,
                                           use_cache=True)
            table[name] = sig
        data[f"{ell}:{n}"] = table
    out_path = out_path or os.path.join(DATA_DIR, "ref_signatures.json")
    with open(out_path, "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
    return data
