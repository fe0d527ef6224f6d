"""The main classification: (curve, prime) -> inertial type label, defect,
and an evidence trace for every probe that fired."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field as dfield
from fractions import Fraction
from math import gcd

from .chars import (TypeLabel, UnitChar, char_from_values, context,
                    named_table, twist_class_of_int)
from .curves import WeierstrassModel
from .fieldenum import cache_dir, load_fields
from .tate import LocalData, good_reduction_trace, local_data
from .towers import FieldTower, is_square, vp


class AmbiguousProbe(RuntimeError):
    """A signature probe matched no reference or more than one."""


class UnsupportedBranch(RuntimeError):
    pass


@dataclass
class ClassificationReport:
    prime: int
    local: LocalData
    defect: int | None
    label: TypeLabel
    evidence: list = dfield(default_factory=list)

    def to_json(self) -> dict:
        lab = self.label
        dfrj = _label_dfrj(lab)
        return {
            "prime": self.prime,
            "kodaira": self.local.kodaira,
            "cond_exp": self.local.f,
            "reduction": self.local.reduction,
            "potential": self.local.potential,
            "vdisc_min": self.local.vdisc,
            "defect_e": self.defect,
            "type": {
                "family": {"triv": "trivial", "special": "special",
                           "ps_split": "ps-split", "ps": "ps", "sc": "sc",
                           "exc": "exceptional"}[lab.family],
                "d": dfrj[0], "f": dfrj[1], "r": dfrj[2], "j": dfrj[3],
                "twist": dfrj[4],
                "special": lab.family == "special",
            },
            "display": lab.display(),
            "evidence": self.evidence,
        }


def _label_dfrj(lab: TypeLabel):
    """(d, f, r, j, twist) display data for the JSON record."""
    if lab.family in ("triv",):
        return (None, None, None, None, 1)
    if lab.family == "special":
        return (None, None, None, None, lab.data[0])
    if lab.family == "ps_split":
        return (lab.data[0], None, None, None, 1)
    if lab.family == "exc":
        return (None, None, None, None, lab.data[1])
    # named resolution for ps/sc
    if lab.ell in (2, 3):
        for base, (name, dfrj) in named_table(lab.ell).items():
            for tag in (1, -4, 8, -8) if lab.ell == 2 else (1, 3):
                if base.twist(tag) == lab:
                    return (dfrj[0], dfrj[1], dfrj[2], dfrj[3], tag)
        return (None, None, lab.order_on_inertia(), None, None)
    e = lab.order_on_inertia()
    if lab.family == "ps":
        return (1, 1, e, None, 1)
    return ("u", 2, e, None, 1)


def curve_digest(E: WeierstrassModel) -> str:
    return hashlib.sha256(json.dumps([int(a) for a in E.a]).encode()).hexdigest()[:16]


# ----- probes ----------------------------------------------------------------

def semistability_defect(E: WeierstrassModel, ell: int,
                         conductor_hint: int | None = None,
                         evidence: list | None = None) -> int:
    """Least degree of a totally ramified extension with good reduction.

    For ell >= 5 this is 12/gcd(12, v(disc_min)).  For ell in {2, 3} the
    enumerated field ladder is searched degree by degree; the terminal
    degrees (8 at 2, 12 at 3) follow by elimination, with a conductor-based
    shortcut replacing the degree-8 scan when the conductor pins the answer
    (probe economy for the exceptional families).
    """
    ev = evidence if evidence is not None else []
    ld = local_data(E, ell)
    if ld.potential != "good":
        raise ValueError("not potentially good")
    if ld.reduction == "good":
        return 1
    if ell >= 5:
        e = 12 // gcd(12, ld.vdisc)
        ev.append({"probe": "defect-tame-formula", "vdisc": ld.vdisc, "e": e})
        return e
    ladder = (2, 3, 4, 6) if ell == 3 else (2, 3, 4, 6)
    for n in ladder:
        for fld in load_fields(ell, n):
            if local_data(E, fld.tower()).reduction == "good":
                ev.append({"probe": "defect-ladder", "degree": n,
                           "field": fld.line(with_aut=False)})
                return n
    if ell == 3:
        ev.append({"probe": "defect-elimination", "e": 12})
        return 12
    f = conductor_hint if conductor_hint is not None else ld.f
    if f in (3, 4, 7):
        ev.append({"probe": "defect-conductor-split", "f": f, "e": 24})
        return 24
    if f in (5, 8):
        ev.append({"probe": "defect-conductor-split", "f": f, "e": 8})
        return 8
    if f == 6:
        f8 = local_data(E.quadratic_twist(8), 2).f
        e = 8 if f8 == 5 else 24
        ev.append({"probe": "defect-twist8-split", "f_twist": f8, "e": e})
        return e
    # spec-faithful terminal scan
    for fld in load_fields(2, 8):
        if local_data(E, fld.tower()).reduction == "good":
            ev.append({"probe": "defect-ladder", "degree": 8,
                       "field": fld.line(with_aut=False)})
            return 8
    ev.append({"probe": "defect-elimination", "e": 24})
    return 24


def ordinarity_probe(E: WeierstrassModel, ell: int, e: int,
                     evidence: list | None = None) -> str:
    """ordinary / supersingular at the minimal good-reduction field."""
    assert e in (3, 4, 6)
    for fld in load_fields(ell, e):
        T = fld.tower()
        if local_data(E, T).reduction == "good":
            aq = good_reduction_trace(E, T)
            kind = "ordinary" if aq % ell else "supersingular"
            if evidence is not None:
                evidence.append({"probe": "ordinarity", "degree": e,
                                 "a_q": aq, "kind": kind})
            return kind
    raise UnsupportedBranch("no good-reduction field found for the probe")


def good_reduction_signature(E: WeierstrassModel, ell: int, n: int,
                             use_cache: bool = True) -> str:
    """Bit i = 1 iff E has good reduction over the i-th enumerated
    totally ramified degree-n field."""
    dig = curve_digest(E)
    path = os.path.join(cache_dir(), f"signatures_{ell}_{n}.json")
    cache = {}
    if use_cache and os.path.exists(path):
        with open(path) as fh:
            cache = json.load(fh)
    if dig in cache:
        return cache[dig]
    bits = []
    for fld in load_fields(ell, n):
        ld = local_data(E, fld.tower())
        bits.append("1" if ld.reduction == "good" else "0")
    sig = "".join(bits)
    if use_cache:
        cache[dig] = sig
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(cache, fh)
        os.replace(tmp, path)
    return sig


def disc_square_class_probe(E: WeierstrassModel, ell: int):
    """Square class of the minimal discriminant, mapped to the inducing-
    field naming; None when outside the expected set (P4 then decides)."""
    disc = int(E.discriminant())
    v = vp(abs(disc), ell)
    u = disc // ell**v
    if ell == 3:
        if v % 2 == 0:
            return None
        return 3 if u % 3 == 1 else -3
    if v % 2 == 1:
        return None
    m = u % 8
    if m == 5:
        return -4
    if m == 1:
        return -20
    return None


def exceptional_matcher(E: WeierstrassModel, evidence: list | None = None) -> int:
    """Twist tag d for tau_ex,1 (x) eps_d via the 3-torsion field.

    Both quartics (of E and of the reference curve ry^2 = x^3+3x+2 at
    r = 1) generate the same field; d is the unique square class making
    d * f(x_0) * f_ref(x_ref) a square there.
    """
    from .towers import find_roots, has_root
    ref = WeierstrassModel((0, 0, 0, 3, 2))
    gE = [int(c) for c in E.short_model().three_division_monic()]
    gR = [int(c) for c in ref.short_model().three_division_monic()]
    c4, c6 = E.short_model().c_invariants()
    host = None
    for fld in load_fields(2, 4):
        T = fld.tower(digits=80)
        if has_root([T.from_int(c) for c in gE], T,
                    depth_cap=2 * fld.disc_v + 30):
            host = fld
            break
    if host is None:
        raise AmbiguousProbe("3-division quartic has no root in any quartic "
                             "field: inconsistent with e=24, f=7")
    T = host.tower(digits=80)
    rE = find_roots([T.from_int(c) for c in gE], T,
                    depth_cap=2 * host.disc_v + 30, max_count=1)
    rR = find_roots([T.from_int(c) for c in gR], T,
                    depth_cap=2 * host.disc_v + 30, max_count=1)
    if not rE or not rR:
        raise AmbiguousProbe("reference quartic does not embed: "
                             "inconsistent with e=24, f=7")
    inv3 = T.unit_inverse(T.from_int(3))
    xE = rE[0] * inv3
    xR = rR[0] * inv3

    def short_val(M: WeierstrassModel, x):
        c4m, c6m = M.short_model().c_invariants()
        return x**3 - 27 * int(c4m) * x - 54 * int(c6m)

    theta = short_val(E, xE)
    theta_r = short_val(ref, xR)
    prod = theta * theta_r
    hits = []
    for d, tag in ((1, 1), (-1, -4), (2, 8), (-2, -8)):
        if is_square(T, prod * d):
            hits.append(tag)
    if len(hits) != 1:
        raise AmbiguousProbe(f"square-class matcher hit {hits}")
    if evidence is not None:
        evidence.append({"probe": "exceptional-3torsion",
                         "host": host.line(with_aut=False), "d": hits[0]})
    return hits[0]


# ----- reference signatures ---------------------------------------------------

def _ref_signature_table(ell: int, n: int) -> dict:
    """Reference signature -> label-key table, from package data."""
    here = os.path.dirname(__file__)
    path = os.path.join(here, "data", "ref_signatures.json")
    with open(path) as fh:
        data = json.load(fh)
    return data[f"{ell}:{n}"]


def signature_match(E: WeierstrassModel, ell: int, n: int,
                    allowed: list[str], evidence: list | None = None) -> str:
    """Match E's degree-n signature against the frozen reference vectors;
    returns the matched reference name."""
    sig = good_reduction_signature(E, ell, n)
    table = _ref_signature_table(ell, n)
    hits = [name for name, s in table.items() if s == sig and name in allowed]
    if evidence is not None:
        evidence.append({"probe": "signature-match", "degree": n,
                         "weight": sig.count("1"), "hits": hits})
    if len(hits) != 1:
        raise AmbiguousProbe(
            f"signature at degree {n} matched {hits or 'nothing'}")
    return hits[0]


# ----- main dispatch ----------------------------------------------------------

def classify(E: WeierstrassModel, ell: int) -> ClassificationReport:
    ev: list = []
    ld = local_data(E, ell)
    ev.append({"probe": "tate", "kodaira": ld.kodaira, "f": ld.f,
               "vdisc": ld.vdisc, "reduction": ld.reduction,
               "potential": ld.potential})
    if ld.reduction == "good":
        return ClassificationReport(ell, ld, 1, TypeLabel.trivial(ell), ev)
    if ld.reduction == "multiplicative":
        return ClassificationReport(ell, ld, None, TypeLabel.special(ell), ev)
    if ld.potential == "multiplicative":
        if ell != 2:
            label = TypeLabel.special(ell, ell)
        elif ld.f == 4:
            label = TypeLabel.special(2, -4)
        elif ld.f == 6:
            f8 = local_data(E.quadratic_twist(8), 2).f
            ev.append({"probe": "twist8-conductor", "f_twist": f8})
            label = TypeLabel.special(2, 8 if f8 == 1 else -8)
        else:
            raise UnsupportedBranch(f"potentially multiplicative with f={ld.f}")
        _check_coherence(label, ld)
        return ClassificationReport(ell, ld, None, label, ev)
    # additive, potentially good
    if ell >= 5:
        e = 12 // gcd(12, ld.vdisc)
        ev.append({"probe": "defect-tame-formula", "e": e})
        if e == 2:
            label = TypeLabel.ps_split(ell, ell)
        else:
            assert ((ell - 1) % e == 0) != ((ell + 1) % e == 0), \
                "e must divide exactly one of ell-1, ell+1"
            if (ell - 1) % e == 0:
                ctx = context(ell, None)
                from .chars import _primitive_root
                g = _primitive_root(ell)
                ch = char_from_values(ctx, [ctx.tower.from_int(g)],
                                      [Fraction(1, e)])
                label = TypeLabel.principal_series(ch, ch.inv())
            else:
                ctx = context(ell, "u")
                ch = UnitChar(ctx, (Fraction(ctx.orders[0] // e,
                                             ctx.orders[0]),))
                label = TypeLabel.supercuspidal("u", ch)
        report = ClassificationReport(ell, ld, e, label, ev)
        _check_coherence(label, ld, e)
        return report
    e = semistability_defect(E, ell, conductor_hint=ld.f, evidence=ev)
    names = {name: lab for lab, (name, _) in named_table(ell).items()}
    if e == 2:
        if ell == 3:
            label = TypeLabel.ps_split(3, 3)
        elif ld.f == 4:
            label = TypeLabel.ps_split(2, -4)
        elif ld.f == 6:
            f8 = local_data(E.quadratic_twist(8), 2).f
            ev.append({"probe": "twist8-conductor", "f_twist": f8})
            label = TypeLabel.ps_split(2, 8 if f8 == 0 else -8)
        else:
            raise UnsupportedBranch(f"e=2 with f={ld.f}")
    elif ell == 3:
        label = _classify_3(E, ld, e, names, ev)
    elif e == 24:
        label = _classify_exceptional(E, ld, ev)
    else:
        label = _classify_2(E, ld, e, names, ev)
    _check_coherence(label, ld, e if label.family not in ("special",) else None)
    return ClassificationReport(ell, ld, e, label, ev)


def _classify_3(E, ld, e, names, ev):
    if ld.f == 2:
        if e != 4:
            raise UnsupportedBranch(f"f=2 with e={e}")
        return names["sc_3(-1,1,4)"]
    if ld.f == 3:
        d = disc_square_class_probe(E, 3)
        ev.append({"probe": "disc-square-class", "d": d})
        if d is None:
            raise AmbiguousProbe("discriminant class outside {3,-3} at f=3")
        return names[f"sc_3({d},2,6)"]
    if ld.f == 4:
        kind = ordinarity_probe(E, 3, 3 if e == 3 else 6, ev)
        base = names["ps_3(1,2,3)"] if kind == "ordinary" \
            else names["sc_3(-1,2,3)"]
        return base if e == 3 else base.twist(3)
    if ld.f == 5:
        if e != 12:
            raise UnsupportedBranch(f"f=5 with e={e}")
        hit = signature_match(E, 3, 12,
                              ["sc_3(-3,4,6)_0", "sc_3(-3,4,6)_1",
                               "sc_3(-3,4,6)_2"], ev)
        return names[hit]
    raise UnsupportedBranch(f"ell=3 additive potentially good with f={ld.f}")


def _classify_2(E, ld, e, names, ev):
    if e == 3:
        if ld.f != 2:
            raise UnsupportedBranch(f"e=3 with f={ld.f}")
        return names["sc_2(5,1,3)"]
    if e == 6:
        if ld.f == 4:
            return names["sc_2(5,1,3)"].twist(-4)
        if ld.f == 6:
            f8 = local_data(E.quadratic_twist(8), 2).f
            ev.append({"probe": "twist8-conductor", "f_twist": f8})
            return names["sc_2(5,1,3)"].twist(8 if f8 == 2 else -8)
        raise UnsupportedBranch(f"e=6 with f={ld.f}")
    if e == 8:
        if ld.f in (5, 6):
            d5 = disc_square_class_probe(E, 2)
            ev.append({"probe": "disc-square-class", "d": d5})
            base_curve = E if ld.f == 5 else E.quadratic_twist(8)
            hit = signature_match(base_curve, 2, 8,
                                  ["sc_2(-4,3,4)", "sc_2(-20,3,4)"], ev)
            d4 = -4 if hit == "sc_2(-4,3,4)" else -20
            if d5 is not None and d5 != d4:
                raise AmbiguousProbe(
                    f"square-class probe ({d5}) disagrees with signature "
                    f"matching ({d4})")
            base = names[f"sc_2({d4},3,4)"]
            return base if ld.f == 5 else base.twist(8)
        if ld.f == 8:
            hit = signature_match(E, 2, 8, ["sc_2(-4,6,4)",
                                            "sc_2(-4,6,4)x8"], ev)
            base = names["sc_2(-4,6,4)"]
            return base if hit == "sc_2(-4,6,4)" else base.twist(8)
        raise UnsupportedBranch(f"e=8 with f={ld.f}")
    if e == 4:
        if ld.f != 8:
            raise UnsupportedBranch(f"e=4 with f={ld.f}")
        kind = ordinarity_probe(E, 2, 4, ev)
        fam = "ps_2(1,4,4)" if kind == "ordinary" else "sc_2(5,4,4)"
        hit = signature_match(E, 2, 4, [fam, fam + "x-4"], ev)
        base = names[fam]
        return base if hit == fam else base.twist(-4)
    raise UnsupportedBranch(f"ell=2 additive potentially good with e={e}")


def _classify_exceptional(E, ld, ev):
    if ld.f == 3:
        return TypeLabel.exceptional(2)
    if ld.f == 4:
        return TypeLabel.exceptional(2, -4)
    if ld.f == 6:
        f8 = local_data(E.quadratic_twist(8), 2).f
        ev.append({"probe": "twist8-conductor", "f_twist": f8})
        return TypeLabel.exceptional(2, 8 if f8 == 3 else -8)
    if ld.f == 7:
        d = exceptional_matcher(E, ev)
        return TypeLabel.exceptional(1, d)
    raise UnsupportedBranch(f"e=24 with f={ld.f}")


def _check_coherence(label: TypeLabel, ld: LocalData, e: int | None = None):
    if label.condexp() != ld.f:
        raise AssertionError(
            f"conductor mismatch: type says {label.condexp()}, "
            f"Tate says {ld.f} ({label.display()})")
    if e is not None and label.family != "special":
        de = label.defect()
        if de is not None and de != e:
            raise AssertionError(
                f"defect mismatch: type says {de}, ladder says {e}")
