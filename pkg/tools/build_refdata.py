"""Build the frozen reference data: the golden corpus models and the probe
reference signatures.

Curve models: the sandbox has no elliptic-curve database, so models are
pinned three ways and every one is verified by recomputing its full
conductor from scratch:
  - hand-known minimal models for the unambiguous labels,
  - minimal quadratic twists of those for the twist-related labels,
  - conductor-targeted searches for the rest, with the class identified by
    its computed reduction data (the paper's table rows are distinct, so
    the expected local data pins each class).

Run from the repository root:  python tools/build_refdata.py
"""

import json
import os
import sys
from math import gcd

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from inertialtypes.curves import WeierstrassModel
from inertialtypes.tate import local_data
from inertialtypes.towers import vp

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "inertialtypes",
                   "data")


def factorize(n: int):
    n = abs(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def global_conductor(E: WeierstrassModel) -> int:
    disc = E.discriminant()
    N = 1
    for p in factorize(disc):
        N *= p ** local_data(E, p).f
    return N


KNOWN = {
    "11a1": (0, -1, 1, -10, -20),
    "20a1": (0, 1, 0, 4, 4),
    "27a1": (0, 0, 1, 0, -7),
    "36a1": (0, 0, 0, 0, 1),
    "54a1": (1, -1, 0, 12, 8),
    "96a1": (0, 1, 0, -2, 0),
    "288a1": (0, 0, 0, 3, 0),
    "243a1": (0, 0, 1, 0, 2),
    "243b1": (0, 0, 1, 0, -1),
    "256a1": (0, 1, 0, -3, 1),     # j = 8000, CM by -8
}

# twist-derived labels: (base label, twist d)
TWISTS = {
    "99d2": ("11a1", -3),
    "176b2": ("11a1", -1),
    "704a2": ("11a1", 2),
    "704k2": ("11a1", -2),
    "80b1": ("20a1", -1),
    "320c2": ("20a1", 2),
    "320f2": ("20a1", -2),
    "192a2": ("96a1", 2),
    "576f2": ("288a1", 2),
    "256d1": ("256a1", -1),
}

EXPECTED_N = {
    "11a1": 11, "99d2": 99, "176b2": 176, "704a2": 704, "704k2": 704,
    "20a1": 20, "80b1": 80, "320c2": 320, "320f2": 320, "27a1": 27,
    "36a1": 36, "54a1": 54, "96a1": 96, "192a2": 192, "288a1": 288,
    "576f2": 576, "243a1": 243, "243b1": 243, "972b1": 972,
    "256a1": 256, "256b1": 256, "256c1": 256, "256d1": 256,
    "768b1": 768, "768h1": 768,
    "162a1": 162, "162b1": 162, "162c2": 162, "162d1": 162,
}


def minimal_model_from_c4c6(c4: int, c6: int):
    """Laska-Kraus-Connell style reduction, verified by reconstruction."""
    disc = (c4**3 - c6**2) // 1728
    # enumerate candidate scales u with u^4 | c4, u^6 | c6, u^12 | disc
    scales = [1]
    for p in factorize(gcd(abs(c6) or 1, abs(disc) or 1)):
        while True:
            grew = False
            for s in list(scales):
                t = s * p
                if (c4 == 0 or c4 % t**4 == 0) and c6 % t**6 == 0 \
                        and disc % t**12 == 0 and t not in scales:
                    scales.append(t)
                    grew = True
            if not grew:
                break
    for u in sorted(set(scales), reverse=True):
        C4, C6 = c4 // u**4, c6 // u**6
        mdl = _model_from_c4c6(C4, C6)
        if mdl is not None:
            return mdl
    raise RuntimeError("no integral model found")


def _model_from_c4c6(c4: int, c6: int):
    for b2 in range(-5, 7):
        if (b2 * b2 - c4) % 24 or (b2 % 4) not in (0, 1):
            continue
        if (-c6 - b2**3) % 12:
            continue
        b4 = (b2 * b2 - c4) // 24
        if (-b2**3 + 36 * b2 * b4 - c6) % 216:
            continue
        b6 = (-b2**3 + 36 * b2 * b4 - c6) // 216
        a1 = b2 % 2
        a2 = (b2 - a1) // 4
        a3 = b6 % 2
        a6 = (b6 - a3) // 4
        if (b4 - a1 * a3) % 2:
            continue
        a4 = (b4 - a1 * a3) // 2
        M = WeierstrassModel((a1, a2, a3, a4, a6))
        C4, C6 = M.c_invariants()
        if (C4, C6) == (c4, c6):
            return M
    return None


def min_twist_model(base: WeierstrassModel, d: int) -> WeierstrassModel:
    E = base.quadratic_twist(d)
    c4, c6 = E.c_invariants()
    return minimal_model_from_c4c6(int(c4), int(c6))


def search_conductor(N: int, a1a3=((0, 0), (1, 0), (0, 1), (1, 1)),
                     a4range=45, a6range=100):
    """All small integral models of conductor N, grouped by local data."""
    hits = []
    for (a1, a3) in a1a3:
        for a2 in (-1, 0, 1):
            for a4 in range(-a4range, a4range + 1):
                for a6 in range(-a6range, a6range + 1):
                    try:
                        E = WeierstrassModel((a1, a2, a3, a4, a6))
                    except ValueError:
                        continue
                    disc = E.discriminant()
                    if any(p not in factorize(N) for p in factorize(disc)):
                        continue
                    if global_conductor(E) == N:
                        hits.append(E)
    return hits


def main():
    os.makedirs(OUT, exist_ok=True)
    models = {}
    for label, a in KNOWN.items():
        E = WeierstrassModel(a, label=label)
        N = global_conductor(E)
        assert N == EXPECTED_N[label], (label, N)
        models[label] = E
        print(f"{label}: verified N = {N}")
    for label, (base, d) in TWISTS.items():
        E = min_twist_model(models[base], d)
        N = global_conductor(E)
        assert N == EXPECTED_N[label], (label, N, E.a)
        models[label] = WeierstrassModel(E.a, label=label)
        print(f"{label}: twist of {base} by {d} -> {E.a}, N = {N}")

    # searched labels, classified by local data at the relevant prime
    from inertialtypes.classify import classify
    print("searching conductor 162 ...")
    found = search_conductor(162)
    assign_by_type(models, found, 3, {
        "162b1": "ps_3(1,2,3)", "162d1": "sc_3(-1,2,3)",
        "162c2": "ps_3(1,2,3) (x) eps(3)", "162a1": "sc_3(-1,2,3) (x) eps(3)"})
    print("searching conductor 972 ...")
    found = search_conductor(972, a4range=40, a6range=120)
    keep = [E for E in found if local_data(E, 3).f == 5]
    models["972b1"] = pick_fresh_j(models, keep)
    print(f"972b1 := {models['972b1'].a}")
    print("searching conductor 256 ...")
    found = search_conductor(256, a1a3=((0, 0),), a4range=40, a6range=90)
    assign_256(models, found)
    print("searching conductor 768 ...")
    found = search_conductor(768, a1a3=((0, 0),), a4range=60, a6range=130)
    assign_768(models, found)

    with open(os.path.join(OUT, "corpus.jsonl"), "w") as fh:
        fh.write("# golden corpus models; see the build notes in tools/\n")
        for label in EXPECTED_N:
            E = models[label]
            fh.write(json.dumps({"label": label,
                                 "a": [int(c) for c in E.a]}) + "\n")
    print("corpus written")

    from inertialtypes.refdata import build_reference_signatures
    data = build_reference_signatures()
    for key, tbl in data.items():
        print(key, {k: v.count('1') for k, v in tbl.items()})
    print("reference signatures written")


def assign_by_type(models, found, ell, want, allow_extra=False):
    from inertialtypes.classify import classify
    got = {}
    for E in found:
        rep = classify(E, ell)
        name = rep.label.display()
        if name in want.values():
            got.setdefault(name, []).append(E)
    for label, name in want.items():
        cands = got.get(name, [])
        assert cands, f"no model found for {label} ({name})"
        best = min(cands, key=lambda E: (max(abs(int(c)) for c in E.a),
                                         [int(c) for c in E.a]))
        models[label] = WeierstrassModel(best.a, label=label)
        print(f"  {label} := {best.a}  ({name})")


def pick_fresh_j(models, keep):
    from inertialtypes.classify import good_reduction_signature
    sigs = {lbl: good_reduction_signature(models[lbl], 3, 12)
            for lbl in ("243a1", "243b1")}
    fresh = [E for E in keep
             if good_reduction_signature(E, 3, 12) not in sigs.values()]
    assert fresh, "no conductor-972 class with a third signature"
    best = min(fresh, key=lambda E: (max(abs(int(c)) for c in E.a),
                                     [int(c) for c in E.a]))
    return WeierstrassModel(best.a, label="972b1")


def assign_256(models, found):
    """The two CM(-4) classes at 256 are mutual 8-twists realizing
    sc(-4,6,4) and its eps_8 twist; the plain/twisted naming follows the
    frozen reference assignment (see the decisions ledger)."""
    from inertialtypes.classify import good_reduction_signature
    e8 = []
    seen = set()
    for E in found:
        ld = local_data(E, 2)
        if ld.f != 8:
            continue
        key = tuple(int(c) for c in E.a)
        if key in seen:
            continue
        seen.add(key)
        from inertialtypes.classify import semistability_defect
        e = semistability_defect(E, 2, conductor_hint=8)
        if e == 8:
            e8.append(E)
    sigs = {}
    for E in e8:
        sigs.setdefault(good_reduction_signature(E, 2, 8), []).append(E)
    assert len(sigs) == 2, f"expected two e=8 classes at 256, got {len(sigs)}"
    picks = []
    for sig, Es in sorted(sigs.items()):
        best = min(Es, key=lambda E: (max(abs(int(c)) for c in E.a),
                                      [int(c) for c in E.a]))
        picks.append(best)
    picks.sort(key=lambda E: [int(c) for c in E.a])
    models["256c1"] = WeierstrassModel(picks[0].a, label="256c1")
    models["256b1"] = WeierstrassModel(picks[1].a, label="256b1")
    print(f"  256c1 := {picks[0].a}   256b1 := {picks[1].a}")


if __name__ == "__main__":
    main()


def assign_768(models, found):
    """The two ordinary e=4 classes at 768 realize ps(1,4,4) and its
    eps_{-4} twist; plain/twisted naming is a frozen choice (ledger)."""
    from inertialtypes.classify import (good_reduction_signature,
                                        ordinarity_probe,
                                        semistability_defect)
    cands = []
    seen = set()
    for E in found:
        if local_data(E, 2).f != 8:
            continue
        key = tuple(int(c) for c in E.a)
        if key in seen:
            continue
        seen.add(key)
        if semistability_defect(E, 2, conductor_hint=8) != 4:
            continue
        if ordinarity_probe(E, 2, 4) != "ordinary":
            continue
        cands.append(E)
    sigs = {}
    for E in cands:
        sigs.setdefault(good_reduction_signature(E, 2, 4), []).append(E)
    assert len(sigs) == 2, f"expected two ordinary classes, got {len(sigs)}"
    picks = []
    for sig, Es in sorted(sigs.items()):
        best = min(Es, key=lambda E: (max(abs(int(c)) for c in E.a),
                                      [int(c) for c in E.a]))
        picks.append(best)
    picks.sort(key=lambda E: [int(c) for c in E.a])
    models["768b1"] = WeierstrassModel(picks[0].a, label="768b1")
    models["768h1"] = WeierstrassModel(picks[1].a, label="768h1")
    print(f"  768b1 := {picks[0].a}   768h1 := {picks[1].a}")
