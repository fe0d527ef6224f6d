"""Enumeration of totally ramified extensions of Q_2 and Q_3 by isomorphism
class, with a completeness certificate.

Strategy per degree: prime-degree stages are enumerated exactly by Kummer
theory (quadratics) or eigenspace descent (cubics); composite degrees are
assembled as towers over the maximal tame subextension when the wild part
is prime, swept directly over Krasner-truncated Eisenstein polynomials when
it is not (quartics over Q_2), and completed by guided search at degree 8.
Every list is certified exact by the Serre mass identity

    sum over classes L of  1 / (#Aut(L) * q^(d(L) - n + 1))  =  1,

which fails low when a class is missing and high when two entries coincide,
so it is a two-sided check on both completeness and deduplication.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

from .kummer import (cubic_disc, cubic_extensions, ramified_quadratic_stages,
                     KummerSpace)
from .towers import (Elt, FieldTower, INF, find_roots, has_root, poly_eval,
                     poly_derivative, vp, BudgetError, is_square)

SUPPORTED = {2: (2, 3, 4, 6, 8), 3: (2, 3, 4, 6, 12)}


@dataclass
class EnumField:
    """One isomorphism class of totally ramified extensions of Q_p."""

    p: int
    n: int
    poly: tuple        # monic Eisenstein over Z, coefficients c_0..c_n
    disc_v: int        # v_p(disc(L/Q_p))
    aut: int           # #Aut_{Q_p}(L)

    _tower_cache: FieldTower | None = field(default=None, compare=False,
                                            repr=False)

    def tower(self, digits: int | None = None) -> FieldTower:
        if self._tower_cache is None or (
                digits and self._tower_cache.digits < digits):
            base = FieldTower(self.p, digits=digits)
            self._tower_cache = base.extend_eisenstein(
                [int(c) for c in self.poly[:-1]])
        return self._tower_cache

    def line(self, with_aut: bool = True) -> str:
        cs = " ".join(str(c) for c in self.poly)
        base = f"{self.p} {self.n} {self.n} 1 {self.disc_v} : {cs}"
        return f"{base} : {self.aut}" if with_aut else base

    @classmethod
    def from_line(cls, line: str) -> "EnumField":
        parts = line.split(":")
        head, cs = parts[0], parts[1]
        p, n, e, f, c = [int(x) for x in head.split()]
        poly = tuple(int(x) for x in cs.split())
        fld = cls(p, n, poly, c, 0)
        fld.aut = (int(parts[2]) if len(parts) > 2
                   else count_automorphisms(fld))
        return fld


# ----- absolute defining polynomials ----------------------------------------

def flatten_vec(T: FieldTower, vec) -> list[int]:
    if not T.stages:
        return list(vec)

    def rec(v, lv):
        if lv == 0:
            return list(v)
        out = []
        for s in v:
            out.extend(rec(s, lv - 1))
        return out

    return rec(vec, len(T.stages))


def absolute_minpoly(T: FieldTower) -> list[int]:
    """Monic minimal polynomial over Z_p of the top uniformizer (Eisenstein
    for a totally ramified tower), coefficients as centered-lift integers."""
    assert T.f_abs == 1, "absolute minpoly implemented for tot-ram towers"
    n = T.degree
    p, M = T.p, T.digits
    pm = p**M
    pi = T.uniformizer()
    pows = [T.one()]
    for _ in range(n):
        pows.append(pows[-1] * pi)
    cols = [flatten_vec(T, x.vec) for x in pows[:n]]
    target = [(-t) % pm for t in flatten_vec(T, pows[n].vec)]
    # solve sum_j x_j cols[j] = target over Z/p^M; pivot on unit entries
    rows = [[cols[j][i] for j in range(n)] + [target[i]] for i in range(n)]
    perm = list(range(n))
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c] % p), None)
        assert piv is not None, "power basis not unimodular?"
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = pow(rows[c][c], -1, pm)
        rows[c] = [(x * inv) % pm for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [(x - f * y) % pm for x, y in zip(rows[r], rows[c])]
    coeffs = [rows[j][n] for j in range(n)]
    # reduce to small representatives: c_j only matters modulo a modest power
    out = []
    for j, c in enumerate(coeffs):
        keep = p ** min(M, 2 * T.degree + 12)
        c %= keep
        if c > keep // 2:
            c -= keep
        out.append(c)
    return out + [1]


def _int_poly_disc(poly) -> int:
    n = len(poly) - 1
    der = [i * c for i, c in enumerate(poly)][1:]
    m = len(der) - 1
    size = n + m
    S = [[0] * size for _ in range(size)]
    for i in range(m):
        for j, c in enumerate(reversed(poly)):
            S[i][i + j] = c
    for i in range(n):
        for j, c in enumerate(reversed(der)):
            S[m + i][i + j] = c
    return _int_det(S)


def int_poly_disc_val(poly, p: int) -> int:
    """v_p(disc) of a monic integer polynomial via the Sylvester resultant."""
    n = len(poly) - 1
    der = [i * c for i, c in enumerate(poly)][1:]
    m = len(der) - 1
    size = n + m
    S = [[0] * size for _ in range(size)]
    for i in range(m):
        for j, c in enumerate(reversed(poly)):
            S[i][i + j] = c
    for i in range(n):
        for j, c in enumerate(reversed(der)):
            S[m + i][i + j] = c
    det = _int_det(S)
    if det == 0:
        return INF
    return vp(abs(det), p)


def _int_det(M) -> int:
    """Fraction-free Bareiss determinant over Z."""
    A = [row[:] for row in M]
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def count_automorphisms(fld: EnumField) -> int:
    T = fld.tower()
    cap = 2 * fld.disc_v + 2 * fld.n + 6
    roots = find_roots([T.from_int(int(c)) for c in fld.poly], T,
                       depth_cap=cap)
    return len(roots)


def make_field(p: int, n: int, poly) -> EnumField:
    fld = EnumField(p, n, tuple(int(c) for c in poly),
                    int_poly_disc_val([int(c) for c in poly], p), 0)
    fld.aut = count_automorphisms(fld)
    return fld


def field_from_tower(T: FieldTower) -> EnumField:
    poly = absolute_minpoly(T)
    return make_field(T.p, T.degree, poly)


# ----- isomorphism testing ---------------------------------------------------

def _fingerprint(fld: EnumField):
    T = fld.tower()
    p = fld.p
    marks = []
    if p == 2:
        for d in (-1, 2, -2, 5, 10, -5, -10):
            marks.append(is_square(T, T.from_int(d)))
    else:
        for d in (-1, 3, -3):
            marks.append(is_square(T, T.from_int(d)))
    return (fld.disc_v, tuple(marks))


def same_field(a: EnumField, b: EnumField) -> bool:
    if (a.p, a.n, a.disc_v) != (b.p, b.n, b.disc_v):
        return False
    T = b.tower()
    cap = 2 * b.disc_v + 2 * b.n + 6
    return has_root([T.from_int(int(c)) for c in a.poly], T, depth_cap=cap)


def dedupe(fields: list[EnumField]) -> list[EnumField]:
    out: list[EnumField] = []
    buckets: dict = {}
    for f in fields:
        key = _fingerprint(f)
        hit = False
        for g in buckets.get(key, []):
            if same_field(f, g):
                hit = True
                break
        if not hit:
            buckets.setdefault(key, []).append(f)
            out.append(f)
    return out


def mass_total(fields: list[EnumField]) -> Fraction:
    total = Fraction(0)
    for f in fields:
        total += Fraction(1, f.aut * f.p ** (f.disc_v - f.n + 1))
    return total


# ----- per-degree enumeration ------------------------------------------------

def _sweep_eisenstein(p: int, n: int, cmod: int) -> list[EnumField]:
    """Direct Eisenstein sweep with all coefficients modulo p^cmod."""
    import itertools
    pm = p**cmod
    c0s = [p * u for u in range(1, pm // p) if u % p]
    rest = [c for c in range(0, pm, p)]
    fields = []
    seen_polys = set()
    for c0 in c0s:
        for tail in itertools.product(rest, repeat=n - 1):
            poly = (c0,) + tail + (1,)
            if poly in seen_polys:
                continue
            seen_polys.add(poly)
            fields.append(make_field(p, n, poly))
    return dedupe(fields)


def _enum_quadratics(p: int) -> list[EnumField]:
    Q = FieldTower(p)
    out = []
    for coords, stage in ramified_quadratic_stages(Q):
        T = Q.extend_eisenstein(stage)
        out.append(field_from_tower(T))
    return dedupe(out)


def _enum_tame(p: int, n: int) -> list[EnumField]:
    """Tame totally ramified degree n (p does not divide n): x^n - p*u."""
    assert n % p != 0
    out = []
    for u in range(1, p):
        poly = [0] * (n + 1)
        poly[0] = -p * u
        poly[n] = 1
        out.append(make_field(p, n, tuple(poly)))
    return dedupe(out)


def _enum_cubics_q3() -> list[EnumField]:
    Q3 = FieldTower(3)
    out = []
    for c in cubic_extensions(Q3):
        T = Q3.extend_eisenstein(c["stage"])
        f = field_from_tower(T)
        out.append(f)
    return dedupe(out)


def _enum_over_bases(bases: list[EnumField], stage_fn) -> list[EnumField]:
    out = []
    for b in bases:
        T = b.tower()
        for built in stage_fn(T):
            L = T.extend_eisenstein(built)
            out.append(field_from_tower(L))
    return dedupe(out)


def _quartic_sweep_q2() -> list[EnumField]:
    """Complete Krasner-truncated sweep of Eisenstein quartics over Q_2.

    Coefficient precision from v(disc) <= 11: perturbing c_i by valuation
    >= 6 cannot change the field; c_3 is normalized to {0, 2, 4, 6} by the
    translation x -> x + w (w must stay in 2 Z_2 to preserve the Eisenstein
    shape, so only the digits of c_3 above 8 can be removed).
    """
    import itertools
    fields = []
    for c3 in (0, 2, 4, 6):
        for c2 in range(0, 64, 2):
            for c1 in range(0, 64, 2):
                for u in range(1, 32, 2):
                    poly = (2 * u, c1, c2, c3, 1)
                    fields.append(EnumField(2, 4, poly,
                                            int_poly_disc_val(list(poly), 2), 0))
    # group by disc valuation and disc square class, then dedupe by root tests
    def bucket_key(f):
        d = _int_poly_disc(list(f.poly))
        u = d >> f.disc_v
        return (f.disc_v, u % 8)
    fields.sort(key=lambda f: f.disc_v)
    kept: list[EnumField] = []
    buckets: dict = {}
    for f in fields:
        key = bucket_key(f)
        hit = False
        for g in buckets.get(key, []):
            T = g.tower()
            cap = 2 * g.disc_v + 14
            if has_root([T.from_int(c) for c in f.poly], T, depth_cap=cap):
                hit = True
                break
        if not hit:
            f.aut = count_automorphisms(f)
            buckets.setdefault(key, []).append(f)
            kept.append(f)
    return kept


def _octic_candidates_q2(quartics: list[EnumField]) -> list[EnumField]:
    out = []
    for b in quartics:
        T = b.tower()
        for coords, stage in ramified_quadratic_stages(T):
            L = T.extend_eisenstein(stage)
            out.append(field_from_tower(L))
    return dedupe(out)


def _octic_completion_search(kept: list[EnumField], target: Fraction):
    """Mass-driven completion: scan small Eisenstein octics for classes not
    yet in the list until the Serre identity balances."""
    import itertools
    total = mass_total(kept)
    if total == target:
        return kept
    tried = set()
    # sparse pools of increasing size; the missing classes are the primitive
    # octics, which have small discriminant strata and are hit quickly
    pools = [
        [(2 * u, a, b, 0, 0, 0, 0, c, 1)
         for u in (1, 3, 5, 7) for a in (0, 2, 4, 6) for b in (0, 2, 4, 6)
         for c in (0, 2, 4, 6)],
        [(2 * u, a, 0, b, 0, c, 0, d, 1)
         for u in (1, 3, 5, 7) for a in (0, 2, 4, 6) for b in (0, 2, 4)
         for c in (0, 2, 4) for d in (0, 2)],
        [(2 * u, a, b, c, d, e, 0, 0, 1)
         for u in (1, 3) for a in (0, 2, 4, 6) for b in (0, 2, 4, 6)
         for c in (0, 2, 4) for d in (0, 2, 4) for e in (0, 2)],
    ]
    for pool in pools:
        for poly in pool:
            if total == target:
                return kept
            if poly in tried:
                continue
            tried.add(poly)
            cand = EnumField(2, 8, poly, int_poly_disc_val(list(poly), 2), 0)
            if cand.disc_v >= INF:
                continue
            new = True
            for g in kept:
                if g.disc_v != cand.disc_v:
                    continue
                T = g.tower()
                cap = 2 * g.disc_v + 22
                if has_root([T.from_int(c) for c in cand.poly], T,
                            depth_cap=cap):
                    new = False
                    break
            if new:
                cand.aut = count_automorphisms(cand)
                kept.append(cand)
                total = mass_total(kept)
    if total != target:
        raise BudgetError(f"octic completion did not balance: mass {total}")
    return kept


def enumerate_fields(p: int, n: int) -> list[EnumField]:
    """One representative per isomorphism class of totally ramified degree-n
    extensions of Q_p, certified complete by the Serre mass identity."""
    if p not in SUPPORTED or n not in SUPPORTED[p]:
        raise BudgetError(f"(p, n) = ({p}, {n}) outside the supported set")
    if n == 2:
        out = _enum_quadratics(p)
    elif (p, n) == (2, 3):
        out = _enum_tame(2, 3)
    elif (p, n) == (3, 4):
        out = _enum_tame(3, 4)
    elif (p, n) == (3, 3):
        out = _enum_cubics_q3()
    elif (p, n) == (2, 4):
        out = _quartic_sweep_q2()
    elif (p, n) == (2, 6):
        cubics = load_fields(2, 3)
        out = _enum_over_bases(cubics, lambda T: [
            s for _, s in ramified_quadratic_stages(T)])
    elif (p, n) == (3, 6):
        quads = load_fields(3, 2)
        out = _enum_over_bases(quads, lambda T: [
            c["stage"] for c in cubic_extensions(T)])
    elif (p, n) == (3, 12):
        quartics = load_fields(3, 4)
        out = _enum_over_bases(quartics, lambda T: [
            c["stage"] for c in cubic_extensions(T)])
    elif (p, n) == (2, 8):
        quartics = load_fields(2, 4)
        out = _octic_candidates_q2(quartics)
        out = _octic_completion_search(out, Fraction(1))
    else:  # pragma: no cover
        raise BudgetError("unreachable")
    total = mass_total(out)
    if total != 1:
        raise ArithmeticError(
            f"mass identity violated for ({p},{n}): {total} != 1")
    return out


# ----- cache -----------------------------------------------------------------

def cache_dir() -> str:
    d = os.environ.get("INERTIAL_CACHE")
    if not d:
        d = os.path.join(os.path.expanduser("~"), ".cache", "inertialtypes")
    os.makedirs(d, exist_ok=True)
    return d


def _data_path(p, n):
    here = os.path.dirname(__file__)
    return os.path.join(here, "data", f"fields_{p}_{n}.txt")


def load_fields(p: int, n: int, allow_compute: bool = True) -> list[EnumField]:
    """Load the enumerated field list: package data, then cache, then compute
    (and cache)."""
    for path in (_data_path(p, n),
                 os.path.join(cache_dir(), f"fields_{p}_{n}.txt")):
        if os.path.exists(path):
            with open(path) as fh:
                fields = [EnumField.from_line(l) for l in fh
                          if l.strip() and not l.startswith("#")]
            return fields
    if not allow_compute:
        raise FileNotFoundError(f"no cached field list for ({p},{n})")
    fields = enumerate_fields(p, n)
    path = os.path.join(cache_dir(), f"fields_{p}_{n}.txt")
    with open(path, "w") as fh:
        fh.write(f"# totally ramified degree-{n} extensions of Q_{p}\n")
        for f in fields:
            fh.write(f.line() + "\n")
    return fields
