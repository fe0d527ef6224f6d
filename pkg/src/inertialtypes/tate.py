"""Tate's algorithm over Q_ell and over tower fields with small residue field.

The implementation follows the classical step structure; every "after a
suitable translation" clause is realized by enumerating residue-field
representatives, which is cheap here (q <= 9 in all additive-reduction uses)
and avoids case splits on the residue characteristic.  Conductor exponents
come out of the Ogg-Saito relation f = v(disc_min) - (components - 1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .curves import WeierstrassModel
from .towers import Elt, FieldTower, INF, vp


@dataclass(frozen=True)
class LocalData:
    kodaira: str                 # "I0", "I5", "II", ..., "I2*", "II*"
    f: int                       # conductor exponent
    vdisc: int                   # valuation of the minimal discriminant
    reduction: str               # good | multiplicative | additive
    potential: str               # good | multiplicative
    minimal_model: tuple         # a-invariants of the model reached (local)
    tower: FieldTower | None = None

    @property
    def n(self) -> int | None:
        k = self.kodaira
        if k.startswith("I") and k not in ("II", "III", "IV", "II*", "III*", "IV*"):
            core = k[1:-1] if k.endswith("*") else k[1:]
            return int(core) if core else None
        return None


_COMPONENTS = {"I0": 1, "II": 1, "III": 2, "IV": 3, "I0*": 5,
               "IV*": 7, "III*": 8, "II*": 9}


class NotGoodReduction(ValueError):
    pass


def _quad_roots(R, b, c):
    """Roots in R of Y^2 + bY + c, with multiplicity flag.

    Returns (distinct: bool, double_root or None). distinct means distinct
    over the algebraic closure.
    """
    if R.p == 2:
        if b == R.zero:
            return False, R.sqrt(c)
        return True, None
    disc = R.sub(R.mul(b, b), R.mul(R.elt(4), c))
    if disc == R.zero:
        inv2 = R.inv(R.elt(2))
        return False, R.neg(R.mul(b, inv2))
    return True, None


def _quad_roots_general(R, a, b, c):
    """Same for a Y^2 + b Y + c with a a unit."""
    ai = R.inv(a)
    return _quad_roots(R, R.mul(b, ai), R.mul(c, ai))


def local_data(E: WeierstrassModel, T_or_ell) -> LocalData:
    """Reduction data of E at a prime (ell >= 5 fast path) or over a tower."""
    if isinstance(T_or_ell, int):
        ell = T_or_ell
        if ell >= 5:
            return _local_data_large_p(E, ell)
        T = FieldTower(ell)
    else:
        T = T_or_ell
    return _tate_tower(E, T)


def _local_data_large_p(E: WeierstrassModel, p: int) -> LocalData:
    """Valuation-table version for residue characteristic >= 5."""
    c4, c6 = E.c_invariants()
    disc = E.discriminant()
    v4, v6, vd = vp(c4, p), vp(c6, p), vp(disc, p)
    while v4 >= 4 and v6 >= 6 and vd >= 12:
        v4, v6, vd = v4 - 4, v6 - 6, vd - 12
    pot = "good" if 3 * v4 >= vd else "multiplicative"
    if vd == 0:
        kod, f, red = "I0", 0, "good"
    elif v4 == 0:
        kod, f, red = f"I{vd}", 1, "multiplicative"
    else:
        red = "additive"
        f = 2
        if vd == 2:
            kod = "II"
        elif vd == 3:
            kod = "III"
        elif vd == 4:
            kod = "IV"
        elif vd == 6:
            kod = "I0*"
        elif v4 == 2 and vd > 6:
            kod = f"I{vd - 6}*"
        elif vd == 8:
            kod = "IV*"
        elif vd == 9:
            kod = "III*"
        elif vd == 10:
            kod = "II*"
        else:
            raise AssertionError(f"impossible valuations at p>=5: {v4},{v6},{vd}")
    # minimal model is not materialized on the fast path; keep invariants only
    return LocalData(kod, f, vd, red, pot, E.a, None)


def _tate_tower(E: WeierstrassModel, T: FieldTower) -> LocalData:
    R = T.residue
    if R.q > 81:
        raise ValueError("residue field too large for the scan-based Tate loop")
    a = [T.coerce(int(c)) if E.tower is None else T.coerce(c) for c in E.a]
    pi = T.uniformizer()
    reps = T.residue_reps()

    def invs(a1, a2, a3, a4, a6):
        b2 = a1 * a1 + 4 * a2
        b4 = a1 * a3 + 2 * a4
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        return b2, b4, b6, b8, disc

    def translate(a1, a2, a3, a4, a6, r, s, t):
        A1 = a1 + 2 * s
        A2 = a2 - s * a1 + 3 * r - s * s
        A3 = a3 + r * a1 + 2 * t
        A4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
        A6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
        return [A1, A2, A3, A4, A6]

    while True:
        a1, a2, a3, a4, a6 = a
        b2, b4, b6, b8, disc = invs(*a)
        n = disc.val()
        if n >= INF:
            raise ValueError("discriminant is zero at working precision")
        if n == 0:
            return _finish(T, "I0", 0, 0, a)
        # move the singular point of the reduction to the origin
        sing = _singular_point(T, a)
        if sing is not None:
            r0, t0 = sing
            a = translate(*a, T.lift_residue(r0), T.zero(), T.lift_residue(t0))
            a1, a2, a3, a4, a6 = a
            b2, b4, b6, b8, disc = invs(*a)
        c4 = b2 * b2 - 24 * b4
        if c4.val() == 0:
            return _finish(T, f"I{n}", 1, n, a)
        if a6.val() < 2:
            return _finish(T, "II", n, n, a)
        if b8.val() < 3:
            return _finish(T, "III", n - 1, n, a)
        if b6.val() < 3:
            return _finish(T, "IV", n - 2, n, a)
        # normalize: pi | a1,a2 ; pi^2 | a3,a4 ; pi^3 | a6
        a = _step6_normalize(T, a, translate, reps, pi)
        a1, a2, a3, a4, a6 = a
        # P(t) = t^3 + a21 t^2 + a42 t + a63 over the residue field
        a21 = T.residue_of(T.shift_down(a2, 1))
        a42 = T.residue_of(T.shift_down(a4, 2))
        a63 = T.residue_of(T.shift_down(a6, 3))
        mult = _cubic_root_multiplicities(R, a21, a42, a63)
        if mult == "distinct":
            return _finish(T, "I0*", n - 4, n, a)
        kind, root = mult
        a = translate(*a, pi * T.lift_residue(root), T.zero(), T.zero())
        a1, a2, a3, a4, a6 = a
        if kind == "double":
            # subprocedure for I_m*
            m = 1
            vx, vy = 2, 2
            while True:
                a2t = T.residue_of(T.shift_down(a2, 1))
                a3t = T.residue_of(T.shift_down(a3, vy))
                a6t = T.residue_of(T.shift_down(a6, vx + vy))
                distinct, dbl = _quad_roots(R, a3t, R.neg(a6t))
                if distinct:
                    return _finish(T, f"I{m}*", n - 4 - m, n, a)
                a = translate(*a, T.zero(), T.zero(),
                              pi**vy * T.lift_residue(dbl))
                a1, a2, a3, a4, a6 = a
                m += 1
                vy += 1
                a4t = T.residue_of(T.shift_down(a4, vx + 1))
                a6t = T.residue_of(T.shift_down(a6, vx + vy))
                distinct, dbl = _quad_roots_general(R, a2t, a4t, a6t)
                if distinct:
                    return _finish(T, f"I{m}*", n - 4 - m, n, a)
                a = translate(*a, pi**vx * T.lift_residue(dbl),
                              T.zero(), T.zero())
                a1, a2, a3, a4, a6 = a
                m += 1
                vx += 1
        # triple root at the origin now: pi^2 | a2, pi^3 | a4
        a32 = T.residue_of(T.shift_down(a3, 2))
        a64 = T.residue_of(T.shift_down(a6, 4))
        distinct, dbl = _quad_roots(R, a32, R.neg(a64))
        if distinct:
            return _finish(T, "IV*", n - 6, n, a)
        a = translate(*a, T.zero(), T.zero(), pi**2 * T.lift_residue(dbl))
        a1, a2, a3, a4, a6 = a
        if a4.val() < 4:
            return _finish(T, "III*", n - 7, n, a)
        if a6.val() < 6:
            return _finish(T, "II*", n - 8, n, a)
        # non-minimal: rescale by pi and iterate
        a = [T.shift_down(ai, w) for ai, w in zip(a, (1, 2, 3, 4, 6))]


def _finish(T, kod, f, vdisc, a):
    red = ("good" if kod == "I0"
           else "multiplicative" if kod.startswith("I") and not kod.endswith("*")
           and kod not in ("II", "III", "IV") else "additive")
    # potential kind from v(j) of the final model
    b2 = a[0] * a[0] + 4 * a[1]
    b4 = a[0] * a[2] + 2 * a[3]
    c4 = b2 * b2 - 24 * b4
    b6 = a[2] * a[2] + 4 * a[4]
    b8 = (a[0] * a[0] * a[4] + 4 * a[1] * a[4] - a[0] * a[2] * a[3]
          + a[1] * a[2] * a[2] - a[3] * a[3])
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    vj = 3 * c4.val() - disc.val()
    pot = "good" if vj >= 0 else "multiplicative"
    return LocalData(kod, f, vdisc, red, pot, tuple(a), T)


def _singular_point(T, a):
    R = T.residue
    a1, a2, a3, a4, a6 = [T.residue_of(c) for c in a]
    for x in R.elements():
        # partial F_x = a1 y - (3x^2 + 2 a2 x + a4); F_y = 2y + a1 x + a3
        for y in R.elements():
            x2 = R.mul(x, x)
            F = R.sub(R.add(R.mul(y, y), R.add(R.mul(R.mul(a1, x), y), R.mul(a3, y))),
                      R.add(R.add(R.mul(x2, x), R.mul(a2, x2)),
                            R.add(R.mul(a4, x), a6)))
            if F != R.zero:
                continue
            Fy = R.add(R.add(R.mul(R.elt(2), y), R.mul(a1, x)), a3)
            if Fy != R.zero:
                continue
            Fx = R.sub(R.mul(a1, y),
                       R.add(R.add(R.mul(R.elt(3), x2), R.mul(R.mul(R.elt(2), a2), x)),
                             a4))
            if Fx == R.zero:
                return (x, y)
    return None


def _step6_normalize(T, a, translate, reps, pi):
    """Search residue representatives (s, t0, t1) so that after
    (0, s, t0 + pi t1):  pi | a1, a2;  pi^2 | a3, a4;  pi^3 | a6."""
    for s in reps:
        a_s = translate(*a, T.zero(), s, T.zero())
        if a_s[0].val() < 1 or a_s[1].val() < 1:
            continue
        for t0 in reps:
            for t1 in reps:
                t = t0 + pi * t1
                cand = translate(*a_s, T.zero(), T.zero(), t)
                if (cand[2].val() >= 2 and cand[3].val() >= 2
                        and cand[4].val() >= 3):
                    return cand
    raise AssertionError("step-6 normalization not found (non-integral input?)")


def _cubic_root_multiplicities(R, c2, c1, c0):
    """Root structure of t^3 + c2 t^2 + c1 t + c0 over the residue field:
    "distinct", ("double", root) or ("triple", root)."""
    def P(t):
        t2 = R.mul(t, t)
        return R.add(R.add(R.mul(t2, t), R.mul(c2, t2)),
                     R.add(R.mul(c1, t), c0))
    roots = [t for t in R.elements() if P(t) == R.zero]
    # multiplicity via derivative 3t^2 + 2 c2 t + c1 and second derivative
    def Pp(t):
        return R.add(R.add(R.mul(R.elt(3), R.mul(t, t)),
                           R.mul(R.mul(R.elt(2), c2), t)), c1)
    mult_roots = [t for t in roots if Pp(t) == R.zero]
    if not mult_roots:
        return "distinct"
    t = mult_roots[0]
    # triple iff P = (X - t)^3, i.e. coefficient match
    trip = (R.add(c2, R.mul(R.elt(3), t)) == R.zero
            and R.sub(c1, R.mul(R.elt(3), R.mul(t, t))) == R.zero)
    if trip:
        return ("triple", t)
    return ("double", t)


def components(kodaira: str) -> int:
    if kodaira in _COMPONENTS:
        return _COMPONENTS[kodaira]
    if kodaira.endswith("*"):
        return 5 + int(kodaira[1:-1])
    return int(kodaira[1:])


def good_reduction_trace(E: WeierstrassModel, T: FieldTower) -> int:
    """a_q = q + 1 - #E~(k) by exhaustive point count over the residue field."""
    ld = _tate_tower(E, T)
    if ld.reduction != "good":
        raise NotGoodReduction("curve does not have good reduction here")
    R = T.residue
    a1, a2, a3, a4, a6 = [T.residue_of(T.coerce(c)) for c in ld.minimal_model]
    count = 1  # point at infinity
    for x in R.elements():
        x2 = R.mul(x, x)
        rhs = R.add(R.add(R.mul(x2, x), R.mul(a2, x2)), R.add(R.mul(a4, x), a6))
        lin = R.add(R.mul(a1, x), a3)
        for y in R.elements():
            if R.add(R.mul(y, y), R.mul(lin, y)) == rhs:
                count += 1
    return R.q + 1 - count


def is_potentially_multiplicative(E: WeierstrassModel, ell: int) -> bool:
    return E.j_valuation(ell) < 0
