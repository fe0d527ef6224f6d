"""Exact finite-precision arithmetic in Q_p and its finite extensions.

A field is represented as a tower: an unramified stage (possibly trivial)
followed by Eisenstein stages.  Elements are nested tuples of integers over
the monomial basis {u^a * prod pi_i^{b_i}}; every integer is stored exactly
modulo p^prec, so all computations are exact statements about residues
modulo a power of the uniformizer.

The basis is valuation-triangular: the monomials have pairwise distinct
valuations modulo the ramification index within each p-block, which makes
valuations, canonical reductions mod pi^k, and exact division by the
uniformizer all cheap and certified.
"""

from __future__ import annotations

from .residue import ResidueField, residue_field

INF = 10**9  # valuation of (indistinguishable from) zero


class PrecisionError(ArithmeticError):
    """Raised when a computation would dip below the working precision."""


class BudgetError(RuntimeError):
    """Raised when an enumeration or certification budget is exceeded."""


DEFAULT_DIGITS = 60   # p-digit working precision (spec default, per base prime)
MIN_DIGITS = 10       # below this, raise PrecisionError instead of continuing


def vp(n: int, p: int) -> int:
    """p-adic valuation of an integer (INF for 0)."""
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class FieldTower:
    """A finite extension of Q_p as an explicit unramified + Eisenstein tower.

    Use :meth:`extend_unramified` / :meth:`extend_eisenstein` to build
    extensions; towers are immutable once created.
    """

    def __init__(self, p: int, digits: int | None = None):
        self.p = p
        self.digits = digits if digits is not None else DEFAULT_DIGITS
        self.f_abs = 1
        self.stages: list[dict] = []   # each: {"coeffs": tuple of sub-elts, "e": int}
        self.parent: FieldTower | None = None
        self.residue: ResidueField = residue_field(p, 1)
        self._finish_init()

    # ----- construction -------------------------------------------------

    def _finish_init(self):
        self.e_abs = 1
        for st in self.stages:
            self.e_abs *= st["e"]
        self.degree = self.e_abs * self.f_abs
        self.pmod = self.p**self.digits
        self._inv_cache: dict = {}

    def extend_unramified(self, m: int) -> "FieldTower":
        if self.stages or self.f_abs != 1:
            raise ValueError("unramified stage must come first")
        T = FieldTower.__new__(FieldTower)
        T.p = self.p
        T.digits = self.digits
        T.f_abs = m
        T.stages = []
        T.parent = self
        T.residue = residue_field(self.p, m)
        T._finish_init()
        return T

    def extend_eisenstein(self, coeffs) -> "FieldTower":
        """Extension by x^e + c_{e-1} x^{e-1} + ... + c_0; coeffs = [c_0..c_{e-1}].

        Each c_i is an element of (or int coerced into) this tower; c_0 must
        have valuation exactly 1, the others valuation >= 1.
        """
        cs = tuple(self.coerce(c).vec for c in coeffs)
        e = len(cs)
        if e < 2:
            raise ValueError("Eisenstein stage needs degree >= 2")
        if self.val_vec(cs[0]) != 1:
            raise ValueError("constant coefficient must have valuation exactly 1")
        for c in cs[1:]:
            if self.val_vec(c) < 1:
                raise ValueError("non-constant coefficients must be non-units")
        T = FieldTower.__new__(FieldTower)
        T.p = self.p
        T.digits = self.digits
        T.f_abs = self.f_abs
        T.stages = self.stages + [{"coeffs": cs, "e": e, "sub": self}]
        T.parent = self
        T.residue = self.residue
        T._finish_init()
        return T

    def __repr__(self):
        return f"FieldTower(p={self.p}, e={self.e_abs}, f={self.f_abs})"

    # ----- nested-vector primitives --------------------------------------
    # A "vec" is: an int-tuple of length f_abs at the base, and a tuple of
    # sub-vecs of length e at each Eisenstein stage.  All ints live in
    # [0, p^digits).

    def zero_vec(self, level: int | None = None):
        lv = len(self.stages) if level is None else level
        if lv == 0:
            return (0,) * self.f_abs
        sub = self.zero_vec(lv - 1)
        return (sub,) * self.stages[lv - 1]["e"]

    def int_vec(self, n: int, level: int | None = None):
        lv = len(self.stages) if level is None else level
        if lv == 0:
            return (n % self.pmod,) + (0,) * (self.f_abs - 1)
        sub = self.int_vec(n, lv - 1)
        z = self.zero_vec(lv - 1)
        return (sub,) + (z,) * (self.stages[lv - 1]["e"] - 1)

    def add_vec(self, a, b, level=None):
        lv = len(self.stages) if level is None else level
        if lv == 0:
            pm = self.pmod
            return tuple((x + y) % pm for x, y in zip(a, b))
        return tuple(self.add_vec(x, y, lv - 1) for x, y in zip(a, b))

    def sub_vec(self, a, b, level=None):
        lv = len(self.stages) if level is None else level
        if lv == 0:
            pm = self.pmod
            return tuple((x - y) % pm for x, y in zip(a, b))
        return tuple(self.sub_vec(x, y, lv - 1) for x, y in zip(a, b))

    def neg_vec(self, a, level=None):
        lv = len(self.stages) if level is None else level
        if lv == 0:
            pm = self.pmod
            return tuple((-x) % pm for x in a)
        return tuple(self.neg_vec(x, lv - 1) for x in a)

    def smul_vec(self, n: int, a, level=None):
        lv = len(self.stages) if level is None else level
        if lv == 0:
            pm = self.pmod
            return tuple((n * x) % pm for x in a)
        return tuple(self.smul_vec(n, x, lv - 1) for x in a)

    def _mul_base(self, a, b):
        f, pm = self.f_abs, self.pmod
        if f == 1:
            return ((a[0] * b[0]) % pm,)
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % pm
        mod = self.residue.modulus  # lifted verbatim: small ints
        for i in range(2 * f - 2, f - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(f):
                    prod[i - f + j] = (prod[i - f + j] - c * mod[j]) % pm
        return tuple(prod[:f])

    def mul_vec(self, a, b, level=None):
        lv = len(self.stages) if level is None else level
        if lv == 0:
            return self._mul_base(a, b)
        st = self.stages[lv - 1]
        e = st["e"]
        sub = lambda x, y: self.mul_vec(x, y, lv - 1)
        prod = [self.zero_vec(lv - 1)] * (2 * e - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = self.add_vec(prod[i + j], sub(x, y), lv - 1)
        cs = st["coeffs"]
        for i in range(2 * e - 2, e - 1, -1):
            c = prod[i]
            for j in range(e):
                prod[i - e + j] = self.sub_vec(prod[i - e + j], sub(c, cs[j]), lv - 1)
        return tuple(prod[:e])

    def val_vec(self, a, level=None) -> int:
        """Valuation in uniformizer units of the full tower."""
        lv = len(self.stages) if level is None else level
        if lv == 0:
            v = min(vp(x, self.p) for x in a)
            v = min(v, self.digits)  # cap: beyond precision looks like zero
            return v * self.e_abs if v < self.digits else INF
        e_here = 1
        for st in self.stages[:lv]:
            e_here *= st["e"]
        step = self.e_abs // e_here  # valuation of this stage's uniformizer
        best = INF
        for i, x in enumerate(a):
            v = self.val_vec(x, lv - 1)
            if v < INF:
                best = min(best, v + i * step)
        return best

    # canonical reduction mod pi^k (triangular basis makes this exact)
    def reduce_vec(self, a, k: int, level=None, step=None):
        lv = len(self.stages) if level is None else level
        if step is None:
            step = 1
        if lv == 0:
            d = max(0, min(self.digits, -(-k // self.e_abs)))  # ceil(k/e_abs)
            pd = self.p**d
            return tuple(x % pd if d > 0 else 0 for x in a)
        e_here = 1
        for st in self.stages[:lv]:
            e_here *= st["e"]
        s = self.e_abs // e_here
        return tuple(self.reduce_vec(x, k - i * s, lv - 1) for i, x in enumerate(a))

    # ----- public element API --------------------------------------------

    def coerce(self, x) -> "Elt":
        if isinstance(x, Elt):
            if x.tower is self:
                return x
            # allow lifting from a sub-tower along the construction chain
            if self._is_ancestor(x.tower):
                return Elt(self, self._lift_vec(x.vec, x.tower), x.prec)
            raise TypeError("element of unrelated tower")
        if isinstance(x, int):
            return Elt(self, self.int_vec(x), self.digits)
        raise TypeError(f"cannot coerce {type(x)}")

    def _is_ancestor(self, other: "FieldTower") -> bool:
        t = self
        while t is not None:
            if t is other:
                return True
            t = t.parent
        return False

    def _lift_vec(self, vec, src: "FieldTower"):
        # walk down to src, wrapping vec into position 0 of each stage
        chain = []
        t = self
        while t is not src:
            chain.append(t)
            t = t.parent
        for t in reversed(chain):
            if t.stages and (t.parent is None or len(t.stages) > len(t.parent.stages)):
                e = t.stages[-1]["e"]
                z = t.zero_vec(len(t.stages) - 1)
                vec = (vec,) + (z,) * (e - 1)
            else:
                # unramified extension of the prime field: widen base tuple
                vec = tuple(vec) + (0,) * (t.f_abs - len(vec))
        return vec

    def zero(self):
        return Elt(self, self.zero_vec(), self.digits)

    def one(self):
        return Elt(self, self.int_vec(1), self.digits)

    def from_int(self, n: int):
        return Elt(self, self.int_vec(n), self.digits)

    def uniformizer(self) -> "Elt":
        if not self.stages:
            return self.from_int(self.p)
        lv = len(self.stages)
        sub1 = self.int_vec(1, lv - 1)
        sub0 = self.zero_vec(lv - 1)
        vec = (sub0, sub1) + (sub0,) * (self.stages[-1]["e"] - 2)
        return Elt(self, vec, self.digits)

    def stage_gen(self, i: int) -> "Elt":
        """Uniformizer of Eisenstein stage i (0-based), coerced up."""
        t = self
        while len(t.stages) > i + 1:
            t = t.parent
        return self.coerce(t.uniformizer())

    def unram_gen(self) -> "Elt":
        if self.f_abs == 1:
            raise ValueError("no unramified part")
        vec = self.int_vec(0)
        # set u-coefficient at the base
        def set_u(v, lv):
            if lv == 0:
                return (v[0], 1) + v[2:]
            return (set_u(v[0], lv - 1),) + v[1:]
        return Elt(self, set_u(vec, len(self.stages)), self.digits)

    def residue_of(self, x: "Elt"):
        v = x.vec
        for _ in self.stages:
            v = v[0]
        return tuple(c % self.p for c in v)

    def lift_residue(self, r) -> "Elt":
        vec = self.zero_vec(0)
        vec = tuple(int(c) for c in r) + (0,) * (self.f_abs - len(r))
        for lv in range(1, len(self.stages) + 1):
            z = self.zero_vec(lv - 1)
            vec = (vec,) + (z,) * (self.stages[lv - 1]["e"] - 1)
        return Elt(self, vec, self.digits)

    def residue_reps(self):
        """Lifts of all residue-field elements (Teichmuller not required)."""
        return [self.lift_residue(r) for r in self.residue.elements()]

    # pi-division -----------------------------------------------------------

    def _top_unit_inv(self):
        """Cached inverse of  pi_top^e / pi_sub  (pi_sub = p for one stage)."""
        if "top_unit_inv" in self._inv_cache:
            return self._inv_cache["top_unit_inv"]
        st = self.stages[-1]
        # -(c_0 + c_1 pi + ... + c_{e-1} pi^{e-1}) = pi^e; divide by pi_sub once
        sub: FieldTower = st["sub"]
        coeffs = [Elt(sub, c, self.digits) for c in st["coeffs"]]
        shifted = [sub.shift_down(-c, 1) for c in coeffs]  # each /pi_sub
        vec = tuple(s.vec for s in shifted)
        u = Elt(self, vec, min(s.prec for s in shifted))
        uinv = self.unit_inverse(u)
        self._inv_cache["top_unit_inv"] = uinv
        return uinv

    def shift_down(self, x: "Elt", w: int) -> "Elt":
        """x / pi^w, assuming val(x) >= w (uniformizer of *this* tower)."""
        if w == 0:
            return x
        if w < 0:
            return x * self.uniformizer() ** (-w)
        if x.val() < w:
            raise PrecisionError("inexact division by uniformizer")
        if not self.stages:
            pw = self.p**w
            if x.prec - w < MIN_DIGITS:
                raise PrecisionError("precision exhausted in shift_down")
            vec = tuple((c // pw) % self.pmod for c in x.vec)
            return Elt(self, vec, x.prec - w)
        # validity drops by exactly ceil(w/e) digits; the per-shift loop
        # below is only precision bookkeeping-pessimistic, so fix prec after
        prec_new = min(x.prec, self.digits - 2) - (-(-w // self.e_abs))
        if prec_new < MIN_DIGITS:
            raise PrecisionError("precision exhausted in shift_down")
        st = self.stages[-1]
        e = st["e"]
        sub: FieldTower = st["sub"]
        U0inv = self._top_unit_inv()
        out = x
        q, r = divmod(w, e)
        if q:
            # pi^(e q) = pi_sub^q * U0^q: divide componentwise downstairs
            out = out * U0inv**q
            comps = [sub.shift_down(Elt(sub, v, out.prec), q)
                     for v in out.vec]
            out = Elt(self, tuple(c.vec for c in comps),
                      min(c.prec for c in comps))
        # remaining single shifts: x = c_0 + pi*rest; 1/pi = pi^{e-1}U0inv/pi_sub
        pie1 = self.uniformizer() ** (e - 1)
        for _ in range(r):
            c0 = Elt(sub, out.vec[0], out.prec)
            rest = out.vec[1:] + (self.zero_vec(len(self.stages) - 1),)
            rr = Elt(self, rest, out.prec)
            if sub.val_vec(c0.vec) >= sub.e_abs * min(c0.prec, sub.digits):
                out = rr
                continue
            d = sub.shift_down(c0, 1)
            out = rr + self.coerce(d) * U0inv * pie1
        return Elt(self, out.vec, prec_new)

    # inverses ---------------------------------------------------------------

    def unit_inverse(self, x: "Elt") -> "Elt":
        r = self.residue_of(x)
        if r == self.residue.zero:
            raise ZeroDivisionError("inverse of non-unit")
        y = self.lift_residue(self.residue.inv(r))
        y = Elt(self, y.vec, x.prec)
        two = self.from_int(2)
        # Newton: y <- y(2 - xy); quadratic convergence in pi-adic distance
        need = self.e_abs * x.prec
        good = 1
        while good < need:
            y = y * (two - x * y)
            good *= 2
        return y

    def divide(self, x: "Elt", y: "Elt") -> "Elt":
        w = y.val()
        if w >= INF:
            raise ZeroDivisionError("division by zero")
        u = self.shift_down(y, w)
        return self.shift_down(x * self.unit_inverse(u), w)


class Elt:
    """An element of a FieldTower, exact modulo pi^(e * prec)."""

    __slots__ = ("tower", "vec", "prec")

    def __init__(self, tower: FieldTower, vec, prec: int):
        self.tower = tower
        self.vec = vec
        self.prec = prec

    def _pair(self, other):
        T = self.tower
        o = T.coerce(other)
        return o

    def __add__(self, other):
        o = self._pair(other)
        return Elt(self.tower, self.tower.add_vec(self.vec, o.vec), min(self.prec, o.prec))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._pair(other)
        return Elt(self.tower, self.tower.sub_vec(self.vec, o.vec), min(self.prec, o.prec))

    def __rsub__(self, other):
        o = self._pair(other)
        return Elt(self.tower, self.tower.sub_vec(o.vec, self.vec), min(self.prec, o.prec))

    def __neg__(self):
        return Elt(self.tower, self.tower.neg_vec(self.vec), self.prec)

    def __mul__(self, other):
        if isinstance(other, int):
            return Elt(self.tower, self.tower.smul_vec(other, self.vec), self.prec)
        o = self._pair(other)
        return Elt(self.tower, self.tower.mul_vec(self.vec, o.vec), min(self.prec, o.prec))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        T = self.tower
        if n < 0:
            return T.unit_inverse(self) ** (-n)
        r = Elt(T, T.int_vec(1), self.prec)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def val(self) -> int:
        return self.tower.val_vec(self.vec)

    def is_zero(self, k: int | None = None) -> bool:
        """Indistinguishable from 0 (optionally: modulo pi^k)."""
        v = self.val()
        if k is not None:
            return v >= k
        return v >= self.tower.e_abs * min(self.prec, self.tower.digits)

    def same(self, other, k: int | None = None) -> bool:
        o = self.tower.coerce(other)
        return (self - o).is_zero(k)

    def key(self, k: int) -> tuple:
        """Canonical hashable form of this element modulo pi^k."""
        return self.tower.reduce_vec(self.vec, k)

    def residue(self):
        return self.tower.residue_of(self)

    def __repr__(self):
        return f"Elt({self.vec!r} @prec {self.prec})"


# ----- polynomial helpers over a tower ------------------------------------

def poly_eval(coeffs: list, x: Elt) -> Elt:
    """Evaluate sum coeffs[i] x^i by Horner; coeffs are Elt/int."""
    T = x.tower
    acc = T.coerce(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * x + T.coerce(c)
    return acc


def poly_derivative(coeffs: list, T: FieldTower) -> list:
    return [T.coerce(c) * i for i, c in enumerate(coeffs)][1:]


def hensel_root(coeffs: list, seed: Elt, target_val: int | None = None) -> Elt:
    """Newton-lift a simple root from an approximation.

    Requires val(f(seed)) > 2 val(f'(seed)); raises ValueError otherwise
    (the hensel-condition-failed case) and PrecisionError when the working
    precision cannot certify the condition.
    """
    T = seed.tower
    cs = [T.coerce(c) for c in coeffs]
    der = poly_derivative(cs, T)
    x = seed
    fx = poly_eval(cs, x)
    dfx = poly_eval(der, x)
    t = dfx.val()
    if t >= INF:
        raise ValueError("hensel-condition-failed: derivative vanishes")
    if fx.val() <= 2 * t:
        raise ValueError("hensel-condition-failed")
    cap = T.e_abs * min(x.prec, T.digits)
    goal = cap if target_val is None else min(target_val, cap)
    last = fx.val()
    while last < goal:
        x = x - T.divide(fx, dfx)
        fx = poly_eval(cs, x)
        dfx = poly_eval(der, x)
        if fx.val() <= last:
            break  # stalled at the precision ceiling; x is as good as it gets
        last = fx.val()
    return x


def find_roots(coeffs: list, T: FieldTower, max_count: int | None = None,
               depth_cap: int | None = None) -> list[Elt]:
    """All roots in O_T of a squarefree polynomial.

    Newton-polygon style isolation: residue roots of multiplicity one are
    Hensel-lifted; multiple residue roots are followed into the subdisk by
    the shift-and-rescale g(s + pi y), so the search tree only ever tracks
    genuine root clusters.  ``depth_cap`` bounds the recursion depth.
    """
    cs = [T.coerce(c) for c in coeffs]
    cap = depth_cap if depth_cap is not None else (T.e_abs * T.digits) // 2
    R = T.residue
    pi = T.uniformizer()
    roots: list[Elt] = []
    seen: set = set()

    def note(r: Elt):
        key = r.key(min(cap + 2, T.e_abs * (T.digits - 2)))
        if key not in seen:
            seen.add(key)
            roots.append(r)

    def residue_poly(g):
        return [T.residue_of(c) for c in g]

    def rec(g, center: Elt, k: int):
        if max_count and len(roots) >= max_count:
            return
        if k > cap:
            raise PrecisionError("root isolation exceeded depth cap")
        gr = residue_poly(g)
        if all(c == R.zero for c in gr):
            raise PrecisionError("root isolation lost precision (content)")
        der = poly_derivative(g, T)
        for s in R.elements():
            # evaluate residue poly and its multiplicity at s
            val = R.zero
            for c in reversed(gr):
                val = R.add(R.mul(val, s), c)
            if val != R.zero:
                continue
            sl = T.lift_residue(s)
            gs = poly_eval(g, sl)
            dgs = poly_eval(der, sl)
            if dgs.val() == 0:
                # simple residue root: Hensel converges on g
                r = hensel_root(g, sl)
                note(center + pi**k * r)
                if max_count and len(roots) >= max_count:
                    return
                continue
            # multiple residue root: recurse into the subdisk s + pi*y
            h = _taylor_shift(g, sl, T)
            hp = []
            m = min(c.val() + i for i, c in enumerate(h) if c.val() < INF)
            for i, c in enumerate(h):
                hp.append(T.shift_down(c * pi**i, m))
            rec(hp, center + pi**k * sl, k + 1)

    rec(cs, T.zero(), 0)
    return roots


def _taylor_shift(g, s: Elt, T: FieldTower):
    """Coefficients of g(s + x) by repeated synthetic division by (x - s)."""
    work = [T.coerce(c) for c in g]
    out = []
    while work:
        bs = []
        acc = None
        for c in reversed(work):  # leading coefficient first
            acc = c if acc is None else acc * s + c
            bs.append(acc)
        out.append(bs[-1])                      # remainder work(s)
        work = list(reversed(bs[:-1]))          # quotient
    return out


def has_root(coeffs: list, T: FieldTower, depth_cap: int | None = None) -> bool:
    return bool(find_roots(coeffs, T, max_count=1, depth_cap=depth_cap))


# ----- homomorphisms, conjugation, norms -----------------------------------

class TowerHom:
    """Ring homomorphism of a tower determined by images of the generators.

    ``base_image`` is the image of the unramified generator (None when the
    residue field is prime); ``stage_images[i]`` is the image of the stage-i
    uniformizer.  ``check()`` verifies the defining relations at working
    precision.
    """

    def __init__(self, T: FieldTower, base_image: Elt | None, stage_images: list):
        self.T = T
        self.base_image = base_image
        self.stage_images = [T.coerce(s) for s in stage_images]
        self._pows = []
        for i, st in enumerate(T.stages):
            img = self.stage_images[i]
            pw = [T.one()]
            for _ in range(st["e"] - 1):
                pw.append(pw[-1] * img)
            self._pows.append(pw)
        if base_image is not None:
            f = T.f_abs
            bi = T.coerce(base_image)
            self._bpows = [T.one()]
            for _ in range(f - 1):
                self._bpows.append(self._bpows[-1] * bi)

    def __call__(self, x) -> Elt:
        T = self.T
        x = T.coerce(x)

        def rec(vec, lv):
            if lv == 0:
                if T.f_abs == 1:
                    return Elt(T, T.int_vec(vec[0]), T.digits)
                acc = T.zero()
                for a, c in enumerate(vec):
                    if c:
                        acc = acc + self._bpows[a] * c
                return acc
            acc = T.zero()
            for i, sub in enumerate(vec):
                acc = acc + rec(sub, lv - 1) * self._pows[lv - 1][i]
            return acc

        out = rec(x.vec, len(T.stages))
        return Elt(T, out.vec, min(x.prec, out.prec))

    def check(self) -> bool:
        T = self.T
        ok = True
        if self.base_image is not None:
            mod = [T.from_int(c) for c in T.residue.modulus]
            ok = ok and poly_eval(mod, self.base_image).is_zero()
        for i, st in enumerate(T.stages):
            coeffs = [self(Elt(T, T._lift_vec(c, st["sub"]), T.digits))
                      for c in st["coeffs"]]
            ok = ok and poly_eval(coeffs + [T.one()], self.stage_images[i]).is_zero()
        return ok


def quadratic_conj(T: FieldTower) -> TowerHom:
    """The nontrivial automorphism of a quadratic tower over its subfield.

    Supports the two shapes used here: an unramified quadratic stage
    (conjugation sends u to the other root of the residue modulus) and a
    quadratic Eisenstein top stage (pi -> -c1 - pi).
    """
    if T.stages and T.stages[-1]["e"] == 2:
        st = T.stages[-1]
        c1 = Elt(T, T._lift_vec(st["coeffs"][1], st["sub"]), T.digits)
        images = [T.stage_gen(i) for i in range(len(T.stages) - 1)]
        images.append(-c1 - T.uniformizer())
        base = T.unram_gen() if T.f_abs > 1 else None
        h = TowerHom(T, base, images)
    elif not T.stages and T.f_abs == 2:
        c1 = T.from_int(T.residue.modulus[1])
        h = TowerHom(T, -c1 - T.unram_gen(), [])
    else:
        raise ValueError("not a quadratic tower shape handled here")
    assert h.check()
    return h


def frobenius_hom(T: FieldTower) -> TowerHom:
    """Frobenius lift on a tower whose Eisenstein data is Frobenius-stable.

    The unramified generator goes to the root of the residue modulus that
    reduces to u^p; all stage uniformizers are fixed.  ``check()`` certifies
    that this is in fact a homomorphism (it fails if a stage polynomial has
    non-rational coefficients that are moved by Frobenius).
    """
    if T.f_abs == 1:
        return TowerHom(T, None, [T.stage_gen(i) for i in range(len(T.stages))])
    u = T.unram_gen()
    target = T.residue.pow(T.residue_of(u), T.p)
    mod = [c for c in T.residue.modulus]
    seed = T.lift_residue(target)
    img = hensel_root([T.from_int(c) for c in mod], seed)
    h = TowerHom(T, img, [T.stage_gen(i) for i in range(len(T.stages))])
    assert h.check(), "Frobenius does not stabilize this tower"
    return h


def norm_via_conj(T: FieldTower, x, conj: TowerHom | None = None) -> Elt:
    """Norm of x down one quadratic stage, as an element of the subtower."""
    x = T.coerce(x)
    conj = conj or quadratic_conj(T)
    prod = x * conj(x)
    if T.stages and T.stages[-1]["e"] == 2:
        sub: FieldTower = T.stages[-1]["sub"]
        hi = Elt(sub, prod.vec[1], prod.prec)
        if not hi.is_zero():
            raise PrecisionError("norm did not land in the subfield")
        return Elt(sub, prod.vec[0], prod.prec)
    # unramified quadratic over Q_p: constant coefficient of the base pair
    if prod.vec[1] % T.p**max(MIN_DIGITS, prod.prec - 2) != 0:
        raise PrecisionError("norm did not land in the base")
    base = T.parent
    return Elt(base, (prod.vec[0],), prod.prec)


def stage_norm(T: FieldTower, x) -> Elt:
    """Norm of x down the top Eisenstein stage (degree <= 4): determinant
    of the multiplication-by-x matrix over the subtower."""
    st = T.stages[-1]
    e = st["e"]
    sub: FieldTower = st["sub"]
    x = T.coerce(x)
    cols = []
    pi = T.uniformizer()
    cur = x
    for j in range(e):
        cols.append([Elt(sub, cur.vec[i], cur.prec) for i in range(e)])
        cur = cur * pi
    def det(mat):
        n = len(mat)
        if n == 1:
            return mat[0][0]
        acc = None
        for i in range(n):
            minor = [row[1:] for k, row in enumerate(mat) if k != i]
            term = mat[i][0] * det(minor)
            if i % 2:
                term = -term
            acc = term if acc is None else acc + term
        return acc
    rows = [[cols[j][i] for j in range(e)] for i in range(e)]
    return det(rows)


# ----- square and cube classes ---------------------------------------------

def sqrt_unit(T: FieldTower, x) -> tuple:
    """Classify a unit modulo squares; constructive.

    Returns ("square", y) with y^2 = x; ("unram", y, c) when x = y^2 c and
    K(sqrt c) is the unramified quadratic extension; ("ram", m, y, c) when
    K(sqrt c)|K is ramified with c = 1 + (level-m part) for odd m < 2 v(2)
    (p = 2), or c a non-square residue representative (p odd).
    """
    x = T.coerce(x)
    if x.val() != 0:
        raise ValueError("sqrt_unit expects a unit")
    R = T.residue
    if T.p != 2:
        r = T.residue_of(x)
        if not R.is_square(r):
            return ("unram", T.one(), x)
        seed = T.lift_residue(R.sqrt(r))
        y = hensel_root([-x, T.zero(), T.one()], seed)
        return ("square", y)
    e = T.e_abs
    y = T.one()
    c = x
    r = T.residue_of(c)
    s = T.lift_residue(R.sqrt(r))
    y = y * s
    c = T.divide(c, s * s)
    pi = T.uniformizer()
    while True:
        d = c - T.one()
        m = d.val()
        if m >= 2 * e + 1 or m >= INF:
            z = hensel_root([-c, T.zero(), T.one()], T.one())
            return ("square", y * z)
        if m % 2 == 0 and m < 2 * e:
            w = T.residue_of(T.shift_down(d, m))
            s = T.lift_residue(R.sqrt(w))
            t = T.one() + pi ** (m // 2) * s
            y = y * t
            c = T.divide(c, t * t)
            continue
        if m % 2 == 1 and m < 2 * e:
            return ("ram", m, y, c)
        # m == 2e: Artin-Schreier boundary  d0^2 + u0 d0 = w  over the residue
        w = T.residue_of(T.shift_down(d, 2 * e))
        u0 = T.residue_of(T.shift_down(T.from_int(2), e))
        sol = None
        for cand in R.elements():
            if R.add(R.mul(cand, cand), R.mul(u0, cand)) == w:
                sol = cand
                break
        if sol is None:
            return ("unram", y, c)
        t = T.one() + pi**e * T.lift_residue(sol)
        y = y * t
        c = T.divide(c, t * t)


def is_square(T: FieldTower, x) -> bool:
    x = T.coerce(x)
    v = x.val()
    if v >= INF:
        raise PrecisionError("square test of (apparent) zero")
    if v % 2:
        return False
    u = T.shift_down(x, v)
    return sqrt_unit(T, u)[0] == "square"


def sqrt(T: FieldTower, x) -> Elt:
    x = T.coerce(x)
    v = x.val()
    if v % 2:
        raise ValueError("odd valuation: no square root")
    u = T.shift_down(x, v)
    kind, *rest = sqrt_unit(T, u)
    if kind != "square":
        raise ValueError("not a square")
    return rest[0] * T.uniformizer() ** (v // 2)


def cbrt_unit(T: FieldTower, x) -> tuple:
    """Classify a unit modulo cubes over a 3-adic tower containing zeta_3.

    Returns ("cube", y) with y^3 = x; ("unram", y, c) for the unramified
    cubic direction; ("ram", m, y, c) with 3 not dividing m < 3 v(3)/2.
    """
    assert T.p == 3
    x = T.coerce(x)
    if x.val() != 0:
        raise ValueError("cbrt_unit expects a unit")
    e = T.e_abs
    R = T.residue
    y = T.lift_residue(R.cbrt(T.residue_of(x)))
    c = T.divide(x, y**3)
    pi = T.uniformizer()
    while True:
        d = c - T.one()
        m = d.val()
        if 2 * m > 3 * e or m >= INF:
            if m <= 2 * e:
                # linear zone: strip via 3*delta with delta = pi^(m-e) d0
                w = T.residue_of(T.shift_down(d, m))
                u0 = T.residue_of(T.shift_down(T.from_int(3), e))
                d0 = R.mul(w, R.inv(u0))
                t = T.one() + pi ** (m - e) * T.lift_residue(d0)
                y = y * t
                c = T.divide(c, t**3)
                continue
            z = hensel_root([-c, T.zero(), T.zero(), T.one()], T.one())
            return ("cube", y * z)
        if 2 * m == 3 * e:
            # boundary: d0^3 + u0 d0 = w  (additive in char 3)
            w = T.residue_of(T.shift_down(d, m))
            u0 = T.residue_of(T.shift_down(T.from_int(3), e))
            sol = None
            for cand in R.elements():
                lhs = R.add(R.mul(R.mul(cand, cand), cand), R.mul(u0, cand))
                if lhs == w:
                    sol = cand
                    break
            if sol is None:
                return ("unram", y, c)
            t = T.one() + pi ** (m - e) * T.lift_residue(sol)
            y = y * t
            c = T.divide(c, t**3)
            continue
        if m % 3 == 0:
            w = T.residue_of(T.shift_down(d, m))
            s = T.lift_residue(R.cbrt(w))
            t = T.one() + pi ** (m // 3) * s
            y = y * t
            c = T.divide(c, t**3)
            continue
        return ("ram", m, y, c)
