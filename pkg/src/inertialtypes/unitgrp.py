"""Finite abelian groups with certified generators, and the unit groups
(O_K / pi^k)^* of tower fields.

The unit-group presentation follows the usual inductive scheme on the
principal-unit filtration: the graded pieces (1+pi^j)/(1+pi^{j+1}) are
F_q-lines spanned by 1 + u^a pi^j, every principal unit has a canonical
digit expansion over these generators, and the p-th-power relations of the
generators close up the presentation (their relation matrix has determinant
equal to the group order, so they generate the full relation lattice).
Smith normal form turns that into independent generators with certified
orders and an effective discrete logarithm.
"""

from __future__ import annotations

from fractions import Fraction

from .towers import Elt, FieldTower


# ----- integer matrices -----------------------------------------------------

def smith_normal_form(A: list[list[int]]):
    """(D, U, V) with U A V = D, U, V unimodular, diagonal d_1 | d_2 | ...."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [row[:] for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, c):  # row_i += c * row_j
        D[i] = [a + c * b for a, b in zip(D[i], D[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, c):  # col_i += c * col_j
        for row in D:
            row[i] += c * row[j]
        for row in V:
            row[i] += c * row[j]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        while True:
            piv = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (piv is None or abs(D[i][j]) < abs(D[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            if piv != (t, t):
                if piv[0] != t:
                    row_swap(t, piv[0])
                if piv[1] != t:
                    col_swap(t, piv[1])
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    row_op(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    col_op(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        clean = False
            if not clean:
                continue
            # pivot must divide the whole remaining block for d_i | d_{i+1}
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % D[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, 1)
        if t < m and t < n and D[t][t] < 0:
            col_op(t, t, -2)
    return D, U, V


def unimodular_inverse(V: list[list[int]]) -> list[list[int]]:
    n = len(V)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(V)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    out = [[int(M[i][n + j]) for j in range(n)] for i in range(n)]
    return out


class FinAb:
    """Z^r modulo a full-rank relation lattice, with coordinate maps.

    ``coords(digit_vector)`` maps exponents over the presenting generators
    to canonical coordinates in prod Z/d_i (trivial factors dropped).
    """

    def __init__(self, relations: list[list[int]]):
        r = len(relations[0])
        D, U, V = smith_normal_form(relations)
        self.V = V
        self.Vinv = unimodular_inverse(V)
        divs = []
        for i in range(r):
            d = abs(D[i][i]) if i < len(D) else 0
            assert d, "relation lattice not full rank"
            divs.append(d)
        self.all_divs = divs
        self.idx = [i for i, d in enumerate(divs) if d > 1]
        self.orders = [divs[i] for i in self.idx]

    def order(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out

    def coords(self, digits: list[int]) -> tuple[int, ...]:
        w = []
        for i in self.idx:
            w.append(sum(digits[j] * self.V[j][i] for j in range(len(digits)))
                     % self.all_divs[i])
        return tuple(w)

    def gen_exponents(self, i: int) -> list[int]:
        """Exponent vector (over the presenting generators) of SNF gen i."""
        return list(self.Vinv[self.idx[i]])


# ----- unit groups -----------------------------------------------------------

class UnitGroup:
    """(O_T / pi^k)^* with SNF generators, orders, and discrete log."""

    def __init__(self, T: FieldTower, k: int):
        assert k >= 1
        self.T = T
        self.k = k
        R = T.residue
        self.q = R.q
        p, f = T.p, R.m
        # Teichmuller generator of the prime-to-p part
        t0 = T.lift_residue(R.multiplicative_generator())
        while True:
            t1 = t0**self.q
            if t1.same(t0, k):
                break
            t0 = t1
        self.teich = t0
        self._res_log = {}
        cur = R.one
        g = T.residue_of(t0)
        for i in range(self.q - 1):
            self._res_log[cur] = i
            cur = R.mul(cur, g)
        # principal-unit generators 1 + u^a pi^j
        pi = T.uniformizer()
        u_pows = [T.one()]
        if f > 1:
            u = T.unram_gen()
            for _ in range(f - 1):
                u_pows.append(u_pows[-1] * u)
        self.pgens: list[Elt] = []
        self._glayers: list[tuple[int, int]] = []
        pij = pi
        for j in range(1, k):
            for a in range(f):
                self.pgens.append(T.one() + u_pows[a] * pij)
                self._glayers.append((j, a))
            pij = pij * pi
        self.raw_gens = [self.teich] + self.pgens
        r = len(self.raw_gens)
        rels = [[0] * r for _ in range(r)]
        rels[0][0] = self.q - 1
        for idx, g in enumerate(self.pgens, start=1):
            digits = self._peel(g**p)
            row = [-d for d in digits]
            row[idx] += p
            rels[idx] = row
        self.ab = FinAb(rels)
        assert self.ab.order() == (self.q - 1) * self.q ** (k - 1), \
            "unit group order mismatch: relation lattice incomplete"
        self.gens = [self._from_exponents(self.ab.gen_exponents(i))
                     for i in range(len(self.ab.orders))]
        self.orders = list(self.ab.orders)

    # -- internals ------------------------------------------------------

    def _peel(self, x: Elt) -> list[int]:
        """Canonical digit expansion over raw_gens (teich digit first)."""
        T, R, k = self.T, self.T.residue, self.k
        r = T.residue_of(x)
        if r == R.zero:
            raise ZeroDivisionError("not a unit")
        tdig = self._res_log[r]
        c = T.divide(x, self.teich**tdig)
        digits = [tdig] + [0] * len(self.pgens)
        base = 1
        f = R.m
        for j in range(1, k):
            d = c - T.one()
            if d.is_zero(k):
                break
            m = d.val()
            assert m >= j, "filtration peel misordered"
            w = T.residue_of(T.shift_down(d, j)) if m == j else R.zero
            if w != R.zero:
                idx0 = 1 + (j - 1) * f
                acc = T.one()
                for a in range(f):
                    e = w[a]
                    if e:
                        digits[idx0 + a] = e
                        acc = acc * self.pgens[(j - 1) * f + a] ** e
                c = T.divide(c, acc)
        return digits

    def _from_exponents(self, exps: list[int]) -> Elt:
        out = self.T.one()
        for g, e in zip(self.raw_gens, exps):
            if e:
                out = out * (g**e if e > 0 else self.T.unit_inverse(g) ** (-e))
        return out

    # -- public ------------------------------------------------------------

    def order(self) -> int:
        return (self.q - 1) * self.q ** (self.k - 1)

    def dlog(self, x: Elt) -> tuple[int, ...]:
        return self.ab.coords(self._peel(self.T.coerce(x)))

    def element_order(self, x: Elt) -> int:
        from math import gcd
        co = self.dlog(x)
        out = 1
        for c, d in zip(co, self.orders):
            out = out * (d // gcd(c, d)) // gcd(out, d // gcd(c, d))
        return out

    def structure(self) -> list[int]:
        return sorted(self.orders)

    def verify_exhaustive(self, limit: int = 1 << 20) -> bool:
        """Certify the SNF presentation by enumerating the whole group."""
        if self.order() > limit:
            raise ValueError("group too large for exhaustive certification")
        T, k = self.T, self.k
        seen = {T.one().key(k): tuple([0] * len(self.orders))}
        frontier = [(T.one(), tuple([0] * len(self.orders)))]
        for i, (g, d) in enumerate(zip(self.gens, self.orders)):
            new = list(frontier)
            for (x, co) in frontier:
                cur = x
                for e in range(1, d):
                    cur = cur * g
                    co2 = tuple(c + (e if j == i else 0) for j, c in enumerate(co))
                    co2 = tuple(c % dd for c, dd in zip(co2, self.orders))
                    key = cur.key(k)
                    if key in seen:
                        return False
                    seen[key] = co2
                    new.append((cur, co2))
            frontier = new
        return len(seen) == self.order()


class Subquotient:
    """G / <H> for a UnitGroup G and a list of elements generating H."""

    def __init__(self, G: UnitGroup, hgens: list[Elt]):
        self.G = G
        s = len(G.orders)
        rows = [list(G.dlog(h)) for h in hgens]
        for i, d in enumerate(G.orders):
            rows.append([d if j == i else 0 for j in range(s)])
        if not rows:
            rows = [[0] * s]
        self.ab = FinAb(rows) if s else None
        self.orders = list(self.ab.orders) if s else []
        self._sub_order = G.order() // self.order()

    def order(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out

    def subgroup_order(self) -> int:
        return self._sub_order

    def dlog(self, x: Elt) -> tuple[int, ...]:
        return self.ab.coords(list(self.G.dlog(x)))

    def gens(self) -> list[Elt]:
        out = []
        for i in range(len(self.orders)):
            exps = self.ab.gen_exponents(i)
            # exps are over the *ambient SNF generators* of G
            e = self.G.T.one()
            for g, c in zip(self.G.gens, exps):
                if c:
                    e = e * (g**c if c > 0 else self.G.T.unit_inverse(g) ** (-c))
            out.append(e)
        return out

    def contains_in_subgroup(self, x: Elt) -> bool:
        return all(c == 0 for c in self.dlog(x))

    def element_order(self, x: Elt) -> int:
        from math import gcd
        co = self.dlog(x)
        out = 1
        for c, d in zip(co, self.orders):
            t = d // gcd(c, d)
            out = out * t // gcd(out, t)
        return out


def subgroup_invariants(ambient_orders: list[int], gen_coords: list) -> list[int]:
    """Invariant factors (>1) of the subgroup of prod Z/d_i generated by the
    given coordinate vectors: Z^m modulo the kernel lattice of the map."""
    m = len(gen_coords)
    s = len(ambient_orders)
    if m == 0:
        return []
    B = [list(v) for v in gen_coords]
    B += [[d if j == i else 0 for j in range(s)]
          for i, d in enumerate(ambient_orders)]
    D, U, V = smith_normal_form([r[:] for r in B])
    rank = sum(1 for i in range(min(len(B), s)) if D[i][i] != 0)
    L = [U[j][:m] for j in range(rank, len(B))]
    if not L:
        raise AssertionError("subgroup lattice has deficient rank")
    D2, _, _ = smith_normal_form([r[:] for r in L])
    out = []
    for i in range(m):
        d = abs(D2[i][i]) if i < len(D2) and i < len(D2[i]) else 0
        assert d != 0, "subgroup lattice rank deficient"
        out.append(d)
    return sorted(d for d in out if d > 1)
