"""Weierstrass models, standard invariants, quadratic twists, base change,
and the 3-division polynomial."""

from __future__ import annotations

from dataclasses import dataclass

from .towers import Elt, FieldTower


class SingularModelError(ValueError):
    pass


def squarefree_part(d: int) -> int:
    """Sign times the product of primes dividing d to odd multiplicity."""
    if d == 0:
        raise ValueError("zero has no square class")
    sign = -1 if d < 0 else 1
    d = abs(d)
    out = 1
    f = 2
    while f * f <= d:
        e = 0
        while d % f == 0:
            d //= f
            e += 1
        if e % 2:
            out *= f
        f += 1
    return sign * out * d


@dataclass(frozen=True)
class WeierstrassModel:
    """[a1, a2, a3, a4, a6] over Z (tower=None) or over a FieldTower."""

    a: tuple
    tower: FieldTower | None = None
    label: str | None = None

    def __post_init__(self):
        if self.tower is None and self.discriminant() == 0:
            raise SingularModelError(f"singular model {self.a}")

    # -- invariants -------------------------------------------------------

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def c_invariants(self):
        b2, b4, b6, _ = self.b_invariants()
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        return c4, c6

    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def invariants(self):
        """(b2, b4, b6, b8, c4, c6, disc, j) with j as a (num, den) pair for
        integral models and an Elt ratio left unevaluated for local ones."""
        b2, b4, b6, b8 = self.b_invariants()
        c4, c6 = self.c_invariants()
        disc = self.discriminant()
        if self.tower is None:
            if disc == 0:
                raise SingularModelError("singular model")
            j = (c4**3, disc)
        else:
            j = (c4**3, disc)
        return b2, b4, b6, b8, c4, c6, disc, j

    def j_valuation(self, ell_or_tower=None):
        """v(j) = 3 v(c4) - v(disc); negative iff potentially multiplicative."""
        c4, _ = self.c_invariants()
        disc = self.discriminant()
        if self.tower is None:
            from .towers import vp
            ell = ell_or_tower
            return 3 * vp(c4, ell) - vp(disc, ell)
        T = self.tower
        return 3 * T.coerce(c4).val() - T.coerce(disc).val()

    # -- constructions ----------------------------------------------------

    def short_model(self) -> "WeierstrassModel":
        """Complete square and cube: y^2 = x^3 - 27 c4 x - 54 c6 (same j;
        minimality is restored downstream by the reduction loop)."""
        c4, c6 = self.c_invariants()
        return WeierstrassModel((0, 0, 0, -27 * c4, -54 * c6), self.tower)

    def quadratic_twist(self, d: int) -> "WeierstrassModel":
        """Twist by the square class of d (rational models)."""
        if self.tower is not None:
            raise ValueError("twist rational models, then base-change")
        if d == 0:
            raise ValueError("twist by zero")
        d = squarefree_part(d)
        c4, c6 = self.c_invariants()
        a4, a6 = -27 * c4 * d * d, -54 * c6 * d**3
        # strip the content that an integral rescale can remove
        u = 2
        while a4 % u**4 == 0 and a6 % u**6 == 0:
            a4 //= u**4
            a6 //= u**6
        u = 3
        while a4 % u**4 == 0 and a6 % u**6 == 0:
            a4 //= u**4
            a6 //= u**6
        return WeierstrassModel((0, 0, 0, a4, a6))

    def base_change(self, T: FieldTower) -> "WeierstrassModel":
        return WeierstrassModel(tuple(T.coerce(int(c)) for c in self.a), T,
                                self.label)

    def three_division_poly(self):
        """psi_3 = 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8."""
        b2, b4, b6, b8 = self.b_invariants()
        return (b8, 3 * b6, 3 * b4, b2, 3)

    def three_division_monic(self):
        """Monic integral form with roots 3x(P): y^4+b2 y^3+9 b4 y^2+27 b6 y+27 b8."""
        b2, b4, b6, b8 = self.b_invariants()
        return (27 * b8, 27 * b6, 9 * b4, b2, 1)

    def rescale(self, u: int) -> "WeierstrassModel":
        """(x, y) -> (u^2 x, u^3 y): a_i -> a_i / u^i (must stay integral)."""
        a1, a2, a3, a4, a6 = self.a
        for c, i in ((a1, 1), (a2, 2), (a3, 3), (a4, 4), (a6, 6)):
            if c % u**i:
                raise ValueError("non-integral rescale")
        return WeierstrassModel((a1 // u, a2 // u**2, a3 // u**3,
                                 a4 // u**4, a6 // u**6), None, self.label)
