"""Tiny finite-field arithmetic for residue fields F_q with q <= 81.

Residue fields of the towers in this package are always small (the heavy
classification work happens over totally ramified extensions, whose residue
field is the prime field), so everything here is allowed to be naive:
inverses by Fermat, square roots by scan, generators by scan.
"""

from __future__ import annotations

from functools import lru_cache


class ResidueField:
    """F_{p^m} as polynomials modulo a fixed monic irreducible.

    Elements are tuples of ints in [0, p), length m.  The generator of the
    polynomial basis is ``gen()``; for m = 1 elements are still 1-tuples.
    """

    def __init__(self, p: int, modulus: tuple[int, ...]):
        # modulus = coefficients (c0, ..., c_{m-1}, 1) of a monic irreducible
        self.p = p
        self.modulus = modulus
        self.m = len(modulus) - 1
        self.q = p**self.m
        self.zero = (0,) * self.m
        self.one = (1,) + (0,) * (self.m - 1)

    def __repr__(self):
        return f"ResidueField({self.p}^{self.m})"

    def elt(self, n: int) -> tuple[int, ...]:
        return (n % self.p,) + (0,) * (self.m - 1)

    def gen(self) -> tuple[int, ...]:
        if self.m == 1:
            raise ValueError("prime field has no polynomial generator")
        return (0, 1) + (0,) * (self.m - 2)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p, m = self.p, self.m
        if m == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce by the monic modulus
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(m):
                    prod[i - m + j] = (prod[i - m + j] - c * self.modulus[j]) % p
        return tuple(prod[:m])

    def pow(self, a, n: int):
        n %= self.q - 1 if a != self.zero else 1
        r = self.one
        b = a
        while n:
            if n & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            n >>= 1
        return r

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero in residue field")
        return self.pow(a, self.q - 2)

    def elements(self):
        def rec(i):
            if i == self.m:
                yield ()
                return
            for rest in rec(i + 1):
                for c in range(self.p):
                    yield (c,) + rest
        return list(rec(0))

    def is_square(self, a) -> bool:
        if a == self.zero:
            return True
        if self.p == 2:
            return True  # squaring is the Frobenius, hence onto
        return self.pow(a, (self.q - 1) // 2) == self.one

    def sqrt(self, a):
        """Some square root of ``a``; raises if a is not a square."""
        if a == self.zero:
            return self.zero
        if self.p == 2:
            # x -> x^2 is bijective; the inverse is x -> x^(q/2)
            return self.pow(a, self.q // 2)
        for x in self.elements():
            if self.mul(x, x) == a:
                return x
        raise ValueError("not a square in residue field")

    def cbrt(self, a):
        """Some cube root of ``a``; raises if there is none."""
        if self.q % 3 != 1:
            # cubing is bijective (covers p = 3 and q = 2 mod 3)
            e = pow(3, -1, self.q - 1) if a != self.zero else 1
            return self.pow(a, e) if a != self.zero else self.zero
        for x in self.elements():
            if self.mul(self.mul(x, x), x) == a:
                return x
        raise ValueError("not a cube in residue field")

    def multiplicative_generator(self):
        for x in self.elements():
            if x == self.zero:
                continue
            ok = True
            for ell in _prime_factors(self.q - 1):
                if self.pow(x, (self.q - 1) // ell) == self.one:
                    ok = False
                    break
            if ok:
                return x
        raise RuntimeError("no generator found")  # unreachable


@lru_cache(maxsize=None)
def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


# default irreducibles used for unramified stages, indexed by (p, m)
DEFAULT_MODULI = {
    (2, 1): (0, 1),
    (2, 2): (1, 1, 1),          # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),       # x^3 + x + 1
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),  # x^7 + x + 1
    (3, 1): (0, 1),
    (3, 2): (1, 0, 1),          # x^2 + 1
    (3, 4): (2, 1, 0, 0, 1),    # x^4 + x + 2
}


def residue_field(p: int, m: int) -> ResidueField:
    if m == 1:
        return ResidueField(p, (0, 1))
    key = (p, m)
    if key in DEFAULT_MODULI:
        return ResidueField(p, DEFAULT_MODULI[key])
    if m == 2 and p > 3:
        n = next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)
        return ResidueField(p, ((-n) % p, 0, 1))  # x^2 - n, n a non-residue
    raise ValueError(f"no default modulus for F_{p}^{m}")
