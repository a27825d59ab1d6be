"""Exact rationals viewed p-adically.

A rational carries its own exact arithmetic (fractions.Fraction); this module
adds the valuation, the three-way reduction to PF_p, residues mod p^2, lifts
of singular points, and the reduction through a quadratic extension.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .errors import (
    NotAUnitError,
    NotPAdicIntegerError,
    NotPrimeError,
    ResidueCollapseError,
)
from .fields import FiniteField, ProjValue, is_prime

Rat = Fraction

PLUS_INFINITY = math.inf


def _strip(n: int, p: int):
    """(v, n / p^v) with p^v the exact power of p in n != 0; O(log v) big divisions."""
    v = 0
    while n % p == 0:
        q, stride = p, 1
        while True:
            q2 = q * q
            if n % q2:
                break
            q, stride = q2, stride * 2
        n //= q
        v += stride
    return v, n


def _int_valuation(n: int, p: int) -> int:
    return _strip(n, p)[0]


class PadicContext:
    """Fixes the prime p and caches the residue field F_p."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise NotPrimeError(f"{p} is not prime")
        self.p = p
        self.field = FiniteField(p)

    def vp(self, x) -> float:
        """p-adic valuation; +inf for 0."""
        x = Fraction(x)
        if x == 0:
            return PLUS_INFINITY
        return _int_valuation(abs(x.numerator), self.p) - _int_valuation(x.denominator, self.p)

    def unit_part(self, x: Fraction) -> Fraction:
        """u/w with x = p^v * u/w and p coprime to u, w; x must be nonzero."""
        x = Fraction(x)
        _, num = _strip(x.numerator, self.p)
        _, den = _strip(x.denominator, self.p)
        return Fraction(num, den)

    def reduce(self, x) -> ProjValue:
        """The reduction map: 0 for v>0 (incl. x=0), inf for v<0, residue of the unit part else."""
        x = Fraction(x)
        if x == 0:
            return self.field.proj(0)
        vn, num = _strip(x.numerator, self.p)
        vd, den = _strip(x.denominator, self.p)
        v = vn - vd
        if v > 0:
            return self.field.proj(0)
        if v < 0:
            return self.field.infinity()
        r = (num * pow(den, -1, self.p)) % self.p
        return self.field.proj(r)

    def residue_mod_p2(self, x) -> int:
        """x mod p^2 for a p-adic integer x: the first two digits x0 + x1*p."""
        x = Fraction(x)
        if self.vp(x) < 0:
            raise NotPAdicIntegerError(f"v_{self.p}({x}) < 0")
        p2 = self.p * self.p
        return (x.numerator * pow(x.denominator, -1, p2)) % p2

    def lift(self, s, k: int, e) -> Fraction:
        """s-hat + e*p^k: a point reducing to s, at p-adic distance p^-k set by the unit e."""
        e = Fraction(e)
        if self.vp(e) != 0:
            raise NotAUnitError(f"v_{self.p}({e}) != 0")
        if k < 1:
            raise ValueError("lift depth k must be >= 1")
        s_hat = self._canonical_int(s)
        return Fraction(s_hat) + e * self.p ** k

    def _canonical_int(self, s) -> int:
        if isinstance(s, ProjValue):
            s = s.as_elem().rep
        if hasattr(s, "rep"):
            s = s.rep
        return int(s) % self.p

    def is_square_mod_p(self, r: int) -> bool:
        r %= self.p
        return any((t * t) % self.p == r for t in range(self.p))

    def reduce_quadratic_ext(self, x, y, a) -> ProjValue:
        """Reduce x + y*alpha (alpha^2 = a) componentwise into F_{p^2}.

        Requires a to reduce to a quadratic non-residue mod p, so that
        Q_p(alpha) really is a degree-2 extension with residue field F_{p^2}.
        """
        a = Fraction(a)
        if self.vp(a) != 0:
            raise ResidueCollapseError(f"a={a} is not a p-adic unit")
        a_bar = self.reduce(a).as_elem().rep
        if self.is_square_mod_p(a_bar):
            raise ResidueCollapseError(
                f"{a_bar} is a square mod {self.p}; Q_{self.p}(alpha) = Q_{self.p}, use reduce() directly"
            )
        ext = FiniteField(self.p, 2, modulus=((-a_bar) % self.p, 0, 1))
        x, y = Fraction(x), Fraction(y)
        if self.vp(x) < 0 or self.vp(y) < 0:
            return ext.infinity()
        xr = self.reduce(x)
        yr = self.reduce(y)
        x0 = 0 if xr.rep is None else xr.rep
        y0 = 0 if yr.rep is None else yr.rep
        return ext.proj(ext.from_coeffs((x0, y0)))

    def random_unit(self, rng: random.Random, bound: int = 10) -> Fraction:
        """u/w with u, w uniform in {1..p*bound} minus pZ; seeded and reproducible."""
        def draw():
            while True:
                n = rng.randint(1, self.p * bound)
                if n % self.p != 0:
                    return n
        return Fraction(draw(), draw())

    def __repr__(self):
        return f"Q_{self.p}"


def vp(x, ctx: PadicContext):
    return ctx.vp(x)


def reduce_p(x, ctx: PadicContext) -> ProjValue:
    return ctx.reduce(x)


def residue_mod_p2(x, ctx: PadicContext) -> int:
    return ctx.residue_mod_p2(x)


def lift(s, k: int, e, ctx: PadicContext) -> Fraction:
    return ctx.lift(s, k, e)


def reduce_quadratic_ext(x, y, a, ctx: PadicContext) -> ProjValue:
    return ctx.reduce_quadratic_ext(x, y, a)


def unlock_big_int_str():
    """Raise the interpreter's int->str digit cap; exact orbits get huge."""
    import sys
    if hasattr(sys, "set_int_max_str_digits"):
        if sys.get_int_max_str_digits() != 0 and sys.get_int_max_str_digits() < 50_000_000:
            sys.set_int_max_str_digits(50_000_000)


def encode_rat(x: Fraction) -> str:
    """Text encoding "num/den" (den omitted when 1)."""
    unlock_big_int_str()
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s: str) -> Fraction:
    return Fraction(s)


def rat_to_json(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}
