"""Rational functions over F_q in one indeterminate, and the reductions to PF_q
used by the lattice systems.

`Poly` holds raw field representations (ascending degree, trailing coefficient
nonzero).  `RatFunc` is kept canonical: coprime, monic denominator.  The two
reduction maps differ exactly in how they treat vanishing orders, so the order
computation lives here and the strict map takes the *tracked products* rather
than a cancelled fraction.
"""

from __future__ import annotations

from .errors import DivisionByZeroError, IndeterminateError
from .fields import FFElem, FiniteField, ProjValue

KARATSUBA_THRESHOLD = 32


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs):
        self.field = field
        c = [field.from_coeffs([x]) if isinstance(x, int) else x for x in coeffs]
        while c and field.is_zero(c[-1]):
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, field):
        return cls(field, [])

    @classmethod
    def one(cls, field):
        return cls(field, [1])

    @classmethod
    def const(cls, field, value):
        return cls(field, [field.elem(value).rep])

    @classmethod
    def x(cls, field):
        return cls(field, [0, 1])

    @property
    def degree(self) -> int:
        # degree of the zero polynomial is -1 by convention
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.one

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly(F, out)

    def __neg__(self):
        F = self.field
        return Poly(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, FFElem)):
            return Poly.const(self.field, other)
        raise TypeError(f"cannot coerce {other!r} to Poly")

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(F)
        if min(len(a), len(b)) >= KARATSUBA_THRESHOLD:
            return Poly(F, _karatsuba(list(a), list(b), F))
        out = [F.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not F.is_zero(ai):
                for j, bj in enumerate(b):
                    out[i + j] = F.add(out[i + j], F.mul(ai, bj))
        return Poly(F, out)

    def scale(self, c) -> "Poly":
        F = self.field
        c = F.elem(c).rep
        return Poly(F, [F.mul(a, c) for a in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly(self.field, [self.field.zero] * k + list(self.coeffs))

    def divmod(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise DivisionByZeroError("polynomial division by zero")
        F = self.field
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        if len(a) - 1 < db:
            return Poly.zero(F), self
        inv_lead = F.inv(b[-1])
        q = [F.zero] * (len(a) - db)
        for i in range(len(a) - db - 1, -1, -1):
            c = F.mul(a[i + db], inv_lead)
            if not F.is_zero(c):
                q[i] = c
                for j in range(db + 1):
                    a[i + j] = F.sub(a[i + j], F.mul(c, b[j]))
        return Poly(F, q), Poly(F, a)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading()))

    def gcd(self, other) -> "Poly":
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def eval(self, x):
        """Horner evaluation at a field element (raw rep or FFElem)."""
        F = self.field
        x = F.elem(x).rep
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def order_at(self, x0) -> int:
        """Order of vanishing at x0 (trial division by (x - x0)); inf-like for 0."""
        if self.is_zero():
            raise ValueError("zero polynomial has infinite vanishing order")
        F = self.field
        x0 = F.elem(x0).rep
        divisor = Poly(F, [F.neg(x0), F.one])
        s = 0
        cur = self
        while F.is_zero(cur.eval(x0)):
            cur = cur.divmod(divisor)[0]
            s += 1
        return s

    def deflate_at(self, x0):
        """Return (s, value of self/(x-x0)^s at x0)."""
        s = self.order_at(x0)
        F = self.field
        divisor = Poly(F, [F.neg(F.elem(x0).rep), F.one])
        cur = self
        for _ in range(s):
            cur = cur.divmod(divisor)[0]
        return s, cur.eval(x0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, FFElem)):
            return self == Poly.const(self.field, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return poly_str(self)


def _karatsuba(a, b, F):
    n = max(len(a), len(b))
    if min(len(a), len(b)) < KARATSUBA_THRESHOLD:
        out = [F.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not F.is_zero(ai):
                for j, bj in enumerate(b):
                    out[i + j] = F.add(out[i + j], F.mul(ai, bj))
        return out
    h = n // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _karatsuba(a0, b0, F) if a0 and b0 else []
    z2 = _karatsuba(a1, b1, F) if a1 and b1 else []
    sa = [F.zero] * max(len(a0), len(a1))
    for i, c in enumerate(a0):
        sa[i] = F.add(sa[i], c)
    for i, c in enumerate(a1):
        sa[i] = F.add(sa[i], c)
    sb = [F.zero] * max(len(b0), len(b1))
    for i, c in enumerate(b0):
        sb[i] = F.add(sb[i], c)
    for i, c in enumerate(b1):
        sb[i] = F.add(sb[i], c)
    z1 = _karatsuba(sa, sb, F) if sa and sb else []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, c in enumerate(z0):
        out[i] = F.add(out[i], c)
    for i, c in enumerate(z1):
        t = c
        if i < len(z0):
            t = F.sub(t, z0[i])
        if i < len(z2):
            t = F.sub(t, z2[i])
        out[i + h] = F.add(out[i + h], t)
    for i, c in enumerate(z2):
        out[i + 2 * h] = F.add(out[i + 2 * h], c)
    return out


def poly_str(poly: Poly, var: str = "d") -> str:
    """Text encoding "c0 + c1*d + c2*d^2" with finite-field coefficient encoding."""
    if poly.is_zero():
        return "0"
    F = poly.field
    parts = []
    for i, c in enumerate(poly.coeffs):
        if F.is_zero(c):
            continue
        enc = F.encode(c)
        if i == 0:
            parts.append(enc)
        elif i == 1:
            parts.append(f"{enc}*{var}")
        else:
            parts.append(f"{enc}*{var}^{i}")
    return " + ".join(parts)


class RatFunc:
    """Reduced fraction of polynomials: coprime, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, reduce: bool = True):
        if den.is_zero():
            raise DivisionByZeroError("rational function with zero denominator")
        if reduce:
            g = num.gcd(den)
            if not g.is_one() and not g.is_zero():
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lead_inv = den.field.inv(den.leading())
            num = num.scale(lead_inv)
            den = den.scale(lead_inv)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @classmethod
    def from_poly(cls, p: Poly):
        return cls(p, Poly.one(p.field), reduce=False)

    @classmethod
    def const(cls, field, value):
        return cls.from_poly(Poly.const(field, value))

    @classmethod
    def x(cls, field):
        return cls.from_poly(Poly.x(field))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, FFElem)):
            return RatFunc.const(self.field, other)
        raise TypeError(f"cannot coerce {other!r} to RatFunc")

    def __add__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise DivisionByZeroError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (RatFunc.const(self.field, 1) / self) ** (-n)
        out = RatFunc.const(self.field, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inv(self):
        if self.is_zero():
            raise DivisionByZeroError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __eq__(self, other):
        if isinstance(other, (RatFunc, Poly, int, FFElem)):
            other = self._coerce(other)
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def order_at(self, x0) -> int:
        """Vanishing order (a valuation: independent of representation)."""
        if self.is_zero():
            raise ValueError("zero has infinite order")
        return self.num.order_at(x0) - self.den.order_at(x0)

    def __repr__(self):
        if self.den.is_one():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


def rf_arith(op: str, a: RatFunc, b: RatFunc) -> RatFunc:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def reduce_at(x: RatFunc, x0) -> ProjValue:
    """The substitution map F_q(d) -> PF_q at d = x0, by order of vanishing."""
    field = x.field
    if x.is_zero():
        return field.proj(0)
    s_num, val_num = x.num.deflate_at(x0)
    s_den, val_den = x.den.deflate_at(x0)
    s = s_num - s_den
    if s > 0:
        return field.proj(0)
    if s < 0:
        return field.infinity()
    return field.proj(field.div(val_num, val_den))


def _orders_and_value(factors, x0):
    """Total vanishing order and deflated value at x0 of a product of factors.

    A zero factor makes the whole product exactly zero; the order is then
    reported as None (think +infinity).
    """
    total = 0
    field = None
    value = None
    zero = False
    for f in factors:
        if isinstance(f, Poly):
            f = RatFunc.from_poly(f)
        field = f.field
        if f.is_zero():
            zero = True
            continue
        sn, vn = f.num.deflate_at(x0)
        sd, vd = f.den.deflate_at(x0)
        total += sn - sd
        v = field.div(vn, vd)
        value = v if value is None else field.mul(value, v)
    if field is None:
        raise ValueError("empty product")
    if zero:
        return None, field.zero, field
    return total, value, field


def reduce_tracked(num_factors, den_factors, x0) -> ProjValue:
    """Plain reduction of a tracked ratio: value if orders match, else 0 / inf."""
    l, k0, field = _orders_and_value(num_factors, x0)
    m, h0, _ = _orders_and_value(den_factors, x0)
    if l is None and m is None:
        raise IndeterminateError("0/0: both tracked products vanish identically")
    if m is None:
        return field.infinity()
    if l is None or l > m:
        return field.proj(0)
    if l < m:
        return field.infinity()
    return field.proj(field.div(k0, h0))


def reduce_strict(num_factors, den_factors, x0) -> FFElem:
    """Strict reduction: k(0)/h(0) only when both tracked orders are zero, else 0.

    The inputs are the designated products *before* num/den cancellation; each
    factor may be a Poly or RatFunc (orders are valuations, so canonical form
    within a factor is harmless).
    """
    l, k0, field = _orders_and_value(num_factors, x0)
    m, h0, _ = _orders_and_value(den_factors, x0)
    if l == 0 and m == 0:
        return FFElem(field, field.div(k0, h0))
    return FFElem(field, field.zero)
