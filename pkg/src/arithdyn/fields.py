"""Arithmetic in F_p and F_{p^m}, and the projective line PF_q = F_q + {inf}.

Field contexts operate on raw element representations: a canonical residue
int for m = 1, a tuple of m residues (ascending degree) for m > 1.  The
`FFElem` wrapper adds operator syntax on top; `ProjValue` adjoins the single
point at infinity.  All values are immutable and freely shareable.
"""

from __future__ import annotations

import itertools

from .errors import (
    DivisionByZeroError,
    FieldMismatchError,
    IndeterminateError,
    NotIrreducibleError,
    NotPrimeError,
)


def is_prime(n: int) -> bool:
    """Deterministic trial division; fine for the desk-scale moduli used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mulmod(a, b, modulus, p):
    # a, b: lists of residues, deg < m; modulus: monic, len m+1
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce mod modulus (monic)
    for i in range(len(prod) - 1, m - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(m):
                prod[i - m + j] = (prod[i - m + j] - c * modulus[j]) % p
    return _poly_trim(prod[:m])


def _poly_divmod_fp(a, b, p):
    # plain division of residue-coefficient lists, b nonzero
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        return [], _poly_trim(a)
    inv_lead = pow(b[-1], -1, p)
    q = [0] * (da - db + 1)
    for i in range(da - db, -1, -1):
        c = (a[i + db] * inv_lead) % p
        if c:
            q[i] = c
            for j in range(db + 1):
                a[i + j] = (a[i + j] - c * b[j]) % p
    return _poly_trim(q), _poly_trim(a)


def _poly_is_irreducible(coeffs, p) -> bool:
    """Brute-force irreducibility of a monic poly over F_p (trial division)."""
    m = len(coeffs) - 1
    if m <= 0:
        return False
    if m == 1:
        return True
    # trial division by every monic polynomial of degree 1..m//2
    for d in range(1, m // 2 + 1):
        for lower in itertools.product(range(p), repeat=d):
            cand = list(lower) + [1]
            _, rem = _poly_divmod_fp(coeffs, cand, p)
            if not rem:
                return False
    return True


def find_irreducible(p: int, m: int):
    """Lexicographically-first monic irreducible of degree m over F_p.

    Candidates x^m + c_{m-1} x^{m-1} + ... + c_0 are enumerated by the base-p
    integer with digits (c_0, c_1, ...); deterministic so that element
    encodings are reproducible across runs.
    """
    for k in range(p ** m):
        digits = []
        t = k
        for _ in range(m):
            digits.append(t % p)
            t //= p
        cand = digits + [1]
        if _poly_is_irreducible(cand, p):
            return tuple(cand)
    raise NotIrreducibleError(f"no irreducible of degree {m} over F_{p}")  # unreachable


class FiniteField:
    """Context for F_{p^m}; operates on raw element representations."""

    def __init__(self, p: int, m: int = 1, modulus=None):
        if not is_prime(p):
            raise NotPrimeError(f"{p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.m = m
        self.q = p ** m
        if m == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = find_irreducible(p, m)
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise NotIrreducibleError("modulus must be monic of degree m")
            if not _poly_is_irreducible(list(modulus), p):
                raise NotIrreducibleError(f"{list(modulus)} is reducible over F_{p}")
            self.modulus = modulus

    # -- raw representation helpers --------------------------------------

    @property
    def zero(self):
        return 0 if self.m == 1 else ()

    @property
    def one(self):
        return 1 if self.m == 1 else (1,)

    def from_int(self, n: int):
        n %= self.p
        if self.m == 1:
            return n
        return (n,) if n else ()

    def from_coeffs(self, coeffs):
        if self.m == 1:
            c = list(coeffs)
            return c[0] % self.p if c else 0
        c = [int(x) % self.p for x in coeffs]
        if len(c) > self.m:
            raise ValueError("coefficient list longer than extension degree")
        return tuple(_poly_trim(c))

    def gen(self):
        """The class of x (a root of the modulus); only meaningful for m > 1."""
        if self.m == 1:
            raise ValueError("prime field has no extension generator")
        return (0, 1)

    def is_zero(self, a) -> bool:
        return a == 0 if self.m == 1 else not a

    def add(self, a, b):
        if self.m == 1:
            return (a + b) % self.p
        la, lb = list(a), list(b)
        if len(la) < len(lb):
            la, lb = lb, la
        out = la[:]
        for i, c in enumerate(lb):
            out[i] = (out[i] + c) % self.p
        return tuple(_poly_trim(out))

    def neg(self, a):
        if self.m == 1:
            return (-a) % self.p
        return tuple((-c) % self.p for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return (a * b) % self.p
        if not a or not b:
            return ()
        return tuple(_poly_mulmod(list(a), list(b), list(self.modulus), self.p))

    def inv(self, a):
        """Multiplicative inverse; a * inv(a) = 1."""
        if self.is_zero(a):
            raise DivisionByZeroError("inverse of zero")
        if self.m == 1:
            return pow(a, -1, self.p)
        # extended Euclid on polynomials over F_p
        r0, r1 = list(self.modulus), list(a)
        s0, s1 = [], [1]
        while r1:
            q, r = _poly_divmod_fp(r0, r1, self.p)
            r0, r1 = r1, r
            qs = _poly_trim(self._mul_lists(q, s1))
            s0, s1 = s1, _poly_trim([(x - y) % self.p for x, y in
                                     itertools.zip_longest(s0, qs, fillvalue=0)])
        # r0 is a nonzero constant gcd
        c = pow(r0[0], -1, self.p)
        return tuple(_poly_trim([(x * c) % self.p for x in s0]))

    def _mul_lists(self, a, b):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % self.p
        return out

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        out = self.one
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def elements(self):
        """All q raw representations (enumeration order: base-p digits)."""
        if self.m == 1:
            yield from range(self.p)
        else:
            for coeffs in itertools.product(range(self.p), repeat=self.m):
                yield tuple(_poly_trim(list(coeffs)))

    def encode(self, a) -> str:
        """Canonical text encoding: residue for m=1, "[c0,c1,...]" otherwise."""
        if self.m == 1:
            return str(a)
        full = list(a) + [0] * (self.m - len(a))
        return "[" + ",".join(str(c) for c in full) + "]"

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and self.p == other.p
                and self.m == other.m and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.m}(mod {list(self.modulus)})"

    # -- element / projective wrappers ------------------------------------

    def elem(self, value) -> "FFElem":
        if isinstance(value, FFElem):
            if value.field != self:
                raise FieldMismatchError("element from a different field")
            return value
        if isinstance(value, int):
            return FFElem(self, self.from_int(value))
        return FFElem(self, self.from_coeffs(value))

    def proj(self, value) -> "ProjValue":
        return ProjValue(self, self.elem(value).rep)

    def infinity(self) -> "ProjValue":
        return ProjValue(self, None)


def make_field(p: int, m: int = 1, modulus=None) -> FiniteField:
    """Field constructor; finds a deterministic irreducible modulus when absent."""
    return FiniteField(p, m, modulus)


class FFElem:
    """A field element carrying its context; supports operator syntax."""

    __slots__ = ("field", "rep")

    def __init__(self, field: FiniteField, rep):
        self.field = field
        self.rep = rep

    def _coerce(self, other):
        if isinstance(other, FFElem):
            if other.field != self.field:
                raise FieldMismatchError("mixing elements of different fields")
            return other.rep
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        rep = self._coerce(other)
        if rep is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.add(self.rep, rep))

    __radd__ = __add__

    def __sub__(self, other):
        rep = self._coerce(other)
        if rep is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.sub(self.rep, rep))

    def __rsub__(self, other):
        rep = self._coerce(other)
        if rep is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.sub(rep, self.rep))

    def __mul__(self, other):
        rep = self._coerce(other)
        if rep is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.mul(self.rep, rep))

    __rmul__ = __mul__

    def __truediv__(self, other):
        rep = self._coerce(other)
        if rep is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.div(self.rep, rep))

    def __rtruediv__(self, other):
        rep = self._coerce(other)
        if rep is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.div(rep, self.rep))

    def __neg__(self):
        return FFElem(self.field, self.field.neg(self.rep))

    def __pow__(self, n: int):
        return FFElem(self.field, self.field.pow(self.rep, n))

    def inv(self):
        return FFElem(self.field, self.field.inv(self.rep))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.rep)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, int):
            return self.rep == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.rep))

    def __repr__(self):
        return self.field.encode(self.rep)


class ProjValue:
    """Element of PF_q: a finite field element or the single point at infinity."""

    __slots__ = ("field", "rep")

    def __init__(self, field: FiniteField, rep):
        # rep None encodes infinity
        self.field = field
        self.rep = rep

    @classmethod
    def finite(cls, field, value):
        return field.proj(value)

    @classmethod
    def inf(cls, field):
        return cls(field, None)

    @property
    def is_infinity(self) -> bool:
        return self.rep is None

    @property
    def is_finite(self) -> bool:
        return self.rep is not None

    def as_elem(self) -> FFElem:
        if self.rep is None:
            raise IndeterminateError("infinity has no field element")
        return FFElem(self.field, self.rep)

    def __eq__(self, other):
        if isinstance(other, ProjValue):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, FFElem):
            return self.rep is not None and self.field == other.field and self.rep == other.rep
        if isinstance(other, int) and self.rep is not None:
            return self.rep == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.rep, "proj"))

    def __repr__(self):
        if self.rep is None:
            return "inf"
        return self.field.encode(self.rep)


def proj_div(num, den) -> ProjValue:
    """num/den on the projective line: j/0 = inf for j != 0; 0/0 is a deadlock."""
    if isinstance(num, FFElem):
        field = num.field
    elif isinstance(den, FFElem):
        field = den.field
    else:
        raise TypeError("need at least one FFElem argument")
    num = field.elem(num)
    den = field.elem(den)
    if den.is_zero():
        if num.is_zero():
            raise IndeterminateError("0/0: switch to a lifted field")
        return ProjValue.inf(field)
    return ProjValue(field, (num / den).rep)
