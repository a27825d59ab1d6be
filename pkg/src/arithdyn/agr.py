"""Integrability detectors: almost good reduction, refined AGR, weak AGR mod p^2,
and the p-adic singularity-confinement probe.

The tester lifts a reduced singular point into Q with varying depths p^k and
unit multipliers e, iterates the map exactly over Q, reduces every iterate,
and reports the minimal m at which all lifts agree on a finite reduced pair.
A registry of closed-form limits (one entry per known confinement case) provides
the independent oracle side.

Orbits of non-integrable maps blow up doubly-exponentially in height, so a
sample that outgrows a digit budget is switched to a valuation-tracked p-adic
approximation with explicit precision; reductions computed there are still
exact (the approximation refuses to answer rather than rounding).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Optional

from .errors import (
    AmbiguousFiberError,
    NotConfinedError,
    ParameterViolationError,
    SingularHitError,
)
from .fields import FFElem, FiniteField, ProjValue
from .maps import FFBackend, MapSpec, RationalBackend, step
from .padic import PadicContext

_RAT = RationalBackend()


# ---------------------------------------------------------------------------
# valuation-tracked p-adic approximation (internal accelerator)

class PrecisionLossError(ArithmeticError):
    pass


class _PadicApprox:
    """p^val * (unit + O(p^prec)); arithmetic keeps the error term explicit.

    Used only after an exact orbit outgrows the digit budget: on integrable
    (confining) orbits that never happens, on diverging orbits valuations are
    far from zero and additions never cancel deeply, so `prec` stays large.
    Any reduction that the remaining precision cannot decide raises instead
    of guessing.
    """

    __slots__ = ("p", "val", "unit", "prec")
    DIGITS = 64

    def __init__(self, p, val, unit, prec):
        self.p = p
        self.val = val
        self.unit = unit
        self.prec = prec

    @classmethod
    def from_fraction(cls, x: Fraction, p: int, prec: int = DIGITS):
        from .padic import _strip
        if x == 0:
            return cls(p, None, 0, prec)  # exact zero
        vn, num = _strip(x.numerator, p)
        vd, den = _strip(x.denominator, p)
        mod = p ** prec
        return cls(p, vn - vd, ((num % mod) * pow(den % mod, -1, mod)) % mod, prec)

    @property
    def is_zero(self):
        return self.val is None

    def _coerce(self, other):
        if isinstance(other, _PadicApprox):
            return other
        if isinstance(other, (int, Fraction)):
            return _PadicApprox.from_fraction(Fraction(other), self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        a, b = (self, other) if self.val <= other.val else (other, self)
        d = b.val - a.val
        prec = min(a.prec, b.prec + d)
        if prec <= 0:
            raise PrecisionLossError("addition lost all precision")
        mod = a.p ** prec
        u = (a.unit + (b.unit * pow(a.p, d, mod)) % mod) % mod
        if u == 0:
            raise PrecisionLossError("cancellation exceeds known precision")
        t = 0
        while u % a.p == 0:
            u //= a.p
            t += 1
        if t >= prec:
            raise PrecisionLossError("cancellation exceeds known precision")
        return _PadicApprox(a.p, a.val + t, u, prec - t)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        mod = self.p ** self.prec
        return _PadicApprox(self.p, self.val, (-self.unit) % mod, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return _PadicApprox(self.p, None, 0, self.DIGITS)
        prec = min(self.prec, other.prec)
        mod = self.p ** prec
        return _PadicApprox(self.p, self.val + other.val,
                            (self.unit * other.unit) % mod, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by exact zero")
        if self.is_zero:
            return self
        prec = min(self.prec, other.prec)
        mod = self.p ** prec
        return _PadicApprox(self.p, self.val - other.val,
                            (self.unit * pow(other.unit, -1, mod)) % mod, prec)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if self.is_zero:
            if n <= 0:
                raise ZeroDivisionError("0 ** nonpositive")
            return self
        mod = self.p ** self.prec
        if n >= 0:
            return _PadicApprox(self.p, self.val * n, pow(self.unit, n, mod), self.prec)
        return _PadicApprox(self.p, self.val * n,
                            pow(pow(self.unit, -1, mod), -n, mod), self.prec)

    def reduce(self, field: FiniteField) -> ProjValue:
        if self.is_zero or self.val > 0:
            return field.proj(0)
        if self.val < 0:
            return field.infinity()
        if self.prec < 1:
            raise PrecisionLossError("residue below known precision")
        return field.proj(self.unit % self.p)


class _ApproxBackend:
    """Backend view of _PadicApprox for the generic map step."""

    name = "padic-approx"

    def __init__(self, p):
        self.p = p
        self.zero = _PadicApprox(p, None, 0, _PadicApprox.DIGITS)
        self.one = _PadicApprox.from_fraction(Fraction(1), p)

    def from_fraction(self, q):
        return _PadicApprox.from_fraction(Fraction(q), self.p)

    def is_zero(self, v):
        # a nonzero approximation is never exactly zero (true zeros only arise
        # from exact zeros, which are tracked)
        return v.is_zero


# ---------------------------------------------------------------------------
# orbit runner: exact while small, approximate beyond a digit budget

_DIGIT_BUDGET = 10_000


def _too_big(x: Fraction) -> bool:
    return x.numerator.bit_length() + x.denominator.bit_length() > _DIGIT_BUDGET * 4


def iterate_reduced(spec: MapSpec, n0: int, x0: Fraction, y0: Fraction,
                    m_max: int, ctx: PadicContext):
    """Reduced pairs (x~_m, y~_m) for m = 1..m_max; entries may be the strings
    "singular" (exact denominator hit) or "unknown" (precision exhausted)."""
    out = []
    state = (Fraction(x0), Fraction(y0))
    backend = _RAT
    approx = False
    abackend = None
    for m in range(m_max):
        try:
            state = step(spec, n0 + m, state, backend)
        except SingularHitError:
            out.append("singular")
            out.extend(["singular"] * (m_max - len(out)))
            return out
        except PrecisionLossError:
            out.extend(["unknown"] * (m_max - len(out)))
            return out
        if not approx and (_too_big(state[0]) or _too_big(state[1])):
            approx = True
            abackend = _ApproxBackend(ctx.p)
            backend = abackend
            state = (_PadicApprox.from_fraction(state[0], ctx.p),
                     _PadicApprox.from_fraction(state[1], ctx.p))
        try:
            if approx:
                pair = (state[0].reduce(ctx.field), state[1].reduce(ctx.field))
            else:
                pair = (ctx.reduce(state[0]), ctx.reduce(state[1]))
        except PrecisionLossError:
            out.extend(["unknown"] * (m_max - len(out)))
            return out
        out.append(pair)
    return out


# ---------------------------------------------------------------------------
# domain classification and refined AGR

def classify(spec: MapSpec, point, p: int, n: int = 0) -> str:
    """DN / DS / E partition of Q_p^2 relative to the reduced map at time n."""
    ctx = PadicContext(p)
    x, y = Fraction(point[0]), Fraction(point[1])
    if ctx.vp(x) < 0 or ctx.vp(y) < 0:
        return "E"
    ff = FFBackend(ctx.field)
    try:
        step(spec, n, (ff.from_fraction(x), ff.from_fraction(y)), ff)
    except SingularHitError:
        return "DS"
    return "DN"


def test_refined_agr(spec: MapSpec, p: int, start, m_max: int = 20, n0: int = 0):
    """Minimal m >= 1 with phi^m(start) back in D_N, plus the class itinerary."""
    if classify(spec, start, p, n0) != "DN":
        raise ParameterViolationError("start point must lie in D_N")
    state = (Fraction(start[0]), Fraction(start[1]))
    itinerary = []
    for m in range(1, m_max + 1):
        state = step(spec, n0 + m - 1, state, _RAT)
        cls = classify(spec, state, p, n0 + m)
        itinerary.append(cls)
        if cls == "DN":
            return m, itinerary
    raise NotConfinedError(f"no return to D_N within {m_max} steps (itinerary {itinerary})")


def define_evolution_over_fp(spec: MapSpec, p: int, point, n0: int = 0,
                             m_max: int = 20, rng: Optional[random.Random] = None):
    """One evolution step over F_p via refined AGR, with PF_p intermediates.

    Requires the whole fiber of (v, w) to lie in D_N, which for these maps is
    a condition on the reduced pair alone; otherwise the choice of inverse
    image is ambiguous and AmbiguousFiberError is raised.
    """
    rng = rng or random.Random(0)
    ctx = PadicContext(p)
    field = ctx.field
    v = field.elem(point[0]) if not isinstance(point[0], FFElem) else point[0]
    w = field.elem(point[1]) if not isinstance(point[1], FFElem) else point[1]
    ff = FFBackend(field)
    try:
        step(spec, n0, (FFElem(field, v.rep), FFElem(field, w.rep)), ff)
    except SingularHitError as exc:
        raise AmbiguousFiberError(
            f"fiber of ({v},{w}) is not contained in D_N ({exc.description})") from exc

    results = []
    for _ in range(2):
        x = ctx.lift(v.rep, 1, ctx.random_unit(rng))
        y = ctx.lift(w.rep, 1, ctx.random_unit(rng))
        m, _ = test_refined_agr(spec, p, (x, y), m_max, n0)
        states = [(x, y)]
        cur = (x, y)
        for j in range(m):
            cur = step(spec, n0 + j, cur, _RAT)
            states.append(cur)
        reduced = [(ctx.reduce(s[0]), ctx.reduce(s[1])) for s in states[1:]]
        results.append((m, reduced))
    if results[0] != results[1]:
        raise AmbiguousFiberError("lift-dependent evolution; fiber not in D_N")
    m, reduced = results[0]
    final = reduced[-1]
    return m, final, reduced[:-1]


def sc_probe(spec: MapSpec, p: int, singular_value, companion_value,
             n0: int = 0, m_max: int = 20):
    """Reduced x-sequence from the lift s + p until the first fully-finite pair.

    Mirrors the epsilon -> p substitution of the singularity confinement test.
    Returns (pattern, confined); a non-terminating pattern has confined False.
    """
    ctx = PadicContext(p)
    field = ctx.field
    s = field.elem(singular_value).rep if not isinstance(singular_value, int) else singular_value % p
    u = Fraction(companion_value)
    x0 = Fraction(s) + p
    pattern = [ctx.reduce(x0)]
    pairs = iterate_reduced(spec, n0, x0, u, m_max, ctx)
    for pair in pairs:
        if pair in ("singular", "unknown"):
            return pattern, False
        pattern.append(pair[0])
        if pair[0].is_finite and pair[1].is_finite:
            return pattern, True
    return pattern, False


# ---------------------------------------------------------------------------
# AGR tester

@dataclass
class AGRConfig:
    m_max: int = 20
    samples: int = 20
    k_values: tuple = (1, 2, 3)
    seed: int = 0
    unit_bound: int = 10

    def __post_init__(self):
        if self.m_max < 1 or self.samples < 2:
            raise ParameterViolationError("need m_max >= 1 and samples >= 2")


@dataclass
class GroupResult:
    xbar: ProjValue
    ybar: ProjValue
    limit: Optional[tuple] = None
    samples: int = 0


@dataclass
class AGRReport:
    kind: str
    p: int
    n0: int
    class_name: str
    found: bool
    m: Optional[int]
    groups: list
    consistent: bool
    oracle_match: Optional[bool]
    notes: list = dc_field(default_factory=list)

    def to_json(self):
        return {
            "map": self.kind,
            "p": self.p,
            "n": self.n0,
            "class": self.class_name,
            "found": self.found,
            "m": self.m,
            "limit": [
                {"xbar": str(g.xbar), "ybar": str(g.ybar),
                 "limit": [str(g.limit[0]), str(g.limit[1])] if g.limit else None,
                 "samples": g.samples}
                for g in self.groups
            ],
            "samples": sum(g.samples for g in self.groups),
            "consistent": self.consistent,
            "oracle_match": self.oracle_match,
            "notes": self.notes,
        }


@dataclass
class SingularClass:
    """A reduced singular locus: pins for (x~, y~) plus the registered oracle."""

    name: str
    pin_x: Optional[Callable]         # field, red, n -> rep, or None if free
    pin_y: Optional[Callable]         # may instead be a relation using x~
    avoid_x: Callable = lambda field, red, n: set()
    avoid_y: Callable = lambda field, red, n: set()
    relation_y: Optional[Callable] = None   # field, red, n, xbar_rep -> rep
    oracle: Optional[Callable] = None       # field, red, n, xbar, ybar -> (m, (pv, pv))
    degenerate: Optional[Callable] = None   # field, red, n -> reason str or None


def _red_params(spec: MapSpec, field: FiniteField) -> dict:
    ff = FFBackend(field)
    red = {}
    for k, v in spec.params.items():
        if isinstance(v, (Fraction, int)):
            red[k] = ff.from_fraction(v)
    return red


def _free_values(field: FiniteField, rng: random.Random, avoid, want: int) -> list:
    """Up to `want` distinct nonzero residues outside the avoid set."""
    avoid = {a.rep if isinstance(a, FFElem) else a for a in avoid}
    candidates = [r for r in range(1, field.p) if r not in avoid]
    if not candidates:
        raise ParameterViolationError("singular class is empty at this prime")
    rng.shuffle(candidates)
    return candidates[:want]


def free_value(field: FiniteField, rng: random.Random, avoid) -> int:
    """A random nonzero residue outside the avoid set."""
    return _free_values(field, rng, avoid, 1)[0]


def test_agr(spec: MapSpec, p: int, class_name: str, n: int = 0,
             config: Optional[AGRConfig] = None) -> AGRReport:
    """Sample lifts of one reduced singular class and locate the confinement step.

    found is True at the minimal m where every sampled lift of the class has a
    finite reduced pair and all lifts sharing (x~, y~) agree exactly; the
    registered closed form, when present, is compared at each group.
    """
    config = config or AGRConfig()
    ctx = PadicContext(p)
    field = ctx.field
    rng = random.Random(config.seed)
    spec.check_units(p)
    red = _red_params(spec, field)
    sc = _find_class(spec, p, class_name, n, red, field)
    notes = []
    if sc.degenerate is not None:
        reason = sc.degenerate(field, red, n)
        if reason:
            notes.append(f"parameters degenerate for this class ({reason}); "
                         "the registered closed form does not apply")

    # reduced base points: one per group (two groups when a coordinate is free)
    groups = []
    if sc.pin_x is not None and (sc.pin_y is not None or sc.relation_y is not None):
        if sc.pin_y is not None:
            groups.append((sc.pin_x(field, red, n), sc.pin_y(field, red, n)))
        else:
            xr = sc.pin_x(field, red, n)
            groups.append((xr, sc.relation_y(field, red, n, xr)))
    elif sc.pin_x is not None:
        xr = sc.pin_x(field, red, n)
        for yr in _free_values(field, rng, sc.avoid_y(field, red, n), 2):
            groups.append((xr, yr))
    else:
        for xr in _free_values(field, rng, sc.avoid_x(field, red, n), 2):
            yr = (sc.relation_y(field, red, n, xr) if sc.relation_y
                  else sc.pin_y(field, red, n))
            groups.append((xr, yr))

    per_group = len(groups) * len(config.k_values)
    per_sample = max(2, -(-config.samples // per_group))  # ceil: at least `samples` lifts total
    results = []
    for xr, yr in groups:
        traces = []
        for k in config.k_values:
            for _ in range(per_sample):
                x0 = ctx.lift(xr, k, ctx.random_unit(rng, config.unit_bound))
                ky = rng.choice(config.k_values)
                y0 = ctx.lift(yr, ky, ctx.random_unit(rng, config.unit_bound))
                traces.append(iterate_reduced(spec, n, x0, y0, config.m_max, ctx))
        results.append(((xr, yr), traces))

    found_m = None
    for m in range(1, config.m_max + 1):
        ok = True
        for (_, traces) in results:
            vals = [t[m - 1] for t in traces]
            if any(isinstance(v, str) for v in vals):
                ok = False
                break
            if not all(v[0].is_finite and v[1].is_finite for v in vals):
                ok = False
                break
            if any(v != vals[0] for v in vals[1:]):
                ok = False
                break
        if ok:
            found_m = m
            break

    group_results = []
    oracle_match = None
    for (xr, yr), traces in results:
        g = GroupResult(field.proj(xr), field.proj(yr), samples=len(traces))
        if found_m is not None:
            g.limit = traces[0][found_m - 1]
        group_results.append(g)

    if sc.oracle is not None and not notes:
        oracle_match = found_m is not None
        for g in group_results:
            expect = sc.oracle(field, red, n, g.xbar.as_elem(), g.ybar.as_elem())
            if expect is None:
                oracle_match = None
                break
            em, (eu, ev) = expect
            if found_m != em or g.limit is None or g.limit[0] != eu or g.limit[1] != ev:
                oracle_match = False

    return AGRReport(
        kind=spec.kind, p=p, n0=n, class_name=class_name,
        found=found_m is not None, m=found_m, groups=group_results,
        consistent=found_m is not None, oracle_match=oracle_match,
        notes=notes,
    )


def _find_class(spec, p, name, n, red, field) -> SingularClass:
    table = singular_classes(spec, p, n, red, field)
    for sc in table:
        if sc.name == name:
            return sc
    raise ParameterViolationError(
        f"{spec.kind} has no singular class {name!r}; known: {[c.name for c in table]}")


def class_names(spec: MapSpec, p: int, n: int = 0):
    ctx = PadicContext(p)
    red = _red_params(spec, ctx.field)
    return [c.name for c in singular_classes(spec, p, n, red, ctx.field)]


# ---------------------------------------------------------------------------
# the oracle registry (one entry per known confinement case)

def singular_classes(spec: MapSpec, p: int, n: int, red: dict,
                     field: FiniteField) -> list:
    kind = spec.kind
    if kind == "qrt":
        return _qrt_classes(spec, red, field)
    if kind == "dp2":
        return _dp2_classes(spec, red, field)
    if kind == "qp1":
        return _qp1_classes(red, field)
    if kind == "qp2":
        return _qp2_classes(spec, red, field)
    if kind == "qp3":
        return _qp3_classes(spec, red, field)
    if kind == "qp4":
        return _qp4_classes(spec, red, field)
    if kind == "qp5":
        return _qp5_classes(red, field)
    if kind == "hv":
        return _hv_classes(red, field)
    raise ParameterViolationError(f"no singular classes registered for {kind}")


def _pin(value):
    return lambda field, red, n: value(field, red, n).rep if callable(value) else value


def _const_pin(rep):
    return lambda field, red, n: rep


def _qrt_classes(spec, red, field):
    gamma = int(spec.params["gamma"])
    a = red["a"]
    inv = lambda e: e.inv()
    zero = field.proj(0)

    if gamma == 0:
        def oracle_y0(field, red, n, xbar, ybar):
            return 4, (zero, field.proj((red["a"] * red["a"] / xbar).rep))

        def oracle_xy0(field, red, n, xbar, ybar):
            return 5, (zero, zero)

        return [
            SingularClass("y=0", None, _const_pin(0),
                          avoid_x=lambda f, r, n: {(-inv(r["a"])).rep,
                                                   (-inv(r["a"] ** 3)).rep},
                          oracle=oracle_y0),
            SingularClass("x=y=0", _const_pin(0), _const_pin(0), oracle=oracle_xy0),
        ]

    if gamma == 1:
        def oracle_x0(field, red, n, xbar, ybar):
            return 4, (field.proj((inv(red["a"] * red["a"] * ybar)).rep), zero)

        def oracle_y0(field, red, n, xbar, ybar):
            return 3, (zero, field.proj((red["a"] / xbar).rep))

        def oracle_xy0(field, red, n, xbar, ybar):
            return 7, (zero, zero)

        return [
            SingularClass("x=0", _const_pin(0), None, oracle=oracle_x0),
            SingularClass("y=0", None, _const_pin(0),
                          avoid_x=lambda f, r, n: {(-inv(r["a"])).rep},
                          oracle=oracle_y0),
            SingularClass("x=y=0", _const_pin(0), _const_pin(0), oracle=oracle_xy0),
        ]

    if gamma == 2:
        def oracle_x0(field, red, n, xbar, ybar):
            return 3, (field.proj((inv(red["a"] * red["a"] * ybar)).rep), zero)

        def oracle_y0(field, red, n, xbar, ybar):
            return 5, (zero, field.proj((red["a"] * red["a"] / xbar).rep))

        def oracle_xy0(field, red, n, xbar, ybar):
            return 8, (zero, zero)

        return [
            SingularClass("x=0", _const_pin(0), None, oracle=oracle_x0),
            SingularClass("y=0", None, _const_pin(0),
                          avoid_x=lambda f, r, n: {(-inv(r["a"])).rep},
                          oracle=oracle_y0),
            SingularClass("x=y=0", _const_pin(0), _const_pin(0), oracle=oracle_xy0),
        ]

    # gamma >= 3: same loci, no closed forms (these maps do not confine)
    avoid = lambda f, r, n: {(-(r["a"].inv())).rep}
    return [
        SingularClass("x=0", _const_pin(0), None),
        SingularClass("y=0", None, _const_pin(0), avoid_x=avoid),
        SingularClass("x=y=0", _const_pin(0), _const_pin(0)),
    ]


def _dp2_classes(spec, red, field):
    sched = spec.params.get("schedule")
    if sched is None:
        raise ParameterViolationError("dP_II AGR oracle needs the period-p schedule")
    ctx = PadicContext(field.p)

    def r(q):
        return ctx.reduce(q).as_elem()

    def wrapped(n, m):
        # the m-step case formulas assume z_{n+j} stays linear over the burst,
        # which the period-p coefficient redefinition breaks at the wrap
        return (n % field.p) + m - 1 >= field.p

    def oracle_x1(field_, red_, n, xbar, ybar):
        a, d = r(sched.a), r(sched.delta)
        two = field_.elem(2)
        if sched.alpha(n) == 0:
            return 1, (field_.proj((r(sched.beta(n) / 2) - ybar).rep), field_.proj(1))
        if sched.beta(n + 2) != 0:
            num = two * r(sched.alpha(n)) * ybar + two * d * r(sched.beta(n + 1)) + (two - d) * a
            val = num / (two * r(sched.beta(n + 2)))
            return 3, (field_.proj(val.rep), field_.proj(-1))
        if sched.a + sched.delta != 0:
            if wrapped(n, 5):
                return None
            val = -(a * d - (a - d) * ybar) / (a + d)
            return 5, (field_.proj(val.rep), field_.proj(1))
        if wrapped(n, 7):
            return None
        val = (field_.elem(1) + two * ybar) / two
        return 7, (field_.proj(val.rep), field_.proj(-1))

    def oracle_xm1(field_, red_, n, xbar, ybar):
        a, d = r(sched.a), r(sched.delta)
        two = field_.elem(2)
        if sched.beta(n) == 0:
            return 1, (field_.proj((r(sched.alpha(n) / 2) - ybar).rep), field_.proj(-1))
        if sched.alpha(n + 2) != 0:
            num = a * (-two + d) - two * d * r(sched.alpha(n + 1)) + two * r(sched.beta(n)) * ybar
            val = num / (two * r(sched.alpha(n + 2)))
            return 3, (field_.proj(val.rep), field_.proj(1))
        if sched.a - sched.delta != 0:
            if wrapped(n, 5):
                return None
            val = (a * d + (a + d) * ybar) / (a - d)
            return 5, (field_.proj(val.rep), field_.proj(-1))
        if wrapped(n, 7):
            return None
        val = (-field_.elem(1) + two * ybar) / two
        return 7, (field_.proj(val.rep), field_.proj(1))

    return [
        SingularClass("x=1", _const_pin(1), None, oracle=oracle_x1),
        SingularClass("x=-1", _const_pin(field.p - 1), None, oracle=oracle_xm1),
    ]


def _qp1_classes(red, field):
    zero = field.proj(0)

    def oracle_x0(field_, red_, n, xbar, ybar):
        a, b, q = red_["a"], red_["b"], red_["q"]
        val = b * b / (a * a * q ** (2 * n + 2) * ybar)
        return 3, (field_.proj(val.rep), zero)

    def oracle_y0(field_, red_, n, xbar, ybar):
        a, b, q = red_["a"], red_["b"], red_["q"]
        val = a * a * q ** (2 * n + 4) / (b * xbar)
        return 5, (zero, field_.proj(val.rep))

    def oracle_xy0(field_, red_, n, xbar, ybar):
        return 8, (zero, zero)

    return [
        SingularClass("x=0", _const_pin(0), None, oracle=oracle_x0),
        SingularClass("y=0", None, _const_pin(0),
                      avoid_x=lambda f, r, n: {(-(r["b"] / (r["a"] * r["q"] ** n))).rep},
                      oracle=oracle_y0),
        SingularClass("x=y=0", _const_pin(0), _const_pin(0), oracle=oracle_xy0),
    ]


def _qp2_classes(spec, red, field):
    def tau(field_, red_, n):
        return red_["q"] ** n * red_["tau0"]

    def dcond_root(field_, red_, n):
        q, a = red_["q"], red_["a"]
        t = tau(field_, red_, n)
        # -1 + q^2 - a q^2 t^2 + q^3 t^2 - q^2 t y = 0
        return ((field_.elem(-1) + q * q - a * q * q * t * t + q ** 3 * t * t)
                / (q * q * t)).rep

    def oracle_x0_gen(field_, red_, n, xbar, ybar):
        q, a = red_["q"], red_["a"]
        t = tau(field_, red_, n)
        one = field_.elem(1)
        d = -one + q * q - a * q * q * t * t + q ** 3 * t * t - q * q * t * ybar
        num = one - q * q + a * q * q * t * t - q ** 3 * t * t - a * q ** 4 * t * t + q * q * t * ybar
        return 3, (field_.proj((num / (q * q * t * d)).rep), field_.proj((q * q * t).rep))

    def oracle_x0_special(field_, red_, n, xbar, ybar):
        q, a = red_["q"], red_["a"]
        t = tau(field_, red_, n)
        one = field_.elem(1)
        num = one - q * q + q ** 7 * t * t - a * q ** 8 * t * t
        return 5, (field_.proj((num / (q ** 4 * t)).rep), field_.proj(0))

    def oracle_xtau_gen(field_, red_, n, xbar, ybar):
        q, a = red_["q"], red_["a"]
        t = tau(field_, red_, n)
        one = field_.elem(1)
        num = (one - q * q + (a + q - a * q * q) * q * q * t * t
               + (one - q * q) * t * ybar + (one - a * q) * q ** 3 * t ** 3 * ybar)
        den = q * q * t * (one + t * ybar)
        return 3, (field_.proj((num / den).rep), field_.proj(0))

    def oracle_xtau_special(field_, red_, n, xbar, ybar):
        q, a = red_["q"], red_["a"]
        t = tau(field_, red_, n)
        w = a * q ** 12 * t ** 3
        return 7, (field_.proj(w.inv().rep), field_.proj((-w).rep))

    def oracle_xym1(field_, red_, n, xbar, ybar):
        q, a = red_["q"], red_["a"]
        t = tau(field_, red_, n)
        w = a * q ** 12 * t ** 4 * ybar
        return 7, (field_.proj((-(w.inv())).rep), field_.proj(w.rep))

    tau_pin = lambda f, r, n: tau(f, r, n).rep
    return [
        SingularClass("x=0", _const_pin(0), None,
                      avoid_y=lambda f, r, n: {dcond_root(f, r, n),
                                               (-(tau(f, r, n).inv())).rep},
                      oracle=oracle_x0_gen),
        SingularClass("x=0 special", _const_pin(0),
                      lambda f, r, n: dcond_root(f, r, n),
                      oracle=oracle_x0_special),
        SingularClass("x=tau", tau_pin, None,
                      avoid_y=lambda f, r, n: {(-(tau(f, r, n).inv())).rep},
                      oracle=oracle_xtau_gen),
        SingularClass("x=tau special", tau_pin,
                      lambda f, r, n: (-(tau(f, r, n).inv())).rep,
                      oracle=oracle_xtau_special),
        SingularClass("xy=-1", None, None,
                      avoid_x=lambda f, r, n: {0, tau(f, r, n).rep},
                      relation_y=lambda f, r, n, xr: (-(FFElem(f, xr).inv())).rep,
                      oracle=oracle_xym1),
    ]


def _qp3_classes(spec, red, field):
    # from start index n the orbit is the n=0 orbit with c -> c q^n, d -> d q^n
    def cd(field_, red_, n):
        return red_["c"] * red_["q"] ** n, red_["d"] * red_["q"] ** n

    def root_a(field_, red_, n):
        a, b, q = red_["a"], red_["b"], red_["q"]
        c, d = cd(field_, red_, n)
        den = (a - b) * (a + b - c * q - d * q)
        return (b * (a - c) * (a - d) / den).rep

    def root_b(field_, red_, n):
        a, b, q = red_["a"], red_["b"], red_["q"]
        c, d = cd(field_, red_, n)
        den = (a - b) * (a + b - c * q - d * q)
        return (-(a * (b - c) * (b - d)) / den).rep

    def oracle_xa_gen(field_, red_, n, xbar, ybar):
        a, b, q = red_["a"], red_["b"], red_["q"]
        c, d = cd(field_, red_, n)
        num = a * (b - c * q * q) * (b - d * q * q) * ybar
        den = b * (a - c) * (a - d) - (a - b) * (a + b - c * q - d * q) * ybar
        return 3, (field_.proj((num / den).rep), field_.proj(b.rep))

    def oracle_xa_special(field_, red_, n, xbar, ybar):
        a, b, q = red_["a"], red_["b"], red_["q"]
        c, d = cd(field_, red_, n)
        num = b * (a - c * q ** 4) * (a - d * q ** 4)
        den = (a - b) * (a + b - c * q ** 3 - d * q ** 3)
        return 5, (field_.proj((num / den).rep), field_.proj(a.rep))

    def oracle_xb_gen(field_, red_, n, xbar, ybar):
        a, b, q = red_["a"], red_["b"], red_["q"]
        c, d = cd(field_, red_, n)
        num = b * (a - c * q * q) * (a - d * q * q) * ybar
        den = a * (b - c) * (b - d) + (a - b) * (a + b - c * q - d * q) * ybar
        return 3, (field_.proj((num / den).rep), field_.proj(a.rep))

    def oracle_xb_special(field_, red_, n, xbar, ybar):
        a, b, q = red_["a"], red_["b"], red_["q"]
        c, d = cd(field_, red_, n)
        num = -(a * (b - c * q ** 4) * (b - d * q ** 4))
        den = (a - b) * (a + b - c * q ** 3 - d * q ** 3)
        return 5, (field_.proj((num / den).rep), field_.proj(b.rep))

    def oracle_y0(field_, red_, n, xbar, ybar):
        return 3, (field_.proj(0), field_.proj((red_["a"] * red_["b"] / xbar).rep))

    def oracle_xy0(field_, red_, n, xbar, ybar):
        return 4, (field_.proj(0), field_.proj(0))

    def avoid_y0_x(field_, red_, n):
        a, b = red_["a"], red_["b"]
        c, d = cd(field_, red_, n)
        return {a.rep, b.rep, c.rep, d.rep, 0}

    def degen_special(which):
        # residue coincidences the usual distinctness conditions do not exclude;
        # at these the m=5 limit becomes 0/0 and confinement is lift-dependent
        def check(field_, red_, n):
            a, b, q = red_["a"], red_["b"], red_["q"]
            c, d = cd(field_, red_, n)
            if ((a - b) * (a + b - c * q - d * q)).is_zero():
                return "special residue class does not exist"
            if (a + b - c * q ** 3 - d * q ** 3).is_zero():
                return "a+b = (c+d)q^3"
            if (a + b).is_zero():
                return "a+b = 0"
            v = b if which == "a" else a
            if ((v - c * q * q) * (v - d * q * q)).is_zero():
                return f"{'b' if which == 'a' else 'a'} in {{cq^2, dq^2}}"
            root = root_a(field_, red_, n) if which == "a" else root_b(field_, red_, n)
            if root == 0:
                return "special class collides with y=0"
            return None
        return check

    return [
        SingularClass("x=a", lambda f, r, n: r["a"].rep, None,
                      avoid_y=lambda f, r, n: {root_a(f, r, n), 0},
                      oracle=oracle_xa_gen),
        SingularClass("x=a special", lambda f, r, n: r["a"].rep, root_a,
                      oracle=oracle_xa_special, degenerate=degen_special("a")),
        SingularClass("x=b", lambda f, r, n: r["b"].rep, None,
                      avoid_y=lambda f, r, n: {root_b(f, r, n), 0},
                      oracle=oracle_xb_gen),
        SingularClass("x=b special", lambda f, r, n: r["b"].rep, root_b,
                      oracle=oracle_xb_special, degenerate=degen_special("b")),
        SingularClass("y=0", None, _const_pin(0), avoid_x=avoid_y0_x,
                      oracle=oracle_y0),
        SingularClass("x=y=0", _const_pin(0), _const_pin(0), oracle=oracle_xy0),
    ]


def _qp4_classes(spec, red, field):
    # from start index n the orbit is the n=0 orbit with tau0 -> q^n tau0
    def t0(field_, red_, n):
        return red_["q"] ** n * red_["tau0"]

    def dcond_root(field_, red_, n):
        q, a, b = red_["q"], red_["a"], red_["b"]
        t = t0(field_, red_, n)
        one = field_.elem(1)
        # 1 + q^3 t^2 + q^2(-1 - b t^2 + t y + a t - a t^2 y) = 0, linear in y
        const = one + q ** 3 * t * t + q * q * (-one - b * t * t + a * t)
        coef = q * q * (t - a * t * t)
        return (-(const / coef)).rep

    def oracle_x0_gen(field_, red_, n, xbar, ybar):
        q, a, b = red_["q"], red_["a"], red_["b"]
        t = t0(field_, red_, n)
        one = field_.elem(1)
        den_cond = one + q ** 3 * t * t + q * q * (-one - b * t * t + t * ybar + a * t - a * t * t * ybar)
        num = (-one - q ** 3 * t * t - b * q ** 4 * t * t + a * q ** 6 * t ** 3
               + q * q * (one + b * t * t - t * ybar + a * t * t * ybar))
        return 3, (field_.proj((num / (q * q * t * den_cond)).rep),
                   field_.proj((-(q * q * t)).rep))

    def oracle_x0_special(field_, red_, n, xbar, ybar):
        q, a, b = red_["q"], red_["a"], red_["b"]
        t = t0(field_, red_, n)
        one = field_.elem(1)
        num = -one + q * q + a * q ** 4 * t + q ** 7 * t * t - b * q ** 8 * t * t
        den = q ** 4 * t * (-one + a * q ** 4 * t)
        return 5, (field_.proj((num / den).rep), field_.proj(0))

    def oracle_xmtau_gen(field_, red_, n, xbar, ybar):
        q, a, b = red_["q"], red_["a"], red_["b"]
        t = t0(field_, red_, n)
        one = field_.elem(1)
        C = q * q * (one + b * t * t + t * ybar + a * t * t * (-t + ybar))
        num = -one - t * ybar + (q ** 3 - b * q ** 4) * t * t * (one + t * ybar) + C
        den = q * q * t * (-one + a * q * q * t) * (one + t * ybar)
        return 3, (field_.proj((num / den).rep), field_.proj(0))

    def oracle_xmtau_special(field_, red_, n, xbar, ybar):
        q, a = red_["q"], red_["a"]
        t = t0(field_, red_, n)
        w = a * q ** 6 * t * t
        return 5, (field_.proj((-(w.inv())).rep), field_.proj((-w).rep))

    def oracle_xy1(field_, red_, n, xbar, ybar):
        q, a = red_["q"], red_["a"]
        t = t0(field_, red_, n)
        w = a * q ** 6 * t ** 3 * ybar
        return 5, (field_.proj(w.inv().rep), field_.proj(w.rep))

    def degen_x0_special(field_, red_, n):
        q, a = red_["q"], red_["a"]
        t = t0(field_, red_, n)
        one = field_.elem(1)
        if (t - a * t * t).is_zero():
            return "a*tau = 1: special residue class does not exist"
        if (a * q ** 4 * t - one).is_zero():
            return "a q^4 tau = 1 (case formula undefined)"
        root = dcond_root(field_, red_, n)
        if root == 0:
            return "special class collides with y=0"
        if root == (-(t.inv())).rep:
            return "special class collides with y = -1/tau"
        return None

    def degen_xmtau(field_, red_, n):
        q, a = red_["q"], red_["a"]
        t = t0(field_, red_, n)
        if (a * q * q * t - field_.elem(1)).is_zero():
            return "a q^2 tau = 1 (case formula undefined)"
        return None

    mtau_pin = lambda f, r, n: (-(t0(f, r, n))).rep
    return [
        SingularClass("x=0", _const_pin(0), None,
                      avoid_y=lambda f, r, n: {dcond_root(f, r, n),
                                               (-(t0(f, r, n).inv())).rep},
                      oracle=oracle_x0_gen),
        SingularClass("x=0 special", _const_pin(0), dcond_root,
                      oracle=oracle_x0_special, degenerate=degen_x0_special),
        SingularClass("x=-tau", mtau_pin, None,
                      avoid_y=lambda f, r, n: {(-(t0(f, r, n).inv())).rep},
                      oracle=oracle_xmtau_gen, degenerate=degen_xmtau),
        SingularClass("x=-tau special", mtau_pin,
                      lambda f, r, n: (-(t0(f, r, n).inv())).rep,
                      oracle=oracle_xmtau_special),
        SingularClass("xy=1", None, None,
                      avoid_x=lambda f, r, n: {0, (-(t0(f, r, n))).rep}
                      | _quad_roots(f, r["a"], r["b"], r["a"]),
                      relation_y=lambda f, r, n, xr: FFElem(f, xr).inv().rep,
                      oracle=oracle_xy1),
    ]


def _quad_roots(field, a2, a1, a0):
    """Roots of a2 x^2 + a1 x + a0 over F_p (a numerator-vanishing sub-branch
    of the xy=1 class confines differently and is excluded from sampling)."""
    roots = set()
    for r in range(field.p):
        x = field.elem(r)
        if (a2 * x * x + a1 * x + a0).is_zero():
            roots.add(r)
    return roots


def _qp5_classes(red, field):
    def oracle_xa(field_, red_, n, xbar, ybar):
        b, q = red_["b"], red_["q"]
        w = b * q
        return 3, (field_.proj(w.inv().rep), field_.proj(w.rep))

    def oracle_xb(field_, red_, n, xbar, ybar):
        a, q = red_["a"], red_["q"]
        w = a * q
        return 3, (field_.proj(w.inv().rep), field_.proj(w.rep))

    def oracle_xy1(field_, red_, n, xbar, ybar):
        a, b, q = red_["a"], red_["b"], red_["q"]
        w = a * b * q * ybar
        return 3, (field_.proj(w.inv().rep), field_.proj(w.rep))

    def roots(field_, red_, n):
        return {red_["a"].rep, red_["b"].rep, red_["c"].rep, red_["d"].rep,
                red_["c"].inv().rep, red_["d"].inv().rep, 0}

    def avoid_xy1(field_, red_, n):
        # besides the first-step numerator roots, exclude residues whose
        # confined value a*b*q*ybar would itself land on a root (the orbit
        # re-enters a compound singularity and stops being lift-uniform)
        base = roots(field_, red_, n)
        abq = red_["a"] * red_["b"] * red_["q"]
        out = set(base)
        for r in base:
            if r:
                out.add((abq / FFElem(field_, r)).rep)
        return out

    return [
        SingularClass("x=a", lambda f, r, n: r["a"].rep, None,
                      avoid_y=lambda f, r, n: {r["a"].inv().rep, 0},
                      oracle=oracle_xa),
        SingularClass("x=b", lambda f, r, n: r["b"].rep, None,
                      avoid_y=lambda f, r, n: {r["b"].inv().rep, 0},
                      oracle=oracle_xb),
        SingularClass("xy=1", None, None,
                      avoid_x=avoid_xy1,
                      relation_y=lambda f, r, n, xr: FFElem(f, xr).inv().rep,
                      oracle=oracle_xy1),
    ]


def _hv_classes(red, field):
    def oracle_x0(field_, red_, n, xbar, ybar):
        return 4, (field_.proj(ybar.rep), field_.proj(0))

    return [SingularClass("x=0", _const_pin(0), None, oracle=oracle_x0)]


# ---------------------------------------------------------------------------
# weak AGR (dP_II, p in {3, 5}): behavior keyed by the residue mod p^2

@dataclass
class WeakClassReport:
    residue: int
    ybar: Optional[int]
    kind: str                   # "confined" or "periodic"
    m: Optional[int] = None
    limit: Optional[tuple] = None
    cycle: Optional[list] = None


def test_weak_agr(p: int, config: Optional[AGRConfig] = None, n0: int = 0,
                  delta=2, alpha0=1, beta0=2) -> dict:
    """Residue-mod-p^2 behavior table for dP_II at p in {3, 5}.

    For each residue class of the singular coordinate (and each companion
    residue, since the confined value depends on it), samples several lifts
    and reports either the confinement step and limit or the periodic cycle
    of reduced states.
    """
    if p not in (3, 5):
        raise ParameterViolationError("weak AGR is the p in {3, 5} regime")
    config = config or AGRConfig(m_max=16)
    a = Fraction(alpha0) + Fraction(beta0)
    z0 = Fraction(alpha0) - Fraction(beta0)
    from .maps import dp2_map
    spec = dp2_map(a=a, delta=delta, z0=z0, p=p)
    ctx = PadicContext(p)
    field = ctx.field
    rng = random.Random(config.seed)

    p2 = p * p
    confining = {3: (4, 7), 5: (6, 11, 16, 21)}[p]
    periodic = {3: (1, 8), 5: (1,)}[p]
    minus_one = [r for r in range(p2) if r % p == p - 1 and r not in periodic]

    reports = []
    for r in confining + tuple(minus_one):
        for ybar in range(p):
            traces = []
            for _ in range(max(3, config.samples // p)):
                t = ctx.random_unit(rng) * rng.choice([1, p, p * p])
                x0 = Fraction(r) + p2 * t
                ky = rng.choice(config.k_values)
                y0 = ctx.lift(ybar, ky, ctx.random_unit(rng))
                traces.append(iterate_reduced(spec, n0, x0, y0, config.m_max, ctx))
            found_m, limit = None, None
            for m in range(1, config.m_max + 1):
                vals = [t[m - 1] for t in traces]
                if any(isinstance(v, str) for v in vals):
                    break
                if all(v[0].is_finite and v[1].is_finite for v in vals) \
                        and all(v == vals[0] for v in vals):
                    found_m, limit = m, vals[0]
                    break
            reports.append(WeakClassReport(r, ybar, "confined" if found_m else "none",
                                           m=found_m, limit=limit))
    for r in periodic:
        x0 = Fraction(r) + p2 * ctx.random_unit(rng)
        y0 = ctx.lift(rng.randrange(p), 1, ctx.random_unit(rng))
        trace = iterate_reduced(spec, n0, x0, y0, 12, ctx)
        states = [t for t in trace if not isinstance(t, str)]
        cycle = _detect_cycle(states)
        reports.append(WeakClassReport(r, None, "periodic", cycle=cycle))
    return {"p": p, "n0": n0, "classes": reports}


def _detect_cycle(states):
    """Shortest cycle repeating from the start of a list of reduced state pairs.

    The valuation pattern can glitch to a finite value deep in the orbit (the
    12-step return only pins valuation signs), so detection uses the leading
    window, which a fresh lift traverses cleanly.
    """
    n = len(states)
    for period in range(1, n // 2 + 1):
        reps = n // period
        if reps < 2:
            break
        window = states[: reps * period]
        if all(window[i] == window[i % period] for i in range(len(window))):
            return states[:period]
    return None


def caseD_return(p: int = 3, samples: int = 5, seed: int = 0, n0: int = 0,
                 delta=2, alpha0=1, beta0=2):
    """The 12-step valuation return: from (x_{n+1}, x_n) with x_n in 1+9Z_3 and
    x_{n+1} = u/3 for a unit u, twelve steps later the same pattern holds.

    The start phase and the depth of the lifted coordinate follow the normal
    form of the return's derivation; at other phases, or with deeper companion
    valuations, the return can fail for isolated points.
    """
    from .maps import dp2_map
    a = Fraction(alpha0) + Fraction(beta0)
    z0 = Fraction(alpha0) - Fraction(beta0)
    spec = dp2_map(a=a, delta=delta, z0=z0, p=p)
    ctx = PadicContext(p)
    rng = random.Random(seed)
    results = []
    for _ in range(samples):
        m = ctx.random_unit(rng) * rng.choice([1, p, 0, 1])
        xn = Fraction(1) + p * p * m
        xn1 = ctx.random_unit(rng) / p
        state = (xn1, xn)
        for j in range(12):
            state = step(spec, n0 + j, state, _RAT)
        x13, x12 = state
        results.append(ctx.vp(x12 - 1) >= 2 and ctx.vp(x13) <= 0)
    return results
