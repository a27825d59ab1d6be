"""Registry of the rational maps under study and a generic evolution engine.

Every map is stored in coupled first-order form (x, y) -> (x', x); scalar
recurrences are views.  A backend supplies the exact field the orbit lives in
(Q via Fraction, F_q, or F_q(d)); coefficients are rational and are injected
through the backend, so the same step code serves every field.

A vanished denominator raises SingularHitError from `step`; `evolve` converts
it into data on the returned Trajectory.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .errors import (
    ParameterViolationError,
    SingularHitError,
    UnsupportedPrimeError,
)
from .fields import FFElem, FiniteField, ProjValue
from .funcfield import Poly, RatFunc

MAP_KINDS = ("dp2", "qrt", "qp1", "qp2", "qp3", "qp4", "qp5", "hv", "dp1intro")


# ---------------------------------------------------------------------------
# backends

class RationalBackend:
    """Exact arithmetic in Q."""

    name = "rat"

    def from_fraction(self, q):
        return Fraction(q)

    def is_zero(self, v) -> bool:
        return v == 0

    zero = Fraction(0)
    one = Fraction(1)


class FFBackend:
    """Arithmetic in F_q through FFElem values."""

    name = "ff"

    def __init__(self, field: FiniteField):
        self.field = field

    def from_fraction(self, q):
        q = Fraction(q)
        num = self.field.from_int(q.numerator % self.field.p)
        den = self.field.from_int(q.denominator % self.field.p)
        return FFElem(self.field, self.field.div(num, den))

    def is_zero(self, v) -> bool:
        return v.is_zero()

    @property
    def zero(self):
        return FFElem(self.field, self.field.zero)

    @property
    def one(self):
        return FFElem(self.field, self.field.one)


class RatFuncBackend:
    """Arithmetic in F_q(d); coefficients land as constants."""

    name = "funcfield"

    def __init__(self, field: FiniteField):
        self.field = field

    def from_fraction(self, q):
        q = Fraction(q)
        num = self.field.from_int(q.numerator % self.field.p)
        den = self.field.from_int(q.denominator % self.field.p)
        return RatFunc.const(self.field, self.field.div(num, den))

    def is_zero(self, v) -> bool:
        return v.is_zero()

    @property
    def zero(self):
        return RatFunc.const(self.field, 0)

    @property
    def one(self):
        return RatFunc.const(self.field, 1)


# ---------------------------------------------------------------------------
# coefficient schedule for dP_II over Q_p

class DP2Schedule:
    """Period-p coefficients alpha_n, beta_n with the zero normalization.

    alpha_{i+mp} = (i*delta + z0 + a + n_alpha*p)/2 with n_alpha the integer
    making alpha vanish exactly at one index of each period (same for beta).
    Reductions then satisfy alpha~_n = ((n*delta + z0 + a)/2)~ and
    |alpha_n|_p in {0, 1}.
    """

    def __init__(self, p: int, a, delta, z0):
        self.p = p
        self.a = Fraction(a)
        self.delta = Fraction(delta)
        self.z0 = Fraction(z0)
        if p == 2:
            raise UnsupportedPrimeError("dP_II schedule requires an odd prime")
        for name, v in (("a", self.a), ("delta", self.delta), ("z0", self.z0)):
            if v.denominator % p == 0:
                raise ParameterViolationError(f"dP_II parameter {name}={v} has negative valuation at p={p}")
        self.n_alpha = self._normalizer(self.delta, self.z0 + self.a)
        self.n_beta = self._normalizer(-self.delta, -self.z0 + self.a)

    def _normalizer(self, slope: Fraction, offset: Fraction) -> Fraction:
        # choose n_* (any p-adic integer rational) with i*slope + offset + n_*p = 0
        # for exactly the index i in 0..p-1 where the offset is divisible by p
        p = self.p
        for i in range(p):
            val = i * slope + offset
            if val == 0 or (val.denominator % p != 0 and val.numerator % p == 0):
                return Fraction(-val, p)
        raise ParameterViolationError(
            "cannot normalize schedule: no index i has i*delta+z0+a divisible by p "
            "(delta must be a p-adic unit, or the offset must vanish mod p)"
        )

    def alpha(self, n: int) -> Fraction:
        i = n % self.p
        return (i * self.delta + self.z0 + self.a + self.n_alpha * self.p) / 2

    def beta(self, n: int) -> Fraction:
        i = n % self.p
        return (-i * self.delta - self.z0 + self.a + self.n_beta * self.p) / 2


def coeff_dp2(schedule: DP2Schedule, n: int):
    return schedule.alpha(n), schedule.beta(n)


# ---------------------------------------------------------------------------
# map specification

@dataclass(frozen=True)
class MapSpec:
    """A named parametric rational map (x, y) -> (x', x) with its parameters."""

    kind: str
    params: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in MAP_KINDS:
            raise ParameterViolationError(f"unknown map kind {self.kind!r}")
        object.__setattr__(self, "params",
                           {k: (Fraction(v) if not isinstance(v, (DP2Schedule, bool)) else v)
                            for k, v in self.params.items()})
        needed = _REQUIRED_PARAMS[self.kind]
        missing = needed - set(self.params)
        if missing:
            raise ParameterViolationError(f"{self.kind}: missing parameters {sorted(missing)}")

    def check_units(self, p: int):
        """Warn when a parameter violates the map's unit-valuation conditions."""
        from .padic import PadicContext
        ctx = PadicContext(p)
        for name in _UNIT_PARAMS.get(self.kind, ()):
            v = self.params[name]
            if ctx.vp(v) != 0:
                warnings.warn(
                    f"{self.kind}: parameter {name}={v} is not a p-adic unit at p={p}",
                    stacklevel=2,
                )


_REQUIRED_PARAMS = {
    "dp2": {"a", "delta", "z0"},
    "qrt": {"a", "gamma"},
    "qp1": {"a", "b", "q"},
    "qp2": {"a", "q", "tau0"},
    "qp3": {"a", "b", "c", "d", "q"},
    "qp4": {"a", "b", "q", "tau0"},
    "qp5": {"a", "b", "c", "d", "q"},
    "hv": {"a"},
    "dp1intro": set(),
}

_UNIT_PARAMS = {
    "qrt": ("a",),
    "qp1": ("a", "b", "q"),
    "qp2": ("a", "q", "tau0"),
    "qp3": ("a", "b", "c", "d", "q"),
    "qp4": ("a", "b", "q", "tau0"),
    "qp5": ("a", "b", "c", "d", "q"),
    "hv": ("a",),
}


def dp2_map(a, delta, z0, p: Optional[int] = None) -> MapSpec:
    """dP_II; when p is given the coefficients take the period-p normalized form."""
    spec = MapSpec("dp2", {"a": a, "delta": delta, "z0": z0})
    if p is not None:
        schedule = DP2Schedule(p, a, delta, z0)
        object.__setattr__(spec, "params", {**spec.params, "schedule": schedule})
    return spec


# ---------------------------------------------------------------------------
# one evolution step

def _dp2_coeffs(spec: MapSpec, n: int):
    sched = spec.params.get("schedule")
    if isinstance(sched, DP2Schedule):
        return sched.alpha(n), sched.beta(n)
    a, delta, z0 = spec.params["a"], spec.params["delta"], spec.params["z0"]
    zn = delta * n + z0
    return (zn + a) / 2, (-zn + a) / 2


def step(spec: MapSpec, n: int, state, backend):
    """One exact step at time n; raises SingularHitError naming a vanished denominator."""
    x, y = state
    kind = spec.kind
    P = spec.params
    c = backend.from_fraction

    def guard(value, description):
        if backend.is_zero(value):
            raise SingularHitError(description)
        return value

    if kind == "dp2":
        alpha, beta = _dp2_coeffs(spec, n)
        d1 = guard(backend.one - x, "x=1")
        d2 = guard(backend.one + x, "x=-1")
        x_new = c(alpha) / d1 + c(beta) / d2 - y
    elif kind == "qrt":
        gamma = int(P["gamma"])
        den = backend.one
        if gamma > 0:
            guard(x, "x=0")
            den = x ** gamma
        den = den * guard(y, "y=0")
        x_new = (c(P["a"]) * x + backend.one) / den
    elif kind == "qp1":
        guard(x, "x=0")
        guard(y, "y=0")
        x_new = (c(P["a"] * P["q"] ** n) * x + c(P["b"])) / (x * x * y)
    elif kind == "qp2":
        tau = c(P["q"] ** n * P["tau0"])
        guard(x, "x=0")
        t1 = guard(tau - x, "x=q^n*tau0")
        t2 = guard(x * y + backend.one, "x*y=-1")
        a = c(P["a"])
        x_new = (a * tau * tau * x - t1 * t2) / (x * t1 * t2)
    elif kind == "qp3":
        a, b = c(P["a"]), c(P["b"])
        cq = c(P["c"] * P["q"] ** n)
        dq = c(P["d"] * P["q"] ** n)
        guard(y, "y=0")
        t1 = guard(x - a, "x=a")
        t2 = guard(x - b, "x=b")
        x_new = a * b * (x - cq) * (x - dq) / (y * t1 * t2)
    elif kind == "qp4":
        tau = c(P["q"] ** n * P["tau0"])
        a, b = c(P["a"]), c(P["b"])
        guard(x, "x=0")
        t1 = guard(x * y - backend.one, "x*y=1")
        t2 = guard(x + tau, "x=-q^n*tau0")
        x_new = (tau * tau * (a * x * x + b * x + a) + t1 * t2) / (x * t1 * t2)
    elif kind == "qp5":
        qn = P["q"] ** n
        a, b = c(P["a"] * qn), c(P["b"] * qn)
        cc, dd = c(P["c"]), c(P["d"])
        ci, di = c(1 / P["c"]), c(1 / P["d"])
        abq = c(P["a"] * P["b"] * P["q"] ** n)
        guard(x, "x=0")
        t1 = guard(x - a, "x=a*q^n")
        t2 = guard(x - b, "x=b*q^n")
        t3 = guard(x * y - backend.one, "x*y=1")
        x_new = (abq * (x - cc) * (x - ci) * (x - dd) * (x - di) / (t1 * t2 * t3)
                 + backend.one) / x
    elif kind == "hv":
        guard(x, "x=0")
        x_new = x + c(P["a"]) / (x * x) - y
    elif kind == "dp1intro":
        guard(x, "x=0")
        x_new = -y + backend.one / (x * x)
    else:  # pragma: no cover
        raise ParameterViolationError(f"unknown kind {kind}")
    return x_new, x


@dataclass
class Trajectory:
    start_index: int
    states: list
    termination: str = "Completed"
    event: Optional[str] = None

    def xs(self):
        return [s[0] for s in self.states]


def evolve(spec: MapSpec, n0: int, state, steps: int, backend) -> Trajectory:
    """Iterate `step` with the schedule advancing; a singular hit ends the run early."""
    states = [tuple(state)]
    cur = tuple(state)
    for k in range(steps):
        try:
            cur = step(spec, n0 + k, cur, backend)
        except SingularHitError as exc:
            return Trajectory(n0, states, "SingularHit", exc.description)
        states.append(cur)
    return Trajectory(n0, states)


# ---------------------------------------------------------------------------
# dP_II extended evolution over PF_p (p >= 7 seven-case rules)

def dp2_extended_step(p: int, n: int, u_prev: ProjValue, u_n: ProjValue,
                      schedule: DP2Schedule):
    """Emit the full burst of successor values for dP_II over PF_p.

    The burst includes the intermediate infinity and +-1 entries so rendered
    orbits match the confined sequences verbatim.  Requires p >= 7 (for
    p in {3, 5} confinement depends on residues mod p^2; see the agr module).
    """
    if p <= 5:
        raise UnsupportedPrimeError("extended rules hold for p >= 7; use weak-AGR tools")
    if u_prev.is_infinity:
        raise ParameterViolationError("u_{n-1} must be finite")
    F = FiniteField(p)
    from .padic import PadicContext
    ctx = PadicContext(p)

    def red(q):
        return ctx.reduce(q)

    def elem(pv):
        return pv.as_elem()

    a, delta = schedule.a, schedule.delta
    alpha_n, beta_n = schedule.alpha(n), schedule.beta(n)

    if u_n.is_infinity:
        # all bursts below already cover the states that reach infinity
        raise ParameterViolationError("u_n = infinity arises only inside a burst")

    one = F.elem(1)
    minus_one = F.elem(-1)
    u = elem(u_n)
    w = elem(u_prev)
    a_bar = red(a).as_elem()
    d_bar = red(delta).as_elem()

    if u != one and u != minus_one:
        x_new = elem(red(alpha_n)) / (one - u) + elem(red(beta_n)) / (one + u) - w
        return [F.proj(x_new)]

    if u == one:
        if alpha_n == 0:
            x_new = elem(red(beta_n / 2)) - w
            return [F.proj(x_new)]
        beta_n2 = schedule.beta(n + 2)
        if beta_n2 != 0:
            beta_n1 = schedule.beta(n + 1)
            num = (F.elem(2) * elem(red(alpha_n)) * w
                   + F.elem(2) * d_bar * elem(red(beta_n1))
                   + (F.elem(2) - d_bar) * a_bar)
            val = num / (F.elem(2) * elem(red(beta_n2)))
            return [F.infinity(), F.proj(minus_one), F.proj(val)]
        if a + delta != 0:
            if red(a + delta).rep == F.zero:
                raise ParameterViolationError("a+delta is a nonzero multiple of p: outside the proven cases")
            val = -(a_bar * d_bar - (a_bar - d_bar) * w) / (a_bar + d_bar)
            return [F.infinity(), F.proj(minus_one), F.infinity(), F.proj(one),
                    F.proj(val)]
        val = (one + F.elem(2) * w) / F.elem(2)
        return [F.infinity(), F.proj(minus_one), F.infinity(), F.proj(one),
                F.infinity(), F.proj(minus_one), F.proj(val)]

    # u == -1
    if schedule.beta(n) == 0:
        x_new = elem(red(alpha_n / 2)) - w
        return [F.proj(x_new)]
    alpha_n2 = schedule.alpha(n + 2)
    if alpha_n2 != 0:
        alpha_n1 = schedule.alpha(n + 1)
        num = (a_bar * (F.elem(-2) + d_bar)
               - F.elem(2) * d_bar * elem(red(alpha_n1))
               + F.elem(2) * elem(red(beta_n)) * w)
        val = num / (F.elem(2) * elem(red(alpha_n2)))
        return [F.infinity(), F.proj(one), F.proj(val)]
    if a - delta != 0:
        if red(a - delta).rep == F.zero:
            raise ParameterViolationError("a-delta is a nonzero multiple of p: outside the proven cases")
        val = (a_bar * d_bar + (a_bar + d_bar) * w) / (a_bar - d_bar)
        return [F.infinity(), F.proj(one), F.infinity(), F.proj(minus_one),
                F.proj(val)]
    val = (-one + F.elem(2) * w) / F.elem(2)
    return [F.infinity(), F.proj(one), F.infinity(), F.proj(minus_one),
            F.infinity(), F.proj(one), F.proj(val)]


def dp2_extended_orbit(p: int, schedule: DP2Schedule, n0: int,
                       u_prev: ProjValue, u_n: ProjValue, length: int):
    """Run the extended evolution, concatenating bursts, until `length` values exist."""
    values = [u_prev, u_n]
    n = n0
    while len(values) < length + 2:
        burst = dp2_extended_step(p, n, values[-2], values[-1], schedule)
        values.extend(burst)
        n += len(burst)
    return values[: length + 2]


# ---------------------------------------------------------------------------
# scalar views used by the property tests

def dp2_scalar_rhs(spec: MapSpec, n: int, x, backend):
    """(z_n x + a)/(1 - x^2): the scalar form's right-hand side."""
    a = spec.params["a"]
    delta = spec.params["delta"]
    z0 = spec.params["z0"]
    zn = backend.from_fraction(delta * n + z0)
    return (zn * x + backend.from_fraction(a)) / (backend.one - x * x)


def qp2_product_residual(spec: MapSpec, n: int, x_prev, x_n, x_next, backend):
    """Residual of the product form at time n given three consecutive x values."""
    q, tau0, a = spec.params["q"], spec.params["tau0"], spec.params["a"]
    tau = backend.from_fraction(q ** n * tau0)
    lhs = (x_next * x_n + backend.one) * (x_n * x_prev + backend.one)
    rhs = backend.from_fraction(a) * tau * tau * x_n / (tau - x_n)
    return lhs - rhs
