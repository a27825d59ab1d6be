"""Combinatorial construction of the extended initial-value space for the
autonomous dP_II map over PF_q.

The map x' = alpha/(1-x) + beta/(1+x) - y, y' = x is evaluated on all of
(PF_q)^2 with the convention j/inf = 0; the four points (+-1, inf) are the
indeterminate sources.  Splitting the multi-covered images into copies and
routing the indeterminate sources into the unfilled slots yields a bijection
on q^2 + 6q - 3 points; the one genuinely free choice (which copy of
(-+1, inf) each copy of (inf, +-1) maps to) is resolved by the p-adic
singularity-confinement probe.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import AmbiguityUnresolvedError, DegenerateParametersError
from .fields import FiniteField, is_prime
from .maps import MapSpec, RationalBackend, step
from .padic import PadicContext

_INF = None  # coordinate encoding: field rep, or None for the point at infinity


class ExtPoint(NamedTuple):
    x: object
    y: object
    copy: int = 0

    def label(self, field: FiniteField) -> str:
        fx = "inf" if self.x is _INF else field.encode(self.x)
        fy = "inf" if self.y is _INF else field.encode(self.y)
        base = f"{fx},{fy}"
        return base if self.copy == 0 else f"{base}#{self.copy}"


@dataclass
class ExtSpace:
    field: FiniteField
    alpha0: object
    beta0: object
    points: list
    next: dict
    ambiguous: bool = False
    warnings: list = dc_field(default_factory=list)

    @property
    def q(self):
        return self.field.q

    def label(self, pt: ExtPoint) -> str:
        return pt.label(self.field)


def sakai_count(q: int) -> int:
    """Size of the unreduced (Sakai-style) space of initial conditions."""
    return q * q + 10 * q + 1


def minimal_count(q: int) -> int:
    return q * q + 6 * q - 3


def split_prime_power(q: int):
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                raise ValueError(f"{q} is not a prime power")
            m = 0
            t = q
            while t % p == 0:
                t //= p
                m += 1
            if t != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, m
    raise ValueError(f"{q} is not a prime power")


def _phi_hat(field: FiniteField, alpha, beta, x, y):
    """Evaluate the map with the extended conventions; None result = indeterminate."""
    F = field
    terms = []
    for coeff, sign in ((alpha, 1), (beta, -1)):
        # coeff / (1 -+ x); an exactly-zero coefficient kills the term
        if F.is_zero(coeff):
            terms.append(F.zero)
            continue
        if x is _INF:
            terms.append(F.zero)  # j/inf = 0
            continue
        den = F.sub(F.one, x) if sign == 1 else F.add(F.one, x)
        if F.is_zero(den):
            terms.append(_INF)
        else:
            terms.append(F.div(coeff, den))
    terms.append(_INF if y is _INF else F.neg(y))
    infs = sum(1 for t in terms if t is _INF)
    if infs >= 2:
        return None  # inf +- inf
    if infs == 1:
        return (_INF, x)
    acc = F.zero
    for t in terms:
        acc = F.add(acc, t)
    return (acc, x)


def _probe_assignment(field: FiniteField, alpha0, beta0, sing: int, rng_seedless=True):
    """j(y) = x~_3 from exact iteration of lifts of (sing, y): the composite
    target slot for the singular chain starting at x = sing (+1 or -1)."""
    p = field.p
    ctx = PadicContext(p)
    a = Fraction(int(alpha0) + int(beta0))
    z0 = Fraction(int(alpha0) - int(beta0))
    spec = MapSpec("dp2", {"a": a, "delta": 0, "z0": z0})
    backend = RationalBackend()
    s_hat = sing % p
    out = {}
    for y in range(p):
        values = set()
        for (k, e) in ((1, Fraction(1)), (1, Fraction(2)), (2, Fraction(1)),
                       (1, Fraction(1, 2)) if p != 2 else (2, Fraction(3))):
            x0 = Fraction(s_hat) + e * p ** k
            state = (x0, Fraction(y))
            for n in range(3):
                state = step(spec, n, state, backend)
            red = ctx.reduce(state[0])
            if red.is_infinity:
                raise AmbiguityUnresolvedError(
                    f"probe from ({sing},{y}) did not confine at step 3")
            values.add(red.rep)
        if len(values) != 1:
            raise AmbiguityUnresolvedError(
                f"probe from ({sing},{y}) is lift-dependent: {values}")
        out[y] = values.pop()
    if len(set(out.values())) != p:
        raise AmbiguityUnresolvedError(f"probe map {out} is not a bijection")
    return out


def build_ext_space(q: int, alpha0, beta0, modulus=None) -> ExtSpace:
    """Construct the extended space and its bijection for generic parameters."""
    p, m = split_prime_power(q)
    if p == 2:
        raise DegenerateParametersError("the construction needs q odd (x = -1 distinct from 1)")
    field = FiniteField(p, m, modulus)
    alpha = field.elem(alpha0).rep
    beta = field.elem(beta0).rep
    if field.is_zero(alpha) or field.is_zero(beta):
        raise DegenerateParametersError(
            "alpha0 = 0 or beta0 = 0 identifies exceptional lines; the generic "
            "construction does not apply")

    one = field.one
    minus_one = field.neg(one)
    finite = sorted(field.elements(), key=_rank_key)
    rank = {rep: i for i, rep in enumerate(finite)}

    warnings = []
    ambiguous = False
    if m == 1:
        try:
            probe_plus = _probe_assignment(field, alpha, beta, 1)
            probe_minus = _probe_assignment(field, alpha, beta, -1 % p)
        except AmbiguityUnresolvedError as exc:
            warnings.append(f"{exc}; falling back to deterministic ordering")
            ambiguous = True
            probe_plus = probe_minus = None
    else:
        warnings.append("singularity-confinement probe unavailable for q = p^m with "
                        "m > 1; copy assignment uses deterministic ordering")
        ambiguous = True
        probe_plus = probe_minus = None

    points = []
    nxt = {}

    def add(pt):
        points.append(pt)
        return pt

    # copies exist along the four singular chains
    for rep in finite:
        for sing in (one, minus_one):
            add(ExtPoint(sing, rep))                      # (+-1, y): sources of splits
    chain_heads = {}
    for sing in (one, minus_one):
        for i in range(1, q + 1):
            chain_heads[(_key(sing), i)] = add(ExtPoint(_INF, sing, i))   # (inf, +-1)_i
            add(ExtPoint(sing, _INF, i))                  # (+-1, inf)_i
    # all remaining base points, unsplit
    for x in finite:
        if x in (one, minus_one):
            continue
        for y in finite:
            add(ExtPoint(x, y))
    for x in finite:
        add(ExtPoint(x, _INF))
        add(ExtPoint(_INF, x))
        if x in (one, minus_one):
            # (inf, +-1) exist only as copies; drop the unsplit duplicates
            points.remove(ExtPoint(x, _INF))
            points.remove(ExtPoint(_INF, x))
    add(ExtPoint(_INF, _INF))

    # regular transitions
    for pt in points:
        if pt.copy:
            continue
        x, y = pt.x, pt.y
        if x in (one, minus_one) and y is not _INF:
            # split image: (+-1, y) -> (inf, +-1)_{rank(y)+1}
            nxt[pt] = ExtPoint(_INF, x, rank[y] + 1)
            continue
        image = _phi_hat(field, alpha, beta, x, y)
        if image is None:
            raise AmbiguityUnresolvedError(f"unexpected indeterminate point {pt}")
        nxt[pt] = ExtPoint(image[0], image[1])

    # chain transitions: (inf, s)_i -> (-s, inf)_sigma(i) -> (slot, -s)
    for sing, probe in ((one, probe_plus), (minus_one, probe_minus)):
        t = field.neg(sing)
        for i in range(1, q + 1):
            if probe is not None:
                y = finite[i - 1]
                slot = probe[int(_key(y))]
                target_copy = rank[field.from_int(slot)] + 1
            else:
                target_copy = i
            nxt[ExtPoint(_INF, sing, i)] = ExtPoint(t, _INF, target_copy)
        for i in range(1, q + 1):
            # (s, inf)_i fills the i-th lex slot (y' = s)
            nxt[ExtPoint(sing, _INF, i)] = ExtPoint(finite[i - 1], sing)

    space = ExtSpace(field, alpha, beta, points, nxt,
                     ambiguous=ambiguous, warnings=warnings)
    _verify_bijection(space)
    return space


def _key(rep):
    return rep if isinstance(rep, int) else sum(c * 10 ** i for i, c in enumerate(rep))


def _rank_key(rep):
    return _key(rep)


def _verify_bijection(space: ExtSpace):
    pts = set(space.points)
    if len(pts) != len(space.points):
        raise AmbiguityUnresolvedError("duplicate points in the space")
    images = list(space.next.values())
    if set(space.next) != pts:
        missing = pts - set(space.next)
        raise AmbiguityUnresolvedError(f"map not total; missing {list(missing)[:4]}")
    if set(images) != pts or len(set(images)) != len(images):
        from collections import Counter
        dup = [k for k, v in Counter(images).items() if v > 1]
        raise AmbiguityUnresolvedError(f"map not a bijection; duplicated images {dup[:4]}")


def restriction_agrees(space: ExtSpace) -> bool:
    """next equals the plain map on unsplit points with non-singular image."""
    F = space.field
    for pt, img in space.next.items():
        if pt.copy or img.copy:
            continue
        image = _phi_hat(F, space.alpha0, space.beta0, pt.x, pt.y)
        if image is None:
            return False
        if (image[0], image[1]) != (img.x, img.y):
            return False
    return True


@dataclass
class TransitionGraph:
    space: ExtSpace
    cycles: list

    def cycle_lengths(self):
        return sorted(len(c) for c in self.cycles)


def orbit_decomposition(space: ExtSpace) -> TransitionGraph:
    """Disjoint cycles of the bijection (every node has in/out degree one)."""
    seen = set()
    cycles = []
    for start in space.points:
        if start in seen:
            continue
        cycle = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            cycle.append(cur)
            cur = space.next[cur]
        if cur == cycle[0]:
            cycles.append(cycle)
        else:  # pragma: no cover - bijection guarantees pure cycles
            raise AmbiguityUnresolvedError("rho-shaped orbit in a bijection")
    return TransitionGraph(space, cycles)


def to_dot(space: ExtSpace) -> str:
    lines = ["digraph initspace {"]
    for pt in space.points:
        lines.append(f'  "{space.label(pt)}";')
    for pt, img in space.next.items():
        lines.append(f'  "{space.label(pt)}" -> "{space.label(img)}";')
    lines.append("}")
    return "\n".join(lines)


def to_adjacency(space: ExtSpace) -> dict:
    return {space.label(pt): space.label(img) for pt, img in space.next.items()}


def cycles_csv(graph: TransitionGraph) -> str:
    rows = ["cycle_index,length,nodes"]
    for i, cyc in enumerate(sorted(graph.cycles, key=len)):
        nodes = " ".join(graph.space.label(p) for p in cyc)
        rows.append(f"{i},{len(cyc)},{nodes}")
    return "\n".join(rows) + "\n"
