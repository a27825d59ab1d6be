"""2-D lattice evolution of the coupled discrete KdV equation and its
generalization, box-ball dynamics, the valuation cellular automaton, and grid
rendering.

Interior arithmetic always stays in the lifted backend (F_q(d) or exact
rationals); reduction to PF_q happens only at output time, which is what keeps
the evolution free of deadlocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import (
    TrueIndeterminateError,
    UnsupportedForExtensionFieldError,
)
from .fields import FiniteField, ProjValue
from .funcfield import RatFunc, reduce_at
from .padic import PadicContext


@dataclass
class GridSpec:
    sites: int
    steps: int
    x_initial: list                 # x_j^0 for j = 1..sites
    y_boundary: list                # y_1^t for t = 0..steps-1
    kind: str = "dkdv"              # "dkdv" or "gen"
    backend: str = "funcfield"      # "funcfield" | "padic" | "rational"
    # dkdv: delta; gen: alpha, beta
    delta: object = None
    alpha: object = None
    beta: object = None
    p: int = None                   # prime (funcfield/padic backends)
    delta0: object = None           # evaluation point for the funcfield backend

    def __post_init__(self):
        if len(self.x_initial) != self.sites:
            raise ValueError("x_initial length must equal sites")
        if len(self.y_boundary) < self.steps:
            raise ValueError("y_boundary must cover all time steps")


@dataclass
class Grid:
    values: dict                    # (n, t) -> cell value
    sites: int
    steps: int
    meta: dict = dc_field(default_factory=dict)

    def row(self, t):
        return [self.values[(n, t)] for n in range(1, self.sites + 1)]


def _dkdv_step_cell(x, y, delta, one):
    w = one + delta * x * y
    x_new = (one + delta) * y / w
    y_next = w * x / (one + delta)
    return x_new, y_next


def _gen_step_cell(x, y, alpha, beta, one):
    w = x * y
    da = (one - alpha) + alpha * w
    db = (one - beta) + beta * w
    x_new = db * y / da
    y_next = da * x / db
    return x_new, y_next


def evolve_lattice(spec: GridSpec):
    """Sweep the lattice row by row; returns the unreduced (x, y) grids."""
    if spec.backend == "funcfield":
        field = FiniteField(spec.p)
        one = RatFunc.const(field, 1)
        conv = lambda v: v if isinstance(v, RatFunc) else RatFunc.const(field, field.elem(v))
        delta = RatFunc.x(field) if spec.delta in (None, "symbolic") else conv(spec.delta)
        alpha = conv(spec.alpha) if spec.alpha is not None else None
        beta = conv(spec.beta) if spec.beta is not None else None
    else:
        one = Fraction(1)
        conv = Fraction
        delta = Fraction(spec.delta) if spec.delta is not None else None
        alpha = Fraction(spec.alpha) if spec.alpha is not None else None
        beta = Fraction(spec.beta) if spec.beta is not None else None

    xs = {}
    ys = {}
    for j, v in enumerate(spec.x_initial, start=1):
        xs[(j, 0)] = conv(v)
    for t, v in enumerate(spec.y_boundary[: spec.steps]):
        ys[(1, t)] = conv(v)

    for t in range(spec.steps):
        for n in range(1, spec.sites + 1):
            x = xs[(n, t)]
            y = ys[(n, t)]
            try:
                if spec.kind == "dkdv":
                    x_new, y_next = _dkdv_step_cell(x, y, delta, one)
                else:
                    x_new, y_next = _gen_step_cell(x, y, alpha, beta, one)
            except ZeroDivisionError as exc:
                raise TrueIndeterminateError(
                    f"backend division by zero at cell (n={n}, t={t})",
                    cell=(n, t)) from exc
            xs[(n, t + 1)] = x_new
            ys[(n + 1, t)] = y_next

    meta = {"kind": spec.kind, "backend": spec.backend}
    gx = Grid(xs, spec.sites, spec.steps + 1, meta)
    gy = Grid(ys, spec.sites + 1, spec.steps, meta)
    return gx, gy


def reduce_grid(grid: Grid, spec: GridSpec) -> Grid:
    """End-of-pipeline reduction of every cell to PF_p."""
    out = {}
    if spec.backend == "funcfield":
        field = FiniteField(spec.p)
        at = field.elem(spec.delta0).rep
        for key, v in grid.values.items():
            out[key] = reduce_at(v, at)
    else:
        ctx = PadicContext(spec.p)
        for key, v in grid.values.items():
            out[key] = ctx.reduce(v)
    return Grid(out, grid.sites, grid.steps, dict(grid.meta, reduced=True))


def dkdv_worked_example(delta0=1, p=7, sites=2, steps=2):
    """The two-site hand-worked start: x_1^0=6, x_2^0=5, y_1^t=2."""
    x0 = [6, 5, 4, 3] + [2] * max(0, sites - 4)
    spec = GridSpec(sites=sites, steps=steps, x_initial=x0[:sites],
                    y_boundary=[2] * steps, kind="dkdv", backend="funcfield",
                    p=p, delta0=delta0)
    gx, gy = evolve_lattice(spec)
    return spec, gx, gy


# ---------------------------------------------------------------------------
# box-ball system

@dataclass
class BBSState:
    balls: list
    capacity: int = 1

    def __post_init__(self):
        if any(u < 0 or u > self.capacity for u in self.balls):
            raise ValueError("box occupancy outside 0..capacity")

    @property
    def total(self):
        return sum(self.balls)


def bbs_step(state: BBSState) -> BBSState:
    """U_n^{t+1} = min(L - U_n^t, sum_{k<n}(U_k^t - U_k^{t+1})): one sweep with
    the running carrier sum; the left boundary must be empty."""
    L = state.capacity
    out = []
    carried = 0  # balls picked up strictly to the left
    for u in state.balls:
        new = min(L - u, carried)
        carried += u - new
        out.append(new)
    return BBSState(out, L)


def bbs_evolve(state: BBSState, steps: int, pad: int = None):
    """Evolve the box-ball system; pads the right edge so balls never fall off."""
    pad = pad if pad is not None else steps * max(1, state.total) + 2
    cur = BBSState(list(state.balls) + [0] * pad, state.capacity)
    history = [cur]
    for _ in range(steps):
        cur = bbs_step(cur)
        history.append(cur)
    return history


def soliton_blocks(cells) -> list:
    """Lengths of maximal nonzero blocks (sorted); the conserved content."""
    blocks = []
    run = 0
    for v in cells:
        if v:
            run += v if isinstance(v, int) else 1
        elif run:
            blocks.append(run)
            run = 0
    if run:
        blocks.append(run)
    return sorted(blocks)


# ---------------------------------------------------------------------------
# valuation cellular automaton

def valuation_ca(p: int, m: int, blocks, steps: int, left_pad: int = None,
                 right_pad: int = None, gap: int = 3):
    """Evolve dKdV over Q with delta = p^m from {1, p^-m} data and round the
    scaled valuations: x = p^-m maps to 1, x = 1 maps to 0.

    `blocks` lists the soliton sizes, placed left to right with `gap`
    background sites between them; returns the integer grid (rows by t).
    """
    if m <= 0:
        raise ValueError("need m > 0")
    left_pad = left_pad if left_pad is not None else max(blocks) + 2
    # the fastest soliton can travel slightly over max(blocks) sites per step
    right_pad = (right_pad if right_pad is not None
                 else steps * (max(blocks) + 1) + sum(blocks) + 6)
    row = [Fraction(1)] * left_pad
    for i, size in enumerate(blocks):
        row.extend([Fraction(1, p ** m)] * size)
        if i + 1 < len(blocks):
            row.extend([Fraction(1)] * gap)
    row.extend([Fraction(1)] * right_pad)
    sites = len(row)
    spec = GridSpec(sites=sites, steps=steps, x_initial=row,
                    y_boundary=[1] * steps, kind="dkdv", backend="rational",
                    delta=Fraction(p ** m), p=p)
    gx, _ = evolve_lattice(spec)
    ctx = PadicContext(p)
    out = []
    ties = []
    for t in range(steps + 1):
        cells = []
        for n in range(1, sites + 1):
            v = ctx.vp(gx.values[(n, t)])
            scaled = Fraction(int(v), m) if v != float("inf") else Fraction(0)
            r = _round_half_away(scaled)
            if scaled.denominator == 2:
                ties.append((n, t))
            cells.append(-r)
        out.append(cells)
    return out, {"ties": ties, "p": p, "m": m}


def _round_half_away(x: Fraction) -> int:
    from math import floor
    if x >= 0:
        return int(floor(x + Fraction(1, 2)))
    return -int(floor(-x + Fraction(1, 2)))


def classify_soliton_speed(delta, l, p: int) -> str:
    """Speed regime of one dKdV soliton from the valuations of X and Y."""
    delta, l = Fraction(delta), Fraction(l)
    if l == 0 or 1 + delta - l == 0:
        raise ValueError("need l != 0 and 1 + delta - l != 0")
    ctx = PadicContext(p)
    X = (1 - l) / l
    Y = (l + delta) / (1 + delta - l)
    vx, vy = ctx.vp(X), ctx.vp(Y)
    if vx == 0 and vy == 0:
        return "periodic"
    if vx != 0 and vy != 0:
        return "real-like"
    return "degenerate-speed"


# ---------------------------------------------------------------------------
# rendering

def render_csv(grid_values: dict) -> str:
    rows = ["n,t,value"]
    for (n, t) in sorted(grid_values, key=lambda k: (k[1], k[0])):
        rows.append(f"{n},{t},{grid_values[(n, t)]}")
    return "\n".join(rows) + "\n"


def render_json(grid_values: dict, meta: dict) -> str:
    import json
    ns = sorted({n for n, _ in grid_values})
    ts = sorted({t for _, t in grid_values})
    data = [[str(grid_values.get((n, t))) for n in ns] for t in ts]
    return json.dumps({"meta": meta, "n": ns, "t": ts, "values": data}, indent=1)


def render_ascii(grid_values: dict, background="0") -> str:
    """Rows are time steps; '.' marks the background value."""
    ns = sorted({n for n, _ in grid_values})
    ts = sorted({t for _, t in grid_values})
    lines = []
    for t in ts:
        chars = []
        for n in ns:
            v = grid_values.get((n, t))
            s = str(v)
            if s == str(background):
                chars.append(".")
            elif s == "inf":
                chars.append("∞")
            elif len(s) == 1:
                chars.append(s)
            else:
                chars.append("*")
        lines.append("".join(chars))
    return "\n".join(lines) + "\n"


def render_pgm(grid_values: dict, p: int, m: int = 1, scale: float = 0.85) -> bytes:
    """P5 binary; 0 is white (255), p-1 dark gray, infinity black (0)."""
    if m > 1:
        raise UnsupportedForExtensionFieldError(
            "extension fields have no canonical total order; use csv or json")
    ns = sorted({n for n, _ in grid_values})
    ts = sorted({t for _, t in grid_values})
    header = f"P5\n{len(ns)} {len(ts)}\n255\n".encode()
    body = bytearray()
    for t in ts:
        for n in ns:
            v = grid_values.get((n, t))
            if isinstance(v, ProjValue) and v.is_infinity or str(v) == "inf":
                body.append(0)
            else:
                r = v.rep if isinstance(v, ProjValue) else int(str(v))
                level = int(255 * (1 - scale * r / max(1, p - 1)))
                body.append(max(0, min(255, level)))
    return header + bytes(body)
