"""Diophantine (height) entropy: exact height series over Q, growth-rate
estimation, and the numerator/denominator variants.

Heights are computed from fully reduced big rationals; no floating point
enters before the final logarithm, and the integer parts of log-heights are
decided by exact comparison with powers of the base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import DegenerateSeriesError, SingularHitError
from .maps import MapSpec, RationalBackend, step

_RAT = RationalBackend()


def height(x) -> int:
    """max(|numerator|, denominator) in lowest terms; H(0) = 0."""
    x = Fraction(x)
    if x == 0:
        return 0
    return max(abs(x.numerator), x.denominator)


def log_big(H: int, base: float = math.e) -> float:
    """log of a possibly huge positive integer without overflow."""
    if H <= 0:
        raise ValueError("log of a nonpositive height")
    if H.bit_length() <= 512:
        return math.log(H) / math.log(base)
    top = H.bit_length() - 64
    mant = H >> top
    return (math.log(mant) + top * math.log(2)) / math.log(base)


def floor_log_exact(H: int, base: int) -> int:
    """Largest k with base^k <= H, decided by exact integer comparison."""
    if H <= 0:
        raise ValueError("floor log of a nonpositive height")
    k = max(0, int(log_big(H, base)))
    while base ** k > H:
        k -= 1
    while base ** (k + 1) <= H:
        k += 1
    return k


@dataclass
class HeightEntry:
    n: int
    H: int
    log: float          # log_base H (0 for H in {0, 1})
    floor: int          # exact integer part (0 for H in {0, 1})


@dataclass
class HeightSeries:
    base: int
    entries: list
    termination: str = "Completed"

    def floors(self):
        return [e.floor for e in self.entries]

    def logs(self):
        return [e.log for e in self.entries]

    def __len__(self):
        return len(self.entries)


def _entry(n, H, base):
    if H <= 1:
        return HeightEntry(n, H, 0.0, 0)
    return HeightEntry(n, H, log_big(H, base), floor_log_exact(H, base))


def height_series(spec: MapSpec, init, n_max: int, base: int = 3,
                  n0: int = 0, reduce_every: int = 1) -> HeightSeries:
    """Exact heights of x_0..x_{n_max} along the orbit from (x_1, x_0) = init.

    init is the state (x, y) = (x_1, x_0); entries start at x_0.  With
    reduce_every > 1 the fraction is renormalized only periodically (a
    benchmarking mode; results are identical).
    """
    x, y = Fraction(init[0]), Fraction(init[1])
    entries = [_entry(0, height(y), base), _entry(1, height(x), base)]
    termination = "Completed"
    if reduce_every <= 1:
        state = (x, y)
        for k in range(1, n_max):
            try:
                state = step(spec, n0 + k, state, _RAT)
            except SingularHitError as exc:
                termination = f"SingularHit({exc.description})"
                break
            entries.append(_entry(k + 1, height(state[0]), base))
    else:
        num_x, den_x = x.numerator, x.denominator
        num_y, den_y = y.numerator, y.denominator
        for k in range(1, n_max):
            fx = Fraction(num_x, den_x)
            fy = Fraction(num_y, den_y)
            try:
                nxt = step(spec, n0 + k, (fx, fy), _RAT)
            except SingularHitError as exc:
                termination = f"SingularHit({exc.description})"
                break
            num_y, den_y = num_x, den_x
            num_x, den_x = nxt[0].numerator, nxt[0].denominator
            if k % reduce_every == 0:
                g = math.gcd(num_x, den_x)
                num_x //= g
                den_x //= g
            entries.append(_entry(k + 1, height(Fraction(num_x, den_x)), base))
    return HeightSeries(base, entries, termination)


@dataclass
class EntropyEstimate:
    epsilon: float
    ratio: float
    method: str
    window: tuple
    details: dict = dc_field(default_factory=dict)


def estimate_entropy(series: HeightSeries, method: str = "ratio-limit") -> EntropyEstimate:
    """epsilon = lim (1/n) log log H along the tail window (last third)."""
    if len(series) < 6:
        raise DegenerateSeriesError("need at least 6 entries")
    logs = series.logs()
    w = max(2, -(-len(logs) // 3))
    tail = logs[-w:]
    if tail[0] <= 0 or tail[-1] <= 0:
        raise DegenerateSeriesError("heights stopped growing in the tail window")
    if method == "ratio-limit":
        if tail[-1] == tail[0]:
            raise DegenerateSeriesError("no growth across the tail window")
        r = (tail[-1] / tail[0]) ** (1.0 / (w - 1))
        return EntropyEstimate(math.log(r), r, method, (len(logs) - w, len(logs) - 1))
    if method == "loglog-slope":
        import numpy as np
        ns, ys = [], []
        for i, v in enumerate(logs):
            if v > 0:
                ns.append(i)
                ys.append(math.log(v))
        ns, ys = ns[-w:], ys[-w:]
        slope, _ = np.polyfit(ns, ys, 1)
        return EntropyEstimate(float(slope), math.exp(float(slope)), method,
                               (ns[0], ns[-1]))
    raise ValueError(f"unknown method {method!r}")


def fit_growth(series: HeightSeries, degree: int):
    """Least-squares polynomial fit of log_base H(x_n) against n."""
    if len(series) <= degree + 1:
        raise DegenerateSeriesError("series shorter than the fit degree")
    import numpy as np
    ys = series.logs()
    ns = list(range(len(ys)))
    coeffs = np.polyfit(ns, ys, degree)
    fitted = np.polyval(coeffs, ns)
    residual = float(np.sqrt(np.mean((fitted - np.array(ys)) ** 2)))
    return [float(c) for c in coeffs[::-1]], residual


def split_series(spec: MapSpec, init, n_max: int, base: int = 3, n0: int = 0):
    """Height, numerator-only, and denominator-only log series of one orbit."""
    x, y = Fraction(init[0]), Fraction(init[1])
    hs, num_s, den_s = [], [], []
    seq = [y, x]
    state = (x, y)
    termination = "Completed"
    for k in range(1, n_max):
        try:
            state = step(spec, n0 + k, state, _RAT)
        except SingularHitError as exc:
            termination = f"SingularHit({exc.description})"
            break
        seq.append(state[0])
    for n, v in enumerate(seq):
        hs.append(_entry(n, height(v), base))
        num_s.append(_entry(n, abs(v.numerator), base))
        den_s.append(_entry(n, v.denominator, base))
    return (HeightSeries(base, hs, termination),
            HeightSeries(base, num_s, termination),
            HeightSeries(base, den_s, termination))


def series_csv(series: HeightSeries) -> str:
    from .padic import unlock_big_int_str
    unlock_big_int_str()
    rows = ["n,H,log_base_H,floor"]
    for e in series.entries:
        rows.append(f"{e.n},{e.H},{e.log:.6f},{e.floor}")
    return "\n".join(rows) + "\n"


def summary_json(series: HeightSeries, estimate: EntropyEstimate = None,
                 fit=None) -> dict:
    out = {
        "base": series.base,
        "length": len(series),
        "termination": series.termination,
        "floors": series.floors(),
    }
    if estimate is not None:
        out["entropy"] = {"epsilon": estimate.epsilon, "ratio": estimate.ratio,
                          "method": estimate.method, "window": list(estimate.window)}
    if fit is not None:
        out["fit"] = {"coefficients": fit[0], "residual": fit[1]}
    return out
