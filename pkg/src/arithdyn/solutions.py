"""Determinant special solutions: dP_II rationals, q-Airy solutions of qP_II,
and N-soliton solutions of the discrete KdV equation and its generalization.

Everything is exact: tau/sigma determinants are evaluated over Q or over
F_q(d), and the defining-equation residuals vanish identically rather than
approximately.  Grids additionally get a cached evaluator that expands the
soliton determinants into principal minors, so whole windows cost polynomial
power tables instead of per-cell determinants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import (
    FGVanishesError,
    GVanishesError,
    SigmaVanishesError,
    TauVanishesError,
)
from .fields import FiniteField, ProjValue
from .funcfield import Poly, RatFunc, reduce_strict, reduce_tracked
from .linalg import det
from .padic import PadicContext


# ---------------------------------------------------------------------------
# Laguerre-type tau functions and dP_II rational solutions

def binom_general(top, k: int) -> Fraction:
    """Generalized binomial via falling factorials; top may be any integer."""
    if k < 0:
        return Fraction(0)
    num = Fraction(1)
    for j in range(k):
        num *= Fraction(top - j)
    fact = 1
    for j in range(2, k + 1):
        fact *= j
    return num / fact


def laguerre(k: int, nu: int, lam) -> Fraction:
    """Sum_{r=0}^k (-1)^r C(k+nu, k-r) lam^r / r!; zero for negative k."""
    if k < 0:
        return Fraction(0)
    lam = Fraction(lam)
    total = Fraction(0)
    fact_r = 1
    for r in range(k + 1):
        if r > 1:
            fact_r *= r
        term = binom_general(k + nu, k - r) * lam ** r / fact_r
        total += term if r % 2 == 0 else -term
    return total


class TauTable:
    """Cached tau_N^n = det[L_{N+1-2i+j}^{(n)}] over Q."""

    def __init__(self, lam):
        self.lam = Fraction(lam)
        self._cache = {}

    def tau(self, N: int, n: int) -> Fraction:
        if N == 0:
            return Fraction(1)
        key = (N, n)
        if key not in self._cache:
            mat = [[laguerre(N + 1 - 2 * i + j, n, self.lam) for j in range(1, N + 1)]
                   for i in range(1, N + 1)]
            self._cache[key] = det(mat)
        return self._cache[key]


def dp2_rational(N: int, lam, n: int, table: TauTable = None) -> Fraction:
    """u_n = tau_{N+1}^{n+1} tau_N^{n-1} / (tau_{N+1}^n tau_N^n) - 1."""
    t = table or TauTable(lam)
    den = t.tau(N + 1, n) * t.tau(N, n)
    if den == 0:
        raise TauVanishesError(f"tau product vanishes at n={n}")
    return t.tau(N + 1, n + 1) * t.tau(N, n - 1) / den - 1


def dp2_rational_params(N: int, lam):
    """The dP_II parameters this solution satisfies: a, delta, z0."""
    lam = Fraction(lam)
    return Fraction(-2 * (N + 1)) / lam, Fraction(2) / lam, Fraction(2) / lam


def dp2_rational_reduced(N: int, lam, p: int, n: int, table: TauTable = None) -> ProjValue:
    return PadicContext(p).reduce(dp2_rational(N, lam, n, table))


def check_taucond(N: int, p: int, lam=1):
    """The two reduced tau quantities, and whether both avoid the forbidden values."""
    ctx = PadicContext(p)
    t = TauTable(lam)
    v1 = ctx.reduce(t.tau(N + 1, -N - 1) * t.tau(N, -N - 3))
    den = t.tau(N + 1, N) * t.tau(N, N)
    if den == 0:
        raise TauVanishesError("tau product vanishes in the second condition")
    v2 = ctx.reduce(t.tau(N + 1, N + 1) * t.tau(N, N - 1) / den)
    ok = (v1 != 0) and (v2 != 2)
    return v1, v2, ok


def dp2_equation_residual(N: int, lam, n: int, table: TauTable = None) -> Fraction:
    """u_{n+1} + u_{n-1} - (z_n u_n + a)/(1 - u_n^2); identically zero."""
    t = table or TauTable(lam)
    a, delta, z0 = dp2_rational_params(N, lam)
    u_prev = dp2_rational(N, lam, n - 1, t)
    u = dp2_rational(N, lam, n, t)
    u_next = dp2_rational(N, lam, n + 1, t)
    zn = delta * n + z0
    return u_next + u_prev - (zn * u + a) / (1 - u * u)


# ---------------------------------------------------------------------------
# q-Airy function and qP_II determinant solutions

@dataclass
class QAirySolution:
    c0: Fraction
    c1: Fraction
    q: Fraction
    tau0: Fraction
    _w_cache: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.c0 = Fraction(self.c0)
        self.c1 = Fraction(self.c1)
        self.q = Fraction(self.q)
        self.tau0 = Fraction(self.tau0)

    def w(self, n: int) -> Fraction:
        """w(q^n tau0), extended to all integers by the Airy three-term relation."""
        if n in self._w_cache:
            return self._w_cache[n]
        # seeds: w(q tau0) = c1, w(tau0) = -c0 (from P_{-1} = 0, P_{-2} = -1)
        self._w_cache.setdefault(1, self.c1)
        self._w_cache.setdefault(0, -self.c0)
        lo = min(self._w_cache)
        hi = max(self._w_cache)
        while hi < n:
            # w(q^{k+1} t0) = q^k t0 w(q^k t0) - w(q^{k-1} t0)
            self._w_cache[hi + 1] = (self.q ** hi * self.tau0 * self._w_cache[hi]
                                     - self._w_cache[hi - 1])
            hi += 1
        while lo > n:
            self._w_cache[lo - 1] = (self.q ** lo * self.tau0 * self._w_cache[lo]
                                     - self._w_cache[lo + 1])
            lo -= 1
        return self._w_cache[n]

    def airy_residual(self, n: int) -> Fraction:
        """w(q tau) - tau w(tau) + w(tau/q) at tau = q^n tau0; identically zero."""
        return self.w(n + 1) - self.q ** n * self.tau0 * self.w(n) + self.w(n - 1)


def qairy_poly(n: int, x, q) -> Fraction:
    """P_n(x; q), the tridiagonal determinant, via P_n = q^n x P_{n-1} - P_{n-2}."""
    x, q = Fraction(x), Fraction(q)
    if n < -2:
        raise ValueError("P_n is used for n >= -2 only")
    if n == -2:
        return Fraction(-1)
    p_prev, p_cur = Fraction(0), Fraction(1)      # P_{-1}, P_0
    if n == -1:
        return p_prev
    for k in range(1, n + 1):
        p_prev, p_cur = p_cur, q ** k * x * p_cur - p_prev
    return p_cur


def qairy_poly_coeffs(n: int, q) -> list:
    """Coefficients of P_n(x; q) in x (ascending); leading is q^{n(n+1)/2}."""
    q = Fraction(q)
    prev = [Fraction(-1)]          # P_{-2}
    cur = []                       # P_{-1} = 0
    for k in range(n + 1):
        shifted = [Fraction(0)] + [q ** k * c for c in cur]
        size = max(len(shifted), len(prev))
        shifted += [Fraction(0)] * (size - len(shifted))
        mins = prev + [Fraction(0)] * (size - len(prev))
        prev, cur = cur, [a - b for a, b in zip(shifted, mins)]
    while cur and cur[-1] == 0:
        cur.pop()
    return cur


def qairy_w_via_poly(n: int, sol: QAirySolution) -> Fraction:
    """w(q^{n+1} tau0) = c1 P_n(tau0; q) + c0 P_{n-1}(q tau0; q) (n >= -1)."""
    return (sol.c1 * qairy_poly(n, sol.tau0, sol.q)
            + sol.c0 * qairy_poly(n - 1, sol.q * sol.tau0, sol.q))


def qp2_g(N: int, n: int, sol: QAirySolution) -> Fraction:
    """g^{(N)}(q^n tau0): Casorati determinant of Airy values."""
    if N == 0:
        return Fraction(1)
    if N > 0:
        mat = [[sol.w(n - i + 2 * j - 1) for j in range(1, N + 1)]
               for i in range(1, N + 1)]
    else:
        mat = [[sol.w(n + i - 2 * j) for j in range(1, -N + 1)]
               for i in range(1, -N + 1)]
    return det(mat)


def qp2_solution(N: int, sol: QAirySolution, n: int) -> Fraction:
    """z^{(N)}(q^n tau0); satisfies the qP_II product form with a = q^{2N+1}."""
    g_n = qp2_g(N, n, sol)
    g1_n1 = qp2_g(N + 1, n + 1, sol)
    g_n1 = qp2_g(N, n + 1, sol)
    g1_n = qp2_g(N + 1, n, sol)
    power = N if N >= 0 else N + 1
    den = sol.q ** power * g_n1 * g1_n
    if den == 0:
        raise GVanishesError(f"g determinant vanishes at n={n}")
    return g_n * g1_n1 / den


def qp2_equation_residual(N: int, sol: QAirySolution, n: int) -> Fraction:
    """(z(q tau) z(tau) + 1)(z(tau) z(tau/q) + 1) - a tau^2 z(tau)/(tau - z(tau))."""
    a = sol.q ** (2 * N + 1)
    tau = sol.q ** n * sol.tau0
    z_prev = qp2_solution(N, sol, n - 1)
    z = qp2_solution(N, sol, n)
    z_next = qp2_solution(N, sol, n + 1)
    return (z_next * z + 1) * (z * z_prev + 1) - a * tau * tau * z / (tau - z)


# ---------------------------------------------------------------------------
# discrete KdV N-soliton solutions

@dataclass
class DKdVSolitonParams:
    delta: object                 # Fraction, or "symbolic" for the F_q(d) backend
    gammas: list
    ls: list

    def __post_init__(self):
        if len(self.gammas) != len(self.ls):
            raise ValueError("need one gamma per l")
        if len(set(map(Fraction, self.ls))) != len(self.ls):
            raise ValueError("the l_i must be distinct")

    @property
    def N(self):
        return len(self.ls)


def dkdv_sigma_rat(params: DKdVSolitonParams, n: int, t: int) -> Fraction:
    """sigma_n^t over Q."""
    delta = Fraction(params.delta)
    N = params.N
    mat = []
    for i in range(N):
        li = Fraction(params.ls[i])
        gi = Fraction(params.gammas[i])
        X = (1 - li) / li
        Y = (li + delta) / (1 + delta - li)
        row = []
        for j in range(N):
            lj = Fraction(params.ls[j])
            entry = gi / (li + lj - 1) * X ** t * Y ** n
            if i == j:
                entry += 1
            row.append(entry)
        mat.append(row)
    return det(mat)


def dkdv_soliton_rat(params: DKdVSolitonParams, n: int, t: int) -> Fraction:
    num = dkdv_sigma_rat(params, n, t) * dkdv_sigma_rat(params, n + 1, t - 1)
    den = dkdv_sigma_rat(params, n + 1, t) * dkdv_sigma_rat(params, n, t - 1)
    if den == 0:
        raise SigmaVanishesError(f"sigma product vanishes at (n,t)=({n},{t})")
    return num / den


def dkdv_sigma_funcfield(params: DKdVSolitonParams, field: FiniteField,
                         n: int, t: int) -> RatFunc:
    """sigma_n^t over F_q(d) with the coupling kept symbolic."""
    delta = RatFunc.x(field)
    one = RatFunc.const(field, 1)
    N = params.N
    mat = []
    for i in range(N):
        li = RatFunc.const(field, field.elem(int(params.ls[i])))
        gi = RatFunc.const(field, field.elem(int(params.gammas[i])))
        X = (one - li) / li
        Y = (li + delta) / (one + delta - li)
        row = []
        for j in range(N):
            lj = RatFunc.const(field, field.elem(int(params.ls[j])))
            entry = gi / (li + lj - one) * X ** t * Y ** n
            if i == j:
                entry = entry + one
            row.append(entry)
        mat.append(row)
    return det(mat)


def dkdv_soliton_funcfield(params: DKdVSolitonParams, field: FiniteField,
                           n: int, t: int) -> RatFunc:
    num = (dkdv_sigma_funcfield(params, field, n, t)
           * dkdv_sigma_funcfield(params, field, n + 1, t - 1))
    den = (dkdv_sigma_funcfield(params, field, n + 1, t)
           * dkdv_sigma_funcfield(params, field, n, t - 1))
    if den.is_zero():
        raise SigmaVanishesError(f"sigma product vanishes at (n,t)=({n},{t})")
    return num / den


def dkdv_equation_residual(params: DKdVSolitonParams, n: int, t: int) -> Fraction:
    """1/x_{n+1}^{t+1} - 1/x_n^t + delta/(1+delta) (x_n^{t+1} - x_{n+1}^t)."""
    delta = Fraction(params.delta)
    x = dkdv_soliton_rat
    return (1 / x(params, n + 1, t + 1) - 1 / x(params, n, t)
            + delta / (1 + delta) * (x(params, n, t + 1) - x(params, n + 1, t)))


# ---------------------------------------------------------------------------
# fast soliton grid evaluation via principal minors
#
# det(I + M) with M_ij = u_i * c_ij expands into sum_S det(c_S) prod_{i in S} u_i,
# so every sigma / f / g value on a grid is a short sum of monomials in the
# per-soliton factors; power tables make whole windows cheap, and keeping the
# numerator/denominator products uncancelled preserves the vanishing orders
# that the plain and strict reductions need.

class SolitonGridEvaluator:
    """Evaluates sigma-style determinants on an (n, t) window over F_q(d).

    Each subset term is c_S * X_S^t * Y_S^n; the c_S (principal minors of the
    coupling matrix, possibly d-dependent) are precomputed on a fixed common
    denominator and the exponent factors are tracked as polynomial power
    tables, so a cell costs a handful of polynomial multiplications and no gcd.
    """

    def __init__(self, field: FiniteField, couplings, xs, ys, row_factors=None):
        # couplings: matrix of RatFunc; xs, ys: per-soliton RatFunc factors
        self.field = field
        self.xs = xs
        self.ys = ys
        self.N = len(xs)
        one = RatFunc.const(field, 1)
        minors = {}
        for size in range(self.N + 1):
            for S in itertools.combinations(range(self.N), size):
                if size == 0:
                    minors[S] = one
                    continue
                minor = [[couplings[i][j] for j in S] for i in S]
                c = det(minor)
                if row_factors is not None:
                    for i in S:
                        c = c * row_factors[i]
                minors[S] = c
        # put every c_S over the one fixed denominator D = prod den(c_S)
        self.c_den = Poly.one(field)
        for c in minors.values():
            self.c_den = self.c_den * c.den
        self.c_num = {}
        for S, c in minors.items():
            scaled = c.num
            for S2, c2 in minors.items():
                if S2 != S:
                    scaled = scaled * c2.den
            self.c_num[S] = scaled
        self._pow_cache = {}

    def _pow(self, poly: Poly, k: int) -> Poly:
        cache = self._pow_cache.setdefault(id(poly), {0: Poly.one(self.field), 1: poly})
        if k not in cache:
            m = max(i for i in cache if i <= k)
            cur = cache[m]
            for i in range(m + 1, k + 1):
                cur = cur * poly
                cache[i] = cur
        return cache[k]

    def _subset_product(self, S, factors, exponent):
        """prod_{i in S} factors[i]^exponent as an uncancelled (num, den) pair."""
        num = Poly.one(self.field)
        den = Poly.one(self.field)
        for i in S:
            f = factors[i]
            if exponent >= 0:
                num = num * self._pow(f.num, exponent)
                den = den * self._pow(f.den, exponent)
            else:
                num = num * self._pow(f.den, -exponent)
                den = den * self._pow(f.num, -exponent)
        return num, den

    def value(self, n: int, t: int) -> RatFunc:
        """The determinant value as an uncancelled num/den pair (num may be 0)."""
        # common denominator: all exponent denominators plus the coupling one
        dn = Poly.one(self.field)
        for i in range(self.N):
            _, xd = self._subset_product((i,), self.xs, t)
            _, yd = self._subset_product((i,), self.ys, n)
            dn = dn * xd * yd
        total = Poly.zero(self.field)
        for S, cnum in self.c_num.items():
            xn, _ = self._subset_product(S, self.xs, t)
            yn, _ = self._subset_product(S, self.ys, n)
            comp = tuple(i for i in range(self.N) if i not in S)
            _, cxd = self._subset_product(comp, self.xs, t)
            _, cyd = self._subset_product(comp, self.ys, n)
            total = total + cnum * xn * yn * cxd * cyd
        return RatFunc(total, dn * self.c_den, reduce=False)


def dkdv_grid_evaluator(params: DKdVSolitonParams, field: FiniteField) -> SolitonGridEvaluator:
    one = RatFunc.const(field, 1)
    delta = RatFunc.x(field)
    xs, ys, couplings = [], [], []
    N = params.N
    for i in range(N):
        li = field.elem(int(params.ls[i]))
        gi = field.elem(int(params.gammas[i]))
        X = (one - li) / li                     # constant in d
        Y = (li + delta) / (one + delta - li)
        xs.append(X)
        ys.append(Y)
        row = []
        for j in range(N):
            lj = field.elem(int(params.ls[j]))
            row.append(RatFunc.const(field, gi / (li + lj - 1)))
        couplings.append(row)
    return SolitonGridEvaluator(field, couplings, xs, ys)


def dkdv_reduced_grid(params: DKdVSolitonParams, field: FiniteField, delta0,
                      n_range, t_range) -> dict:
    """x~_n^t over PF_q for the window, via the tracked-order reduction."""
    ev = dkdv_grid_evaluator(params, field)
    cells = {}
    sig = {}
    for n in range(n_range[0], n_range[1] + 2):
        for t in range(t_range[0] - 1, t_range[1] + 1):
            sig[(n, t)] = ev.value(n, t)
    for n in range(n_range[0], n_range[1] + 1):
        for t in range(t_range[0], t_range[1] + 1):
            cells[(n, t)] = reduce_tracked(
                [sig[(n, t)], sig[(n + 1, t - 1)]],
                [sig[(n + 1, t)], sig[(n, t - 1)]], delta0)
    return cells


# ---------------------------------------------------------------------------
# generalized discrete KdV soliton solutions

@dataclass
class GenDKdVParams:
    alpha: Fraction
    beta: Fraction
    ps: list
    gammas: list
    delta_cap: Fraction = None    # fixed by the reduction: Delta = 1 - alpha - beta

    def __post_init__(self):
        self.alpha = Fraction(self.alpha)
        self.beta = Fraction(self.beta)
        if self.delta_cap is None:
            self.delta_cap = 1 - self.alpha - self.beta
        else:
            self.delta_cap = Fraction(self.delta_cap)
            if self.delta_cap != 1 - self.alpha - self.beta:
                raise ValueError(
                    "the KP reduction forces Delta = 1 - alpha - beta; "
                    f"got {self.delta_cap} for alpha={self.alpha}, beta={self.beta}")
        self.ps = [Fraction(p) for p in self.ps]
        self.gammas = [Fraction(g) for g in self.gammas]
        for i, pi in enumerate(self.ps):
            if pi == 0:
                raise ValueError("p_i must be nonzero")
            for pj in self.ps:
                if pi + pj + self.delta_cap == 0:
                    raise ValueError("p_i + p_j + Delta must be nonzero")

    @property
    def N(self):
        return len(self.ps)


def _gen_factors_rat(params: GenDKdVParams, i: int):
    pi = params.ps[i]
    xi = (-pi + params.beta) / (pi + 1 - params.alpha)
    eta = (pi + 1 - params.beta) / (-pi + params.alpha)
    return xi, eta


def gen_dkdv_fg_rat(params: GenDKdVParams, n: int, t: int):
    """(f, g) at (n, t) over Q."""
    N = params.N
    f_mat, g_mat = [], []
    for i in range(N):
        xi, eta = _gen_factors_rat(params, i)
        rho = (-params.delta_cap - params.ps[i]) / params.ps[i]
        f_row, g_row = [], []
        for j in range(N):
            base = params.gammas[i] / (params.ps[i] + params.ps[j] + params.delta_cap)
            term = base * xi ** t * eta ** n
            f_row.append(term + (1 if i == j else 0))
            g_row.append(rho * term + (1 if i == j else 0))
        f_mat.append(f_row)
        g_mat.append(g_row)
    return det(f_mat), det(g_mat)


def gen_dkdv_soliton_rat(params: GenDKdVParams, n: int, t: int):
    """(x_n^t, y_n^t) over Q."""
    f = gen_dkdv_fg_rat(params, n, t)[0]
    g = gen_dkdv_fg_rat(params, n, t)[1]
    f_n = gen_dkdv_fg_rat(params, n + 1, t)[0]
    g_n = gen_dkdv_fg_rat(params, n + 1, t)[1]
    f_t = gen_dkdv_fg_rat(params, n, t + 1)[0]
    g_t = gen_dkdv_fg_rat(params, n, t + 1)[1]
    if g * f_n == 0 or f * g_t == 0:
        raise FGVanishesError(f"f/g product vanishes at (n,t)=({n},{t})")
    return f * g_n / (g * f_n), g * f_t / (f * g_t)


def gen_dkdv_equation_residual(params: GenDKdVParams, n: int, t: int):
    """Residuals of both coupled equations at (n, t); identically zero."""
    x, y = gen_dkdv_soliton_rat(params, n, t)
    x_up = gen_dkdv_soliton_rat(params, n, t + 1)[0]
    y_right = gen_dkdv_soliton_rat(params, n + 1, t)[1]
    a, b = params.alpha, params.beta
    r1 = x_up - ((1 - b) + b * x * y) * y / ((1 - a) + a * x * y)
    r2 = y_right - ((1 - a) + a * x * y) * x / ((1 - b) + b * x * y)
    return r1, r2


@dataclass
class GenDKdVEpsParams:
    """Parameters reduced to F_q with the shared epsilon substitution
    alpha = a + eps, beta = b + eps (so Delta = 1 - a - b - 2 eps as well)."""

    field: FiniteField
    a: object
    b: object
    ps: list
    gammas: list

    @classmethod
    def from_rational(cls, field: FiniteField, params: GenDKdVParams):
        from .maps import FFBackend
        ff = FFBackend(field)
        return cls(field,
                   a=ff.from_fraction(params.alpha),
                   b=ff.from_fraction(params.beta),
                   ps=[ff.from_fraction(p) for p in params.ps],
                   gammas=[ff.from_fraction(g) for g in params.gammas])


def gen_dkdv_grid_evaluators(params: GenDKdVEpsParams):
    """(f, g) grid evaluators over F_q(eps)."""
    field = params.field
    eps = RatFunc.x(field)
    one = RatFunc.const(field, 1)
    alpha = RatFunc.const(field, params.a) + eps
    beta = RatFunc.const(field, params.b) + eps
    delta_cap = one - alpha - beta
    xs, ys, couplings, rhos = [], [], [], []
    N = len(params.ps)
    for i in range(N):
        pi = params.ps[i]
        pic = RatFunc.const(field, pi)
        xi = (-pic + beta) / (pic + one - alpha)
        eta = (pic + one - beta) / (-pic + alpha)
        xs.append(xi)
        ys.append(eta)
        rhos.append((-delta_cap - pic) / pic)
        row = []
        for j in range(N):
            row.append(RatFunc.const(field, params.gammas[i])
                       / (pic + RatFunc.const(field, params.ps[j]) + delta_cap))
        couplings.append(row)
    f_ev = SolitonGridEvaluator(field, couplings, xs, ys)
    g_ev = SolitonGridEvaluator(field, couplings, xs, ys, row_factors=rhos)
    return f_ev, g_ev


def gen_dkdv_reduced_grids(params: GenDKdVEpsParams, n_range, t_range):
    """Plain x~ and strict x^ grids over PF_q at eps = 0."""
    f_ev, g_ev = gen_dkdv_grid_evaluators(params)
    field = params.field
    f_vals, g_vals = {}, {}
    for n in range(n_range[0], n_range[1] + 2):
        for t in range(t_range[0], t_range[1] + 1):
            f_vals[(n, t)] = f_ev.value(n, t)
            g_vals[(n, t)] = g_ev.value(n, t)
    plain, strict = {}, {}
    zero = field.from_int(0)
    for n in range(n_range[0], n_range[1] + 1):
        for t in range(t_range[0], t_range[1] + 1):
            num = [f_vals[(n, t)], g_vals[(n + 1, t)]]
            den = [g_vals[(n, t)], f_vals[(n + 1, t)]]
            plain[(n, t)] = reduce_tracked(num, den, zero)
            strict[(n, t)] = reduce_strict(num, den, zero)
    return plain, strict


def conserved_product_residual(params: GenDKdVParams, n: int, t: int):
    """x_n^{t+1} y_{n+1}^t - x_n^t y_n^t; identically zero."""
    x_up = gen_dkdv_soliton_rat(params, n, t + 1)[0]
    y_right = gen_dkdv_soliton_rat(params, n + 1, t)[1]
    x, y = gen_dkdv_soliton_rat(params, n, t)
    return x_up * y_right - x * y
