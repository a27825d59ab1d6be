"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Criteria 10b/10c pin externally supplied reference height tables that exact
recomputation contradicts; they are kept faithful (and therefore red) rather
than loosened to match.
"""

import math
import random
import time
from fractions import Fraction as F

import pytest

from arithdyn.agr import (
    AGRConfig,
    caseD_return,
    class_names,
    classify,
    test_agr as run_agr,
    test_weak_agr as run_weak_agr,
)
from arithdyn.entropy import estimate_entropy, fit_growth, height_series, split_series
from arithdyn.fields import FiniteField, make_field
from arithdyn.funcfield import Poly, RatFunc
from arithdyn.initspace import build_ext_space, orbit_decomposition, restriction_agrees, sakai_count
from arithdyn.lattice import (
    BBSState,
    GridSpec,
    bbs_evolve,
    evolve_lattice,
    reduce_grid,
    soliton_blocks,
    valuation_ca,
)
from arithdyn.linalg import det
from arithdyn.maps import FFBackend, MapSpec, RationalBackend, dp2_map, step
from arithdyn.padic import PadicContext
from arithdyn.solutions import (
    DKdVSolitonParams,
    GenDKdVEpsParams,
    GenDKdVParams,
    QAirySolution,
    TauTable,
    check_taucond,
    conserved_product_residual,
    dkdv_reduced_grid,
    dp2_equation_residual,
    dp2_rational_reduced,
    gen_dkdv_reduced_grids,
    qairy_poly_coeffs,
    qp2_equation_residual,
)


def report(criterion: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"[{criterion}] {status} {detail}".rstrip())
    assert ok, f"{criterion}: {detail}"


# ---------------------------------------------------------------------------
# 1. AGR dichotomy for the QRT family

def test_c1_qrt_dichotomy():
    t0 = time.time()
    cfg = AGRConfig(samples=20, seed=101)
    for p in (3, 7, 11):
        for gamma in (0, 1, 2):
            spec = MapSpec("qrt", {"a": 2, "gamma": gamma})
            for cls in class_names(spec, p):
                rep = run_agr(spec, p, cls, 0, cfg)
                assert rep.found and rep.oracle_match, (p, gamma, cls, rep.m)
                assert sum(g.samples for g in rep.groups) >= 20
        for gamma in (3, 4):
            spec = MapSpec("qrt", {"a": 2, "gamma": gamma})
            for cls in class_names(spec, p):
                rep = run_agr(spec, p, cls, 0, cfg)
                assert not rep.found, (p, gamma, cls)
    elapsed = time.time() - t0
    report("criterion 1 (QRT dichotomy)", elapsed < 30,
           f"all classes exact, gamma>=3 unconfined; {elapsed:.1f}s < 30s")


# ---------------------------------------------------------------------------
# 2. dP_II AGR across the eight confinement cases

def _z0_placing_beta_zero(a, d, p, phase):
    # beta_i = 0 at i=phase: -phase*d - z0 + a = 0 mod p
    return F((a - phase * d) % p)


def _z0_placing_alpha_zero(a, d, p, phase):
    return F((-phase * d - a) % p)


def test_c2_dp2_cases():
    t0 = time.time()
    rng = random.Random(202)
    cfg = AGRConfig(samples=10, seed=22)
    for p in (7, 11):
        sets = []
        while len(sets) < 3:
            a, d = F(rng.randrange(1, p)), F(rng.randrange(1, p))
            if (a + d) % p and (a - d) % p:
                sets.append((a, d))
        d = F(rng.randrange(1, p))
        sets.append((d, d))       # a = +delta: case (viii) m=7
        d = F(rng.randrange(1, p))
        sets.append((-d, d))      # a = -delta: case (iv) m=7
        for a, d in sets:
            # case (ii)/(vi) plus (i)/(v): any z0; pick one with observable zeros
            spec = dp2_map(a=a, delta=d, z0=_z0_placing_beta_zero(a, d, p, 2), p=p)
            sched = spec.params["schedule"]
            seen = {}
            for n in range(p - 4):
                if sched.alpha(n) == 0:
                    seen.setdefault("i", n)
                if sched.alpha(n) != 0 and sched.beta(n + 2) != 0:
                    seen.setdefault("ii/vi", n)
                if sched.alpha(n) != 0 and sched.beta(n + 2) == 0:
                    seen.setdefault("iii/iv", n)
            for case, n in seen.items():
                cls = "x=1"
                rep = run_agr(spec, p, cls, n, cfg)
                assert rep.oracle_match, (p, a, d, case, n, rep.m)
                if case == "iii/iv" and a == -d:
                    assert rep.m == 7
            # x=-1 cases with the alpha zero placed observably
            spec2 = dp2_map(a=a, delta=d, z0=_z0_placing_alpha_zero(a, d, p, 2), p=p)
            sched2 = spec2.params["schedule"]
            seen2 = {}
            for n in range(p - 4):
                if sched2.beta(n) == 0:
                    seen2.setdefault("v", n)
                if sched2.beta(n) != 0 and sched2.alpha(n + 2) != 0:
                    seen2.setdefault("vi", n)
                if sched2.beta(n) != 0 and sched2.alpha(n + 2) == 0:
                    seen2.setdefault("vii/viii", n)
            for case, n in seen2.items():
                rep = run_agr(spec2, p, "x=-1", n, cfg)
                assert rep.oracle_match, (p, a, d, case, n, rep.m)
                if case == "vii/viii" and a == d:
                    assert rep.m == 7
    elapsed = time.time() - t0
    report("criterion 2 (dP_II cases i-viii)", elapsed < 60,
           f"5 parameter sets/prime incl. a=+-delta m=7; {elapsed:.1f}s < 60s")


# ---------------------------------------------------------------------------
# 3. q-Painleve AGR

def test_c3_q_painleve():
    t0 = time.time()
    cfg = AGRConfig(samples=8, seed=33)
    cfg5 = AGRConfig(samples=5, seed=33)
    specs = {
        7: {
            "qp1": MapSpec("qp1", {"a": 2, "b": 3, "q": 5}),
            "qp2": MapSpec("qp2", {"a": 2, "q": 3, "tau0": 5}),
            "qp3": MapSpec("qp3", {"a": 1, "b": 2, "c": 3, "d": 5, "q": 2}),
            "qp4": MapSpec("qp4", {"a": 2, "b": 3, "q": 3, "tau0": 5}),
            "qp5": MapSpec("qp5", {"a": 1, "b": 6, "c": 2, "d": 3, "q": 2}),
            "hv": MapSpec("hv", {"a": 1}),
        },
        11: {
            "qp1": MapSpec("qp1", {"a": 2, "b": 3, "q": 5}),
            "qp2": MapSpec("qp2", {"a": 2, "q": 3, "tau0": 5}),
            "qp3": MapSpec("qp3", {"a": 1, "b": 2, "c": 4, "d": 6, "q": 3}),
            "qp4": MapSpec("qp4", {"a": 2, "b": 3, "q": 2, "tau0": 5}),
            "qp5": MapSpec("qp5", {"a": 1, "b": 10, "c": 2, "d": 3, "q": 2}),
            "hv": MapSpec("hv", {"a": 1}),
        },
    }
    expected_m = {
        "qp1": {"x=0": 3, "y=0": 5, "x=y=0": 8},
        "qp2": {"x=0": 3, "x=0 special": 5, "x=tau": 3, "x=tau special": 7, "xy=-1": 7},
        "qp3": {"x=a": 3, "x=a special": 5, "x=b": 3, "x=b special": 5,
                "y=0": 3, "x=y=0": 4},
        "qp4": {"x=0": 3, "x=0 special": 5, "x=-tau": 3, "x=-tau special": 5, "xy=1": 5},
        "qp5": {"x=a": 3, "x=b": 3, "xy=1": 3},
        "hv": {"x=0": 4},
    }
    for p, table in specs.items():
        for kind, spec in table.items():
            for cls, m in expected_m[kind].items():
                if kind == "qp5" and cls == "xy=1" and p == 7:
                    # with a,b,c,d,c^-1,d^-1 distinct all six units of F_7 are
                    # consumed: the class has no generic residue at p=7
                    continue
                c = cfg5 if kind == "qp5" else cfg
                rep = run_agr(spec, p, cls, 0, c)
                assert rep.found and rep.m == m and rep.oracle_match, \
                    (p, kind, cls, rep.m, rep.oracle_match)
    elapsed = time.time() - t0
    report("criterion 3 (q-Painleve cases)", elapsed < 300,
           f"qP_I..qP_V and HV limits exact; {elapsed:.1f}s < 300s")


# ---------------------------------------------------------------------------
# 4. weak AGR at p = 3 and p = 5

def test_c4_weak_agr():
    rep3 = run_weak_agr(3, AGRConfig(samples=9, seed=44, m_max=16), n0=0)
    table = {(c.residue, c.ybar): c for c in rep3["classes"] if c.kind == "confined"}
    field3 = PadicContext(3).field
    cases = {(7, 1): 0, (4, 2): 0, (7, 0): 1, (4, 1): 1, (7, 2): 2, (4, 0): 2}
    for key, limit in cases.items():
        c = table[key]
        assert c.m == 5 and c.limit == (field3.proj(limit), field3.proj(1)), key
    cycles = {c.residue: c.cycle for c in rep3["classes"] if c.kind == "periodic"}
    strs = [(str(a), str(b)) for a, b in cycles[1]]
    assert strs == [("inf", "1"), ("2", "inf"), ("inf", "2"), ("1", "inf")]
    assert all(caseD_return(samples=8, seed=4))

    rep5 = run_weak_agr(5, AGRConfig(samples=9, seed=45, m_max=16), n0=0)
    table5 = {(c.residue, c.ybar): c for c in rep5["classes"] if c.kind == "confined"}
    field5 = PadicContext(5).field
    shifts = {6: -1, 11: 1, 16: 0, 21: 2}
    for r, s in shifts.items():
        for yb in range(5):
            c = table5[(r, yb)]
            assert c.m == 7 and c.limit == (field5.proj((yb + s) % 5), field5.proj(-1)), (r, yb)
    cyc5 = next(c.cycle for c in rep5["classes"] if c.kind == "periodic")
    assert [(str(a), str(b)) for a, b in cyc5] == \
        [("inf", "1"), ("4", "inf"), ("inf", "4"), ("1", "inf")]
    report("criterion 4 (weak AGR mod p^2)", True,
           "p=3 and p=5 residue tables, 4-cycles and the 12-step return exact")


# ---------------------------------------------------------------------------
# 5. initial-value space

def test_c5_initspace():
    t0 = time.time()
    sp = build_ext_space(3, 1, 2)
    assert len(sp.points) == 24 and sakai_count(3) == 40
    g = orbit_decomposition(sp)
    fixed = {sp.label(c[0]) for c in g.cycles if len(c) == 1}
    assert fixed == {"0,0", "inf,inf"}
    from arithdyn.initspace import to_adjacency
    adj = to_adjacency(sp)
    assert adj["1,0"] == "inf,1#1" and adj["1,inf#1"] == "0,1"
    assert adj["inf,1#1"] == "2,inf#1" and adj["inf,1#2"] == "2,inf#3"
    for q in (5, 7):
        spq = build_ext_space(q, 1, 2)
        assert len(spq.points) == q * q + 6 * q - 3
        assert set(spq.next.values()) == set(spq.points)
        assert restriction_agrees(spq)
    elapsed = time.time() - t0
    report("criterion 5 (initial-value space)", elapsed < 10,
           f"|Omega|=24 table matched, q in {{5,7}} bijective; {elapsed:.1f}s < 10s")


# ---------------------------------------------------------------------------
# 6. dP_II rational solutions

def test_c6_dp2_rational():
    t0 = time.time()
    table = {3: ["1", "2", "inf"],
             5: ["4", "2", "3", "1", "inf"],
             7: ["1", "inf", "6", "5", "1", "inf", "6"]}
    for p, expect in table.items():
        tt = TauTable(1)
        seq = [str(dp2_rational_reduced(3, 1, p, n, tt)) for n in range(1, 3 * p + 1)]
        assert seq == expect * 3, p
    # p=11: the non-vanishing condition fails there, so the row is compared
    # and reported rather than asserted
    tt = TauTable(1)
    seq11 = [str(dp2_rational_reduced(3, 1, 11, n, tt)) for n in range(1, 12)]
    expect11 = ["inf", "1", "6", "1", "inf", "10", "inf", "1", "0", "2", "10"]
    v1, v2, ok = check_taucond(3, 11)
    print(f"  p=11 row (tau condition ok={ok}): "
          f"{'matches' if seq11 == expect11 else 'DIFFERS from'} the reference row")
    tt = TauTable(1)
    assert all(dp2_equation_residual(3, 1, n, tt) == 0 for n in range(-10, 11))
    elapsed = time.time() - t0
    report("criterion 6 (dP_II rational table)", elapsed < 30,
           f"p in {{3,5,7}} exact over 3 periods, residuals zero; {elapsed:.1f}s < 30s")


# ---------------------------------------------------------------------------
# 7. qP_II Airy solutions

def test_c7_qp2_airy():
    rng = random.Random(707)
    for trial in range(3):
        params = {}
        for key in ("c0", "c1", "q", "tau0"):
            params[key] = F(rng.choice([1, 2, 3, 4, 5, 7]), rng.choice([1, 2, 3]))
        if params["q"] in (0, 1, -1):
            params["q"] = F(3, 2)
        sol = QAirySolution(**params)
        for N in (0, 1, 2):
            assert all(qp2_equation_residual(N, sol, n) == 0 for n in range(-3, 4)), \
                (trial, N)
        assert all(sol.airy_residual(n) == 0 for n in range(-10, 11))
    q = F(3, 2)
    for n in range(7):
        assert qairy_poly_coeffs(n, q)[-1] == q ** (n * (n + 1) // 2)
    report("criterion 7 (qP_II Airy solutions)", True,
           "product-form and Airy residuals exactly zero; leading coefficients exact")


# ---------------------------------------------------------------------------
# 8. dKdV worked example

def test_c8_dkdv_worked_example():
    field = make_field(7)
    spec = GridSpec(sites=3, steps=2, x_initial=[6, 5, 4], y_boundary=[2, 2],
                    kind="dkdv", backend="funcfield", p=7, delta0=1)
    gx, gy = evolve_lattice(spec)
    rx, ry = reduce_grid(gx, spec), reduce_grid(gy, spec)
    values = {"x11": rx.values[(1, 1)], "y20": ry.values[(2, 0)],
              "x21": rx.values[(2, 1)], "y21": ry.values[(2, 1)],
              "x12": rx.values[(1, 2)], "x22": rx.values[(2, 2)],
              "y31": ry.values[(3, 1)]}
    expect = {"x11": "3", "y20": "4", "x21": "inf", "y21": "0",
              "x12": "inf", "x22": "4", "y31": "5"}
    assert {k: str(v) for k, v in values.items()} == expect
    # symbolic intermediates equal the printed rational functions
    assert gx.values[(1, 1)] == RatFunc(Poly(field, (2, 2)), Poly(field, (1, 5)))
    assert gy.values[(2, 0)] == RatFunc(Poly(field, (6, 30)), Poly(field, (1, 1)))
    assert gx.values[(2, 1)] == RatFunc(Poly(field, (6, 6)) * Poly(field, (1, 5)),
                                        Poly(field, (1, 3, 3)))
    assert gy.values[(2, 1)] == RatFunc(Poly(field, (2, 4, 8)),
                                        Poly(field, (1, 5)) * Poly(field, (1, 5)))
    # p-adic method: x_2^2 = 0; the coupled y_3^1 (whose delta-method value
    # is the 5 above) reduces to infinity, the expected method difference
    spec_p = GridSpec(sites=3, steps=2, x_initial=[6, 5, 4], y_boundary=[2, 2],
                      kind="dkdv", backend="padic", delta=1, p=7)
    gxp, gyp = evolve_lattice(spec_p)
    rxp, ryp = reduce_grid(gxp, spec_p), reduce_grid(gyp, spec_p)
    assert str(rxp.values[(2, 2)]) == "0"
    assert str(ryp.values[(3, 1)]) == "inf"
    report("criterion 8 (dKdV worked example)", True,
           "delta-method values, symbolic intermediates and p-adic differences exact")


# ---------------------------------------------------------------------------
# 9. soliton periodicity

def test_c9_soliton_periodicity():
    t0 = time.time()
    one = DKdVSolitonParams(delta="symbolic", gammas=[2], ls=[9])
    g11 = dkdv_reduced_grid(one, make_field(11), 7, (0, 30), (0, 30))
    assert all(g11[(n, t)] == g11[(n + 10, t)] for n in range(21) for t in range(31))
    assert all(g11[(n, t)] == g11[(n, t + 10)] for n in range(31) for t in range(21))
    two = DKdVSolitonParams(delta="symbolic", gammas=[15, 9], ls=[2, 4])
    g19 = dkdv_reduced_grid(two, make_field(19), 8, (0, 54), (0, 54))
    assert all(g19[(n, t)] == g19[(n + 18, t)] for n in range(37) for t in range(55))
    assert all(g19[(n, t)] == g19[(n, t + 18)] for n in range(55) for t in range(37))

    gp = GenDKdVParams(alpha=F(14, 15), beta=F(5, 6),
                       ps=[F(2, 15), F(1, 30)], gammas=[F(-1, 6), F(-1, 30)])
    ep = GenDKdVEpsParams.from_rational(make_field(13), gp)
    plain, strict = gen_dkdv_reduced_grids(ep, (0, 26), (0, 26))
    assert all(strict[(n, t)] == strict[(n + 12, t)] for n in range(15) for t in range(27))
    assert all(strict[(n, t)] == strict[(n, t + 12)] for n in range(27) for t in range(15))
    viol = [(n, t) for n in range(15) for t in range(27)
            if plain[(n, t)] != plain[(n + 12, t)]]
    assert viol, "plain reduction must violate periodicity somewhere"

    rng = random.Random(909)
    for _ in range(6):
        n, t = rng.randint(-4, 4), rng.randint(-4, 4)
        assert conserved_product_residual(gp, n, t) == 0
    elapsed = time.time() - t0
    report("criterion 9 (soliton periodicity)", elapsed < 300,
           f"10-, 18- and strict 12-periodicity verified; {elapsed:.1f}s < 300s")


# ---------------------------------------------------------------------------
# 10. height entropy

def test_c10a_hv_heights():
    t0 = time.time()
    s = height_series(MapSpec("hv", {"a": 1}), (F(3), F(1)), 14, base=3)
    assert s.floors()[:12] == [0, 1, 2, 7, 19, 50, 132, 347, 911, 2385, 6245, 16352]
    est = estimate_entropy(s)
    assert abs(est.ratio - 2.61803) / 2.61803 < 0.02
    elapsed = time.time() - t0
    report("criterion 10a (HV heights)", elapsed < 300,
           f"floors exact through n=11, ratio {est.ratio:.5f}; {elapsed:.1f}s < 300s")


def test_c10b_psi3_reference_floors():
    # pinned reference list; exact recomputation from the stated data
    # disagrees from n=4 on - kept faithful, expected red
    s = height_series(MapSpec("qrt", {"a": 2, "gamma": 3}), (F(3), F(1)), 10, base=3)
    expected = [0, 1, 3, 8, 26, 79, 236, 711, 2133, 6400, 19201]
    report("criterion 10b (Psi_3 reference floors)", s.floors() == expected,
           f"computed {s.floors()} vs reference {expected}")


def test_c10c_psi1_reference_floors_and_fit():
    # likewise irreproducible from the stated data - kept faithful, expected red
    s = height_series(MapSpec("qrt", {"a": 2, "gamma": 1}), (F(3), F(1)), 100, base=3)
    expected18 = [0, 1, 1, 1, 2, 3, 3, 4, 5, 7, 7, 8, 9, 12, 13, 14, 16, 18, 20]
    coeffs, _ = fit_growth(s, 3)
    floors_ok = s.floors()[:19] == expected18
    fit_ok = abs(coeffs[2] - 0.0454) <= 0.005
    report("criterion 10c (Psi_1 reference floors and fit)", floors_ok and fit_ok,
           f"floors[:19]={s.floors()[:19]}, quadratic coefficient {coeffs[2]:.4f}")


def test_c10d_psi1_epsilon():
    s = height_series(MapSpec("qrt", {"a": 2, "gamma": 1}), (F(3), F(1)), 100, base=3)
    est = estimate_entropy(s)
    ok = est.epsilon < 0.05
    report("criterion 10d (Psi_1 entropy)", ok, f"epsilon = {est.epsilon:.4f} < 0.05")


def test_c10e_split_series():
    h, nums, dens = split_series(MapSpec("hv", {"a": 1}), (F(3), F(1)), 14, base=3)
    eh = estimate_entropy(h).epsilon
    en = estimate_entropy(nums).epsilon
    ed = estimate_entropy(dens).epsilon
    ok = abs(en - eh) / eh < 0.05 and abs(ed - eh) / eh < 0.05
    report("criterion 10e (split series)", ok,
           f"epsilons {eh:.4f}/{en:.4f}/{ed:.4f} within 5%")


# ---------------------------------------------------------------------------
# 11. BBS and the valuation cellular automaton

def test_c11_bbs_and_valuation_ca():
    st = BBSState([1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1], 1)
    hist = bbs_evolve(st, 50)
    assert all(h.total == st.total for h in hist)
    for k in (1, 2, 3, 4):
        lone = bbs_evolve(BBSState([1] * k, 1), 5)
        starts = [next(i for i, v in enumerate(h.balls) if v) for h in lone]
        assert all(b - a == k for a, b in zip(starts, starts[1:]))

    # the paper's "almost the same" allows transient shapes mid-collision;
    # the conserved content is compared across the full collision window
    rows, meta = valuation_ca(2, 10, [3, 2, 1], 22)
    assert soliton_blocks(rows[0]) == [1, 2, 3] and sum(rows[0]) == 6
    assert soliton_blocks(rows[-1]) == [1, 2, 3] and sum(rows[-1]) == 6
    assert all(len(soliton_blocks(r)) == 3 for r in rows)

    balls = [1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1]
    bbs_hist = bbs_evolve(BBSState([0] * 5 + balls, 1), 22)
    bbs_content = [soliton_blocks(h.balls) for h in bbs_hist]
    ca_content = [soliton_blocks(r) for r in rows]
    assert bbs_content[0] == ca_content[0] and bbs_content[-1] == ca_content[-1]
    agree = sum(1 for a, b in zip(ca_content, bbs_content) if a == b)
    assert agree >= 0.8 * len(ca_content)
    report("criterion 11 (BBS / valuation CA)", True,
           f"conservation, speed-k solitons; CA/BBS content agrees at "
           f"{agree}/{len(ca_content)} times incl. both window ends")


# ---------------------------------------------------------------------------
# 12. always-on property suites

def test_c12_property_suites():
    rng = random.Random(1212)
    # field axioms on random samples
    for p, m in ((7, 1), (3, 2), (11, 1)):
        Fq = FiniteField(p, m)
        elems = list(Fq.elements())
        for _ in range(60):
            a, b, c = (rng.choice(elems) for _ in range(3))
            assert Fq.mul(a, Fq.add(b, c)) == Fq.add(Fq.mul(a, b), Fq.mul(a, c))
            if not Fq.is_zero(a):
                assert Fq.mul(a, Fq.inv(a)) == Fq.one
    # ultrametric + homomorphism on units + reduce(lift) = id
    for p in (3, 7):
        ctx = PadicContext(p)
        for _ in range(60):
            x = ctx.random_unit(rng) * rng.choice([1, -1, p, F(1, p)])
            y = ctx.random_unit(rng) * rng.choice([1, -1, p])
            assert ctx.vp(x + y) >= min(ctx.vp(x), ctx.vp(y))
            if ctx.vp(x) == 0 and ctx.vp(y) == 0:
                assert ctx.reduce(x * y) == ctx.reduce(x).as_elem() * ctx.reduce(y).as_elem()
        for s in range(p):
            for k in (1, 2, 3):
                assert ctx.reduce(ctx.lift(s, k, ctx.random_unit(rng))) == s
    # good-reduction commutativity off the singular sets: 100 points per map
    maps = [MapSpec("qrt", {"a": 2, "gamma": 2}), MapSpec("hv", {"a": 1}),
            MapSpec("qp1", {"a": 2, "b": 3, "q": 5}),
            MapSpec("qp3", {"a": 1, "b": 2, "c": 3, "d": 5, "q": 2}),
            dp2_map(a=F(3), delta=F(2), z0=F(1), p=11)]
    ctx11 = PadicContext(11)
    ff = FFBackend(ctx11.field)
    rat = RationalBackend()
    for spec in maps:
        checked = 0
        while checked < 100:
            x = ctx11.random_unit(rng)
            y = ctx11.random_unit(rng)
            n = rng.randrange(8)
            try:
                x1, y1 = step(spec, n, (x, y), rat)
            except Exception:
                continue
            if ctx11.vp(x1) != 0:
                continue
            try:
                xb, yb = step(spec, n, (ff.from_fraction(x), ff.from_fraction(y)), ff)
            except Exception:
                continue
            assert ctx11.reduce(x1) == xb and ctx11.reduce(y1) == yb
            checked += 1
    # determinant axioms on random matrices
    for _ in range(10):
        mat = [[F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3)]
               for _ in range(3)]
        swapped = [mat[1], mat[0], mat[2]]
        assert det(swapped) == -det(mat)
        assert det([[mat[0][0], 0, 0], [0, 1, 0], [0, 0, 1]]) == mat[0][0]
    # bijectivity of every built extended space
    for q in (3, 5):
        sp = build_ext_space(q, 1, 2)
        assert set(sp.next.values()) == set(sp.points)
    report("criterion 12 (property suites)", True,
           "axioms, reductions, commutativity, determinants and bijectivity hold")
