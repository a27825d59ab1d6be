import random

import pytest

from arithdyn.errors import DivisionByZeroError
from arithdyn.fields import make_field
from arithdyn.funcfield import Poly, RatFunc, poly_str, reduce_at, reduce_strict, reduce_tracked


F7 = make_field(7)


def rf(num, den=(1,)):
    return RatFunc(Poly(F7, num), Poly(F7, den))


def test_arith_examples():
    d = RatFunc.x(F7)
    assert d * d.inv() == 1
    one_plus = rf((1, 1))
    assert rf((1,), (1, 1)) + rf((0, 1), (1, 1)) == 1
    assert (rf((1,)) / one_plus) * one_plus == 1
    with pytest.raises(DivisionByZeroError):
        rf((1,)) / rf(())


def test_canonicalization_idempotent_and_monic():
    num = Poly(F7, (2, 4))      # 2 + 4d
    den = Poly(F7, (3, 6))      # 3(1 + 2d)
    x = RatFunc(num, den)
    assert x.den.leading() == F7.one
    again = RatFunc(x.num, x.den)
    assert again == x
    # gcd cancellation: (1+d)^2 / (1+d) = 1+d
    one_plus = Poly(F7, (1, 1))
    assert RatFunc(one_plus * one_plus, one_plus) == RatFunc.from_poly(one_plus)


def test_reduce_at_worked_values():
    # x_1^1 = 2(1+d)/(1+5d) at d=1 over F_7 -> 3
    x11 = rf((2, 2), (1, 5))
    assert reduce_at(x11, 1) == 3
    # x_2^1 = 6(1+d)(1+5d)/(1+3d+3d^2) at d=1 -> infinity
    num = Poly(F7, (6, 6)) * Poly(F7, (1, 5))
    x21 = RatFunc(num, Poly(F7, (1, 3, 3)))
    assert reduce_at(x21, 1).is_infinity
    # (d-1)^2 * regular at d=1 -> 0
    sq = Poly(F7, (6, 1)) * Poly(F7, (6, 1))
    assert reduce_at(RatFunc(sq * Poly(F7, (2, 3)), Poly(F7, (1, 1))), 1) == 0


def test_reduce_at_matches_plain_evaluation():
    rng = random.Random(1)
    for _ in range(40):
        num = Poly(F7, [rng.randrange(7) for _ in range(4)])
        den = Poly(F7, [rng.randrange(7) for _ in range(3)])
        if den.is_zero() or num.is_zero():
            continue
        x0 = rng.randrange(7)
        if F7.is_zero(den.eval(x0)) or F7.is_zero(num.eval(x0)):
            continue
        got = reduce_at(RatFunc(num, den), x0)
        assert got == F7.div(num.eval(x0), den.eval(x0))


def test_reduce_at_multiplicative_where_defined():
    rng = random.Random(2)
    for _ in range(40):
        a = RatFunc(Poly(F7, [rng.randrange(7) for _ in range(3)]),
                    Poly(F7, [1] + [rng.randrange(7) for _ in range(2)]))
        b = RatFunc(Poly(F7, [rng.randrange(7) for _ in range(3)]),
                    Poly(F7, [1] + [rng.randrange(7) for _ in range(2)]))
        if a.is_zero() or b.is_zero():
            continue
        x0 = rng.randrange(7)
        ra, rb = reduce_at(a, x0), reduce_at(b, x0)
        if ra.is_finite and rb.is_finite and ra != 0 and rb != 0:
            prod = reduce_at(a * b, x0)
            assert prod == ra.as_elem() * rb.as_elem()


def test_reduce_strict_vs_tracked():
    one_plus = Poly(F7, (1, 1))
    two = Poly(F7, (2,))
    # l = 0, m = 0: both maps give the plain value at the point
    v = reduce_strict([RatFunc.from_poly(two)], [RatFunc.from_poly(one_plus)], 1)
    assert v == 2 * F7.elem(2).inv()
    # l = 1, m = 1: tracked ratio is finite but the strict map forces 0
    d_minus = Poly(F7, (6, 1))  # d - 1
    num = [RatFunc.from_poly(d_minus * two)]
    den = [RatFunc.from_poly(d_minus * one_plus)]
    assert reduce_tracked(num, den, 1) == 2 * F7.elem(2).inv()
    assert reduce_strict(num, den, 1) == 0
    # l = 0, m = 2 -> otherwise-branch
    num2 = [RatFunc.from_poly(two)]
    den2 = [RatFunc.from_poly(d_minus * d_minus)]
    assert reduce_strict(num2, den2, 1) == 0
    assert reduce_tracked(num2, den2, 1).is_infinity


def test_karatsuba_agrees_with_schoolbook():
    rng = random.Random(3)
    F19 = make_field(19)
    a = Poly(F19, [rng.randrange(19) for _ in range(70)])
    b = Poly(F19, [rng.randrange(19) for _ in range(65)])
    prod = a * b
    # schoolbook reference
    out = [0] * (a.degree + b.degree + 1)
    for i, ai in enumerate(a.coeffs):
        for j, bj in enumerate(b.coeffs):
            out[i + j] = (out[i + j] + ai * bj) % 19
    assert prod == Poly(F19, out)


def test_poly_str():
    assert poly_str(Poly(F7, (1, 0, 3))) == "1 + 3*d^2"
    assert poly_str(Poly(F7, ())) == "0"
