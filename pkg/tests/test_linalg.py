import random
from fractions import Fraction

from arithdyn.fields import make_field
from arithdyn.funcfield import Poly
from arithdyn.linalg import det


def brute_det(m):
    """Leibniz-formula oracle (n <= 4)."""
    import itertools
    n = len(m)
    total = None
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = m[0][perm[0]]
        for i in range(1, n):
            term = term * m[i][perm[i]]
        if sign < 0:
            term = -term
        total = term if total is None else total + term
    return total


def test_identity():
    assert det([[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]) == 1
    assert det([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1


def test_qairy_2x2_symbolic():
    # [[qx, -1], [-1, q^2 x]] with q = 2, x = 3 -> q^3 x^2 - 1 = 71
    q, x = Fraction(2), Fraction(3)
    assert det([[q * x, Fraction(-1)], [Fraction(-1), q * q * x]]) == q**3 * x**2 - 1


def test_row_swap_antisymmetry_random():
    rng = random.Random(5)
    m = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)] for _ in range(4)]
    d0 = det(m)
    swapped = [m[1], m[0], m[2], m[3]]
    assert det(swapped) == -d0
    assert d0 == brute_det(m)


def test_bareiss_int_matches_brute():
    rng = random.Random(6)
    for _ in range(20):
        n = rng.randint(1, 4)
        m = [[rng.randint(-10, 10) for _ in range(n)] for _ in range(n)]
        assert det(m) == brute_det(m)


def test_bareiss_poly_matches_brute():
    F = make_field(7)
    rng = random.Random(7)
    for _ in range(10):
        m = [[Poly(F, [rng.randrange(7) for _ in range(3)]) for _ in range(3)]
             for _ in range(3)]
        assert det(m) == brute_det(m)


def test_ff_elements():
    F = make_field(11)
    m = [[F.elem(3), F.elem(5)], [F.elem(2), F.elem(7)]]
    assert det(m) == F.elem(3 * 7 - 5 * 2)


def test_singular_matrix():
    m = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert det(m) == 0
    assert det([[3, 6], [2, 4]]) == 0
