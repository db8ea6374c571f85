import random
from itertools import combinations, product

import pytest

from fpsubsets import poly
from fpsubsets.fields import ExtField, PrimeField

F5 = PrimeField(5)
F7 = PrimeField(7)


def test_eval_examples():
    assert poly.eval_at([1, 1], 1, F5) == 2
    assert poly.eval_at([], 3, F5) == 0
    f = poly.from_roots([1, 2], F7)
    assert poly.eval_at(f, 3, F7) == 2


def test_interpolate_examples():
    assert poly.interpolate([(0, 1), (1, 2)], F5) == [1, 1]
    assert poly.interpolate([(0, 4), (1, 4), (2, 4)], F5) == [4]
    assert poly.interpolate([(1, 1), (2, 3)], F7) == [6, 2]
    with pytest.raises(ValueError):
        poly.interpolate([(1, 1), (1, 2)], F7)


def test_interpolate_eval_roundtrip_randomized():
    rng = random.Random(5)
    for _ in range(1000):
        p = rng.choice([5, 7, 11, 101])
        fld = PrimeField(p)
        k = rng.randint(1, min(p, 6))
        xs = rng.sample(range(p), k)
        ys = [rng.randrange(p) for _ in xs]
        f = poly.interpolate(list(zip(xs, ys)), fld)
        assert poly.degree(f) < k
        for x, y in zip(xs, ys):
            assert poly.eval_at(f, x, fld) == y


def test_derivative_examples():
    assert poly.derivative([0, 0, 1], F5) == [0, 2]
    F3 = PrimeField(3)
    assert poly.derivative([0, 0, 0, 1], F3) == []      # d/dX X^3 in char 3
    assert poly.derivative([1, 1, 0, 1], F3) == [1]


def test_gcd_examples():
    assert poly.gcd([4, 0, 1], [4, 1], F5) == [4, 1]
    f = [3, 1, 4]
    assert poly.gcd(f, [], F5) == poly.monic(f, F5)
    sq = poly.mul([6, 1], [6, 1], F7)
    other = poly.mul([6, 1], [5, 1], F7)
    assert poly.gcd(sq, other, F7) == [6, 1]
    with pytest.raises(ValueError):
        poly.gcd([], [], F5)


def test_squarefree_examples():
    assert not poly.is_squarefree(poly.mul([4, 1], [4, 1], F5), F5)
    assert poly.is_squarefree([3], F5)
    assert poly.is_squarefree([1, 0, 1], PrimeField(3))
    with pytest.raises(ValueError):
        poly.is_squarefree([], F5)


def _squarefree_oracle(f, p):
    """Trial division by squares of monic linear/irreducible quadratic factors."""
    fld = PrimeField(p)
    candidates = [[a, 1] for a in range(p)]
    for c0 in range(p):
        for c1 in range(p):
            g = [c0, c1, 1]
            if all(poly.eval_at(g, x, fld) != 0 for x in range(p)):
                candidates.append(g)
    if poly.degree(f) >= 1 and poly.is_zero(poly.derivative(f, fld)):
        return False
    for g in candidates:
        g2 = poly.mul(g, g, fld)
        if poly.degree(g2) > poly.degree(f):
            continue
        _, r = poly.divmod_poly(f, g2, fld)
        if not r:
            return False
    return True


@pytest.mark.parametrize("p", [3, 5, 7])
def test_squarefree_against_trial_division_oracle(p):
    fld = PrimeField(p)
    for deg in range(0, 5):
        for tail in product(range(p), repeat=deg):
            f = list(tail) + [1]
            assert poly.is_squarefree(f, fld) == _squarefree_oracle(f, p), f


def test_from_roots_examples():
    assert poly.from_roots([], F7) == [1]
    assert poly.from_roots([0], F7) == [0, 1]
    assert poly.from_roots([1, 2], F7) == [2, 4, 1]
    with pytest.raises(ValueError):
        poly.from_roots([1, 1], F7)


@pytest.mark.parametrize("p", [3, 5, 7, 13])
def test_from_roots_always_squarefree(p):
    fld = PrimeField(p)
    for size in range(4):
        for roots in combinations(range(p), size):
            f = poly.from_roots(roots, fld)
            assert size == 0 or poly.is_squarefree(f, fld)
            assert sorted(poly.distinct_roots_in_field(f, fld)) == list(roots)


def test_distinct_roots_examples():
    assert sorted(poly.distinct_roots_in_field([4, 0, 1], F5)) == [1, 4]
    assert poly.distinct_roots_in_field([1, 0, 1], PrimeField(3)) == []


def test_root_count_closure():
    m = poly.distinct_root_count_closure([([6, 1], 2), ([5, 1], 1)], F7)
    assert m == 2
    irr = [1, 0, 1]  # X^2 + 1 over F_3
    assert poly.distinct_root_count_closure([(irr, 1)], PrimeField(3)) == 2
    f = poly.from_roots([1, 2, 3], F7)
    fac = [([6, 1], 1), ([5, 1], 1), ([4, 1], 1)]
    assert poly.distinct_root_count_closure(fac, F7, claimed=f) == 3
    with pytest.raises(ValueError):
        poly.distinct_root_count_closure(fac, F7, claimed=poly.from_roots([1, 2, 4], F7))
    with pytest.raises(ValueError):
        poly.distinct_root_count_closure([([6, 1], 1), ([6, 1], 1)], F7)


def test_ring_axioms_randomized():
    rng = random.Random(17)
    for _ in range(1000):
        p = rng.choice([5, 7, 11])
        fld = PrimeField(p)
        fs = [
            poly.strip([rng.randrange(p) for _ in range(rng.randint(0, 4))])
            for _ in range(3)
        ]
        f, g, h = fs
        assert poly.mul(f, poly.mul(g, h, fld), fld) == poly.mul(poly.mul(f, g, fld), h, fld)
        lhs = poly.mul(f, poly.add(g, h, fld), fld)
        rhs = poly.add(poly.mul(f, g, fld), poly.mul(f, h, fld), fld)
        assert lhs == rhs


def test_extension_field_polynomials():
    F9 = ExtField(3, 2)
    t = (0, 1)
    f = poly.from_roots([F9.zero, F9.one, t], F9)
    assert poly.degree(f) == 3
    roots = poly.distinct_roots_in_field(f, F9)
    assert sorted(F9.to_index(r) for r in roots) == sorted(
        F9.to_index(r) for r in (F9.zero, F9.one, t)
    )
    assert poly.is_squarefree(f, F9)
