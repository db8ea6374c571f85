import numpy as np
import pytest

from fpsubsets.fields import (
    ExtField,
    PrimeField,
    find_irreducible,
    inverse_table,
    is_prime,
    prime_factors,
)


def test_prime_validation():
    with pytest.raises(ValueError):
        PrimeField(2)
    with pytest.raises(ValueError):
        PrimeField(9)
    PrimeField(3)
    PrimeField(9973)


def test_basic_arithmetic_examples():
    F7 = PrimeField(7)
    assert F7.add(3, 5) == 1
    assert F7.mul(0, 5) == 0
    assert F7.inv(3) == 5
    assert F7.inv(1) == 1
    assert F7.inv(6) == 6          # (-1)^2 = 1
    assert F7.pow(2, 3) == 1
    assert F7.pow(0, 0) == 1
    with pytest.raises(ZeroDivisionError):
        F7.inv(0)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 101])
def test_inverses_exhaustive(p):
    fld = PrimeField(p)
    for a in range(1, p):
        assert fld.mul(a, fld.inv(a)) == 1
    t = inverse_table(p)
    for a in range(1, p):
        assert t[a] * a % p == 1


def test_inverses_extension_exhaustive():
    for p, n in ((3, 2), (5, 2), (7, 2)):
        fld = ExtField(p, n)
        for i in range(1, fld.order):
            x = fld.from_index(i)
            assert fld.mul(x, fld.inv(x)) == fld.one


def test_fermat_for_nonzero():
    fld = PrimeField(31)
    for a in range(1, 31):
        assert fld.pow(a, 30) == 1


@pytest.mark.parametrize("p,expected", [(3, 2), (5, 2), (7, 3)])
def test_primitive_root_examples(p, expected):
    assert PrimeField(p).primitive_root() == expected


def test_primitive_root_order_exhaustive():
    for p in (q for q in range(3, 500) if is_prime(q)):
        fld = PrimeField(p)
        g = fld.primitive_root()
        for ell in prime_factors(p - 1):
            assert fld.pow(g, (p - 1) // ell) != 1


def test_dlog_table_bijection():
    for p in (7, 13, 101):
        fld = PrimeField(p)
        L = fld.dlog_table()
        g = fld.primitive_root()
        assert L[1] == 0
        assert L[g] == 1
        assert L[0] == -1
        assert sorted(L[1:]) == list(range(p - 1))
        for x in range(1, p):
            assert fld.pow(g, int(L[x])) == x
    assert PrimeField(7).dlog_table()[6] == 3


def test_find_irreducible_examples():
    assert find_irreducible(7, 1) == [0, 1]
    assert find_irreducible(3, 2) == [1, 0, 1]
    assert find_irreducible(5, 2) == [2, 0, 1]


def test_extension_modulus_reduction():
    F9 = ExtField(3, 2)       # modulus X^2 + 1
    t = (0, 1)
    assert F9.mul(t, t) == (2, 0)


def test_trace_examples_and_linearity():
    F25 = ExtField(5, 2)
    assert F25.trace(F25.zero) == 0
    for c in range(5):
        assert F25.trace(F25.embed(c)) == 2 * c % 5
    rng = np.random.default_rng(11)
    for _ in range(1000):
        x = F25.from_index(int(rng.integers(25)))
        y = F25.from_index(int(rng.integers(25)))
        c = int(rng.integers(5))
        assert F25.trace(F25.add(x, y)) == (F25.trace(x) + F25.trace(y)) % 5
        cx = F25.mul(F25.embed(c), x)
        assert F25.trace(cx) == c * F25.trace(x) % 5


@pytest.mark.parametrize("p,n", [(3, 2), (3, 3), (5, 2), (7, 2), (13, 2), (5, 3)])
def test_trace_lands_in_base_field_exhaustive(p, n):
    fld = ExtField(p, n)
    for x in fld.elements():
        assert 0 <= fld.trace(x) < p    # raises inside if a higher coeff survives


def test_enumerate_orders_and_sizes():
    assert list(PrimeField(3).elements()) == [0, 1, 2]
    F9 = ExtField(3, 2)
    elems = list(F9.elements())
    assert len(elems) == 9 and len(set(elems)) == 9
    F25 = ExtField(5, 2)
    assert len(set(F25.elements())) == 25


def test_index_arithmetic_matches_tuples():
    fld = ExtField(3, 3)
    for a in range(27):
        for b in range(27):
            ta, tb = fld.from_index(a), fld.from_index(b)
            assert int(fld.idx_mul(np.int64(a), np.int64(b))) == fld.to_index(fld.mul(ta, tb))
            assert int(fld.idx_add(np.int64(a), np.int64(b))) == fld.to_index(fld.add(ta, tb))
            assert int(fld.idx_sub(np.int64(a), np.int64(b))) == fld.to_index(fld.sub(ta, tb))


def test_field_mismatch_rejected():
    F9 = ExtField(3, 2)
    with pytest.raises(ValueError):
        F9.add((1, 2, 0), (1, 0))
