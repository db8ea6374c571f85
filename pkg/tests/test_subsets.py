from fractions import Fraction
from itertools import combinations

import pytest

from fpsubsets import poly
from fpsubsets.errors import BudgetError
from fpsubsets.subsets import (
    BalancedSeq,
    Explicit,
    IndexedSet,
    Interval,
    InverseInterval,
    PowerResidues,
    ResidueSet,
    balanced_seq,
    construct_R,
    measure_Ck,
    measure_W,
    parse_subset_spec,
    realize,
)


def test_realize_interval_full():
    assert sorted(realize(Interval(0, 7), 7)) == list(range(7))
    assert sorted(realize(Interval(5, 4), 7)) == [0, 1, 5, 6]   # wraps mod p


def test_realize_inverse_interval():
    assert sorted(realize(InverseInterval(1, 3), 7)) == [1, 4, 5]
    # interval containing 0: that element is skipped
    assert sorted(realize(InverseInterval(0, 3), 7)) == [1, 4]
    assert len(realize(InverseInterval(0, 7), 7)) == 6


def test_realize_power_residues():
    assert sorted(realize(PowerResidues(2), 7)) == [1, 2, 4]
    assert sorted(realize(PowerResidues(1), 7)) == [1, 2, 3, 4, 5, 6]
    with pytest.raises(ValueError):
        realize(PowerResidues(4), 7)


def test_realize_explicit_and_parse():
    assert sorted(realize(parse_subset_spec("explicit:1,2,4"), 7)) == [1, 2, 4]
    assert parse_subset_spec("interval:0:3") == Interval(0, 3)
    assert parse_subset_spec("invinterval:1:3") == InverseInterval(1, 3)
    assert parse_subset_spec("powers:2") == PowerResidues(2)
    with pytest.raises(ValueError):
        parse_subset_spec("nope:1")


def test_construct_R_examples():
    S = realize(Explicit(frozenset({1, 2, 4})), 7)
    assert sorted(construct_R([0, 0, 1], S, 7)) == [1, 2, 3, 4, 5, 6]
    assert sorted(construct_R([0, 1], S, 7)) == [1, 2, 4]
    assert len(construct_R([1], S, 7)) == 7       # constant in S
    assert len(construct_R([0], S, 7)) == 0
    # index p evaluates at residue 0
    S0 = realize(Explicit(frozenset({0})), 7)
    assert 7 in construct_R([0, 1], S0, 7)


def test_construct_R_complement():
    for p in (5, 7, 13):
        S = realize(Interval(1, 3), p)
        for coeffs in ([0, 1], [1, 2], [3, 0, 1]):
            R = construct_R(coeffs, S, p)
            Rc = construct_R(coeffs, S.complement(), p)
            assert R.complement() == Rc


def test_balanced_seq():
    R = IndexedSet(4, [1])
    seq = balanced_seq(R)
    assert seq.numerators == (3, -1, -1, -1)
    assert seq.value(1) == Fraction(3, 4)
    assert balanced_seq(IndexedSet(5)).numerators == (0,) * 5
    assert balanced_seq(IndexedSet(3, [1, 2, 3])).numerators == (0, 0, 0)


def test_balanced_seq_sums_to_zero_exhaustive():
    for N in range(1, 13):
        for bits in range(1 << N):
            R = IndexedSet(N, [i + 1 for i in range(N) if bits >> i & 1])
            assert sum(balanced_seq(R).numerators) == 0


def test_measure_w_examples():
    assert measure_W(IndexedSet(6)).value == 0
    assert measure_W(IndexedSet(6, range(1, 7))).value == 0
    w = measure_W(IndexedSet(4, [1]))
    assert w.value == Fraction(3, 4)
    assert w.argmax == (1, 1, 1)


def test_measure_ck_examples():
    assert measure_Ck(IndexedSet(6), 2).value == 0
    r = measure_Ck(IndexedSet(4, [1]), 2)
    assert r.value == Fraction(3, 16)
    with pytest.raises(ValueError):
        measure_Ck(IndexedSet(4, [1]), 5)


def test_c1_matches_prefix_sum_oracle():
    for N, members in ((6, [1, 4]), (9, [2, 3, 9]), (5, [])):
        R = IndexedSet(N, members)
        seq = balanced_seq(R)
        best = Fraction(0)
        for d in range(N):
            acc = 0
            for n in range(1, N - d + 1):
                acc += seq.numerators[n - 1 + d]
                best = max(best, Fraction(abs(acc), N))
        assert measure_Ck(R, 1).value == best


def test_w_dominates_contiguous_windows():
    for N, members in ((8, [1, 2, 5]), (10, [4, 5, 6, 7])):
        R = IndexedSet(N, members)
        assert measure_W(R).value >= measure_Ck(R, 1).value


def test_measures_complement_invariant_exhaustive():
    for N in range(1, 11):
        for bits in range(1 << N):
            R = IndexedSet(N, [i + 1 for i in range(N) if bits >> i & 1])
            Rc = R.complement()
            assert measure_W(R).value == measure_W(Rc).value
            if N >= 2 and N <= 8:
                assert measure_Ck(R, 2).value == measure_Ck(Rc, 2).value


def test_budget_errors():
    with pytest.raises(BudgetError):
        measure_W(IndexedSet(5001, [1]))
    with pytest.raises(BudgetError):
        measure_Ck(IndexedSet(501, [1]), 2)


def test_residue_set_bitset_behaviour():
    S = ResidueSet(7, [1, 2, 4])
    assert len(S) == 3 and 2 in S and 3 not in S
    assert sorted(S.complement()) == [0, 3, 5, 6]
    assert list(S.indicator()) == [0, 1, 1, 0, 1, 0, 0]
