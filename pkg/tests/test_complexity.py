import math
import random
from itertools import combinations

import pytest

from fpsubsets import poly
from fpsubsets.complexity import (
    Family,
    complexity_exact,
    condition34_check,
    find_witness,
    green_ruzsa_verify,
    k1_lower_bound_sweep,
    k3_upper_clamp,
    member_from_index,
    t2_character_identity_check,
    t2_count,
    theorem1_condition,
    theorem1_crossover_scan,
    theorem4_construct,
    unrank_combination,
)
from fpsubsets.errors import BudgetError, CheckFailure, HypothesisError
from fpsubsets.fields import PrimeField
from fpsubsets.subsets import ResidueSet


def test_unrank_combination_roundtrip():
    p, d = 9, 3
    for rank, combo in enumerate(combinations(range(p), d)):
        assert unrank_combination(p, d, rank) == list(combo)


def test_find_witness_example():
    fam = Family("P1", 1)
    S = ResidueSet(7, {1, 2, 4})
    cert = find_witness(fam, S, (1,), (2,), 7)
    assert cert is not None and cert.verified
    fld = PrimeField(7)
    assert poly.eval_at(cert.witness, 1, fld) in {1, 2, 4}
    assert poly.eval_at(cert.witness, 2, fld) not in {1, 2, 4}


def test_find_witness_none_with_exhaustion():
    fam = Family("P1", 1)
    assert find_witness(fam, ResidueSet(7, range(7)), (), (3,), 7) is None


def test_find_witness_empty_partition_canonical_first():
    S = ResidueSet(7, {1, 2, 4})
    assert find_witness(Family("P1", 1), S, (), (), 7).index == 0
    w = find_witness(Family("P2", 1), S, (), (), 7)
    assert w.index == 1 and w.witness == [1]     # zero polynomial is skipped
    w = find_witness(Family("P3", 2), S, (), (), 7)
    assert w.index == 0
    assert w.witness == poly.from_roots([0, 1], PrimeField(7))


def test_member_from_index_p2_matches_p1_indexing():
    fam1, fam2 = Family("P1", 2), Family("P2", 2)
    assert member_from_index(fam1, 5, 31) == member_from_index(fam2, 5, 31)


def test_complexity_k1_example_exact():
    rep = complexity_exact(Family("P1", 1), ResidueSet(3, {1}), 3, 3)
    assert rep.K == 2 and not rep.capped
    B, C = rep.failing_partition
    assert len(B) + len(C) == 3
    # re-search confirms the failing partition has no witness
    assert find_witness(Family("P1", 1), ResidueSet(3, {1}), B, C, 3) is None


def test_complexity_full_set_is_zero():
    rep = complexity_exact(Family("P1", 1), ResidueSet(3, {0, 1, 2}), 3, 3)
    assert rep.K == 0


def test_complexity_nested_families():
    S = ResidueSet(7, {1, 2, 4})
    ks = {}
    for kind in ("P1", "P2", "P3"):
        ks[kind] = complexity_exact(Family(kind, 2), S, 7, 6)
    assert ks["P1"].K >= ks["P2"].K >= ks["P3"].K
    assert ks["P3"].K <= k3_upper_clamp(7, 2)


def test_p3_witnesses_accepted_upward():
    S = ResidueSet(11, {1, 2, 4, 8})
    from fpsubsets.complexity import verify_membership

    for B, C in (((1,), (2,)), ((1, 3), (5,)), ((), (2, 6))):
        cert = find_witness(Family("P3", 2), S, B, C, 11)
        if cert is None:
            continue
        assert verify_membership(Family("P2", 2), S, B, C, cert.witness, 11)
        assert verify_membership(Family("P1", 2), S, B, C, cert.witness, 11)


def test_k1_lower_bound_holds_at_interpolation_level():
    for p in (3, 5, 7, 11):
        for d in (1, 2):
            rep = k1_lower_bound_sweep(p, d)
            assert rep["pass"] and rep["covers_all_S"]


def test_k3_clamp_values():
    assert k3_upper_clamp(11, 2) == 10
    assert k3_upper_clamp(3, 1) == 3
    for p, d in ((5, 1), (13, 2), (101, 3)):
        assert k3_upper_clamp(p, d) <= k3_upper_clamp(p, d + 1)
        assert k3_upper_clamp(p, d) <= k3_upper_clamp(next_prime(p), d)


def next_prime(p):
    from fpsubsets.fields import is_prime

    q = p + 1
    while not is_prime(q):
        q += 1
    return q


def test_complexity_budget():
    with pytest.raises(BudgetError):
        complexity_exact(Family("P1", 3), ResidueSet(101, {1}), 101, 2)


def test_theorem1_condition_negative_at_desk_scale():
    rep = theorem1_condition(101, "0.5", 2, 1)
    assert rep["sign"] == -1
    with pytest.raises(HypothesisError):
        theorem1_condition(3, "0.5", 2, 1)


def test_theorem1_min_attained_at_endpoint():
    from fractions import Fraction

    p = 101
    for beta in (Fraction(3, 10), Fraction(1, 2), Fraction(7, 10)):
        qf = 1 - beta - Fraction(1, p)
        vals = [beta**l * qf ** (5 - l) for l in range(6)]
        assert min(vals) in (vals[0], vals[-1])


def test_theorem1_crossover_scan_reports_positive_scale():
    rep = theorem1_crossover_scan("0.5", 2, 1)
    assert rep["crossover"] is not None and rep["crossover"] > 101


@pytest.mark.parametrize(
    "B,C",
    [(set(), {3, 4, 5, 6}), ({1}, {3, 4, 5}), ({1, 2}, {3, 4}),
     ({1, 2, 3}, {4}), ({1, 2, 3, 4}, set())],
)
def test_theorem4_all_split_sizes(B, C):
    S = set(range(1, 8))
    g, trace = theorem4_construct(B, C, S, 17, 2)
    fld = PrimeField(17)
    assert poly.degree(g) <= 2
    for x in B:
        assert poly.eval_at(g, x, fld) in S
    for x in C:
        assert poly.eval_at(g, x, fld) not in S
    if poly.degree(g) >= 1:
        assert poly.is_squarefree(g, fld)


def test_theorem4_avoidance_set_stays_small():
    S = set(range(1, 8))
    g, trace = theorem4_construct({1}, {3, 4, 5}, S, 17, 2)
    # |R(v)| <= d - 1 + 2|S| < p under the size hypothesis
    assert len(trace.avoid_set) <= 2 - 1 + 2 * len(S) + 1
    assert len(trace.avoid_set) < 17


def test_theorem4_hypothesis_validation():
    with pytest.raises(HypothesisError):
        theorem4_construct({1}, {2, 3, 4}, set(range(1, 7)), 17, 2)   # |S| = 4d-2
    with pytest.raises(HypothesisError):
        theorem4_construct({1}, {2, 3}, set(range(1, 8)), 17, 2)      # wrong size
    with pytest.raises(HypothesisError):
        theorem4_construct({1}, {1, 3, 4}, set(range(1, 8)), 17, 2)   # overlap
    with pytest.raises(HypothesisError):
        theorem4_construct({1}, {2, 3, 4}, set(range(1, 9)), 17, 2)   # |S| too big


def test_theorem4_small_sweep_all_verified():
    p, d = 17, 2
    S = set(range(1, 8))
    cases = {}
    for A in combinations(range(7), 4):
        for bits in range(16):
            B = {A[i] for i in range(4) if bits >> i & 1}
            g, tr = theorem4_construct(B, set(A) - B, S, p, d)
            cases[tr.case] = cases.get(tr.case, 0) + 1
    assert set(cases) <= {"ell0", "ell1_sum", "ell1_i0", "ell_ge2_sum", "ell_ge2_alpha"}
    assert cases.get("ell0") and cases.get("ell_ge2_alpha")


def test_t2_count_examples():
    Sfull = ResidueSet(7, range(7))
    assert t2_count(Sfull, 2, (1, 2), (), 7) == math.comb(5, 2)
    S = ResidueSet(7, {1, 2, 4})
    assert t2_count(S, 0, (), (), 7) == 1
    assert t2_count(S, 0, (1,), (), 7) == (1 if 1 in S else 0)
    # brute force cross-check
    fld = PrimeField(7)
    got = t2_count(S, 2, (1,), (3,), 7)
    brute = 0
    for A in combinations(range(7), 2):
        f = poly.from_roots(A, fld)
        v1, v3 = poly.eval_at(f, 1, fld), poly.eval_at(f, 3, fld)
        if v1 in {1, 2, 4} and v1 != 0 and v3 not in {1, 2, 4} and v3 != 0:
            brute += 1
    assert got == brute


@pytest.mark.parametrize("p", [7, 13])
def test_t2_character_identity_all_two_point_partitions(p):
    S = ResidueSet(p, {1, 2, 4})
    for x, y in combinations(range(p), 2):
        for B, C in (((x, y), ()), ((x,), (y,)), ((y,), (x,)), ((), (x, y))):
            rep = t2_character_identity_check(S, 2, B, C, p)
            assert rep["pass"]


def test_green_ruzsa_worked_example():
    rep = green_ruzsa_verify({1, 2, 3}, {1, 2, 3}, 7)
    table = {r["t"]: (r["lhs"], r["rhs"]) for r in rep["per_t"]}
    assert table[1] == (5, 4)
    assert table[2] == (8, 6)


def test_green_ruzsa_full_sets():
    p = 11
    rep = green_ruzsa_verify(set(range(p)), set(range(p)), p)
    assert rep["pass"]


def test_green_ruzsa_exhaustive_tiny():
    p = 5
    for m1 in range(1, 1 << p):
        S1 = {i for i in range(p) if m1 >> i & 1}
        for m2 in range(1, 1 << p):
            S2 = {i for i in range(p) if m2 >> i & 1}
            assert green_ruzsa_verify(S1, S2, p)["pass"]


def test_condition34():
    rep = condition34_check(set(range(1, 8)), 2, 2, 17)
    assert rep["pass"] and rep["pair_count"] > 7
    assert rep["floor"] == 3 * 3  # |S| = 7: t* = 3, floor = 3 * (7 - 1 - 3)
    with pytest.raises(ValueError):
        condition34_check(set(range(1, 8)), 1, 2, 17)
    with pytest.raises(HypothesisError):
        condition34_check(set(range(1, 7)), 2, 2, 17)


def test_condition34_floor_beats_requirement_at_boundary():
    # |S| = 4d - 1 makes the clipped-mass floor exceed |S|(d-1)
    for d in (1, 2, 3):
        size = 4 * d - 1
        t0 = (size - 1) / 2
        t_star = int(t0) if t0 == int(t0) else int(t0 + 0.5)
        floor = t_star * (size - 1 - t_star)
        assert floor > size * (d - 1)
