import math
import random

import numpy as np
import pytest

from fpsubsets.curves import (
    BilinearInstance,
    bilinear_sum,
    bilinear_vs_histogram,
    deviation_crosscheck,
    exceptional_lambdas,
    g_lambda_grid,
    histogram_Nn,
    newton_check,
    phi_identity_verify,
    prop2_constants,
    prop2_verify,
    relation9_verify,
)
from fpsubsets.errors import BudgetError
from fpsubsets.expsums import ep_table

K1_INST = BilinearInstance(p=7, b=(0,), c=(0,), d=(1,))


def random_instance(p, k, rng):
    return BilinearInstance(
        p=p,
        b=tuple(rng.sample(range(p), k)),
        c=tuple(rng.sample(range(p), k)),
        d=tuple(rng.choice(range(1, p)) for _ in range(k)),
    )


def test_instance_validation():
    with pytest.raises(ValueError):
        BilinearInstance(p=7, b=(0, 0), c=(1, 2), d=(1, 1))
    with pytest.raises(ValueError):
        BilinearInstance(p=7, b=(0, 1), c=(1, 2), d=(1, 0))
    with pytest.raises(ValueError):
        BilinearInstance(p=3, b=(0, 1, 2), c=(0, 1, 2), d=(1, 1, 1))


def test_shift_normalization():
    inst, beta, gamma = BilinearInstance(p=7, b=(0, 3), c=(1, 2), d=(1, 1)).shifted()
    assert beta == 1 and gamma == 0
    assert 0 not in inst.b and inst.c == (1, 2)
    same, b0, g0 = BilinearInstance(p=7, b=(1, 3), c=(1, 2), d=(1, 1)).shifted()
    assert (b0, g0) == (0, 0) and same.b == (1, 3)


def test_bilinear_sum_k1_exact():
    assert abs(bilinear_sum(K1_INST) - (-6)) < 1e-9


def test_histogram_k1_exact():
    h = histogram_Nn(K1_INST, 1)
    assert h.counts[0] == 0
    assert (h.counts[1:] == 6).all()


def test_histogram_mass_and_trivial_bound():
    rng = random.Random(11)
    for p, k in ((31, 1), (31, 2), (53, 3)):
        inst = random_instance(p, k, rng)
        h = histogram_Nn(inst, 1)
        assert int(h.counts.sum()) == (p - k) ** 2
        assert int(h.counts.max()) <= k * p


def test_histogram_thread_independence():
    rng = random.Random(4)
    inst = random_instance(101, 2, rng)
    h1 = histogram_Nn(inst, 1, threads=1)
    h4 = histogram_Nn(inst, 1, threads=4)
    assert (h1.counts == h4.counts).all()


def test_bilinear_matches_histogram_oracle():
    rng = random.Random(9)
    for p, k in ((31, 1), (31, 2), (101, 3)):
        inst = random_instance(p, k, rng)
        assert bilinear_vs_histogram(inst)["pass"]


def test_histogram_budget():
    with pytest.raises(BudgetError):
        histogram_Nn(BilinearInstance(p=10007, b=(0,), c=(0,), d=(1,)), 1)
    with pytest.raises(BudgetError):
        histogram_Nn(BilinearInstance(p=101, b=(0,), c=(0,), d=(1,)), 2)


def test_histogram_extension_mass():
    inst = BilinearInstance(p=5, b=(1, 2), c=(1, 3), d=(1, 2))
    h = histogram_Nn(inst, 2)
    assert int(h.counts.sum()) == (25 - 2) ** 2
    assert int(h.counts.max()) <= 2 * 25


def test_prop2_k1_analytic_case():
    rep = prop2_verify(K1_INST, 1)
    assert rep["K"] == 2 and rep["nu"] == 2
    assert rep["exception_count"] == 1
    lam, dev = rep["exceptions"][0]
    assert lam == 0 and dev == -7


def test_prop2_constants():
    assert prop2_constants(1) == (2, 2)
    assert prop2_constants(2) == (8, 15)
    assert prop2_constants(3) == (18, 46)


def test_prop2_random_instances():
    rng = random.Random(21)
    for k in (1, 2, 3):
        for _ in range(3):
            inst = random_instance(101, k, rng)
            assert prop2_verify(inst, 1)["pass"]
    inst = random_instance(13, 2, rng)
    assert prop2_verify(inst, 2)["pass"]


def test_relation9_k1_matches_stated_constant():
    rep = relation9_verify(K1_INST, 1)
    assert rep["S_full"] == pytest.approx(7)
    assert rep["S_punctured"] == pytest.approx(-6)
    assert rep["diff"] == 13 == rep["paper_constant"]
    assert rep["u_solution_count"] == 7
    assert not rep["findings"]


def test_relation9_k2_deviation_is_reported():
    rep = relation9_verify(BilinearInstance(p=11, b=(1, 4), c=(2, 7), d=(3, 5)), 1)
    assert rep["diff"] == 2 * (11 - 2 + 1) - 1 == 19
    assert rep["paper_constant"] == 21
    assert rep["findings"]


def test_relation9_extension():
    rep = relation9_verify(BilinearInstance(p=5, b=(1, 2), c=(1, 3), d=(1, 2)), 2)
    assert rep["diff"] == 2 * (25 - 2 + 1) - 1
    assert rep["u_solution_count"] == 24


def test_phi_identity_k1_and_k2():
    assert phi_identity_verify(K1_INST, 1)["pass"]
    rep = phi_identity_verify(BilinearInstance(p=5, b=(1, 2), c=(1, 3), d=(1, 2)), 1)
    assert rep["pass"] and rep["terms"] == 5**6
    with pytest.raises(BudgetError):
        phi_identity_verify(BilinearInstance(p=31, b=(1, 2), c=(1, 3), d=(1, 2)), 1)


def test_g_lambda_grid_matches_direct_eval():
    inst = BilinearInstance(p=13, b=(1, 4), c=(2, 7), d=(3, 5))
    grid = g_lambda_grid(inst, 6)
    assert grid.shape == (3, 3)
    # spot value: g(0, 0)
    p = 13
    direct = 0
    for i in range(2):
        t = inst.d[i]
        for j in range(2):
            if j != i:
                t = t * (0 - inst.b[j]) % p * (0 - inst.c[j]) % p
        direct = (direct + t) % p
    t = 6
    for i in range(2):
        t = t * (0 - inst.b[i]) % p * (0 - inst.c[i]) % p
    direct = (direct - t) % p
    assert int(grid[0][0]) == direct


def test_newton_report():
    inst = BilinearInstance(p=31, b=(1, 4), c=(2, 7), d=(3, 5))
    rep = newton_check(inst, 3)
    assert rep.commode and rep.nondegenerate is True
    assert rep.nu == 2 * 4 - 4 == 4
    assert rep.polygon == [(0, 0), (2, 0), (2, 2), (0, 2)]
    with pytest.raises(ValueError):
        newton_check(inst, 0)
    with pytest.raises(ValueError):
        newton_check(BilinearInstance(p=31, b=(0, 4), c=(2, 7), d=(3, 5)), 3)


def test_exceptional_k1():
    rep = exceptional_lambdas(K1_INST, 1)
    assert rep["torus_point_count"] == 0 == rep["bezout_bound"]
    tags = rep["exceptional"]
    assert 0 in tags and any("origin" in t for t in tags.values())
    assert rep["count"] <= prop2_constants(1)[1]


def test_exceptional_k2_bezout():
    rng = random.Random(3)
    for _ in range(5):
        inst = random_instance(31, 2, rng)
        rep = exceptional_lambdas(inst, 1)
        assert rep["torus_point_count"] <= 9
        assert rep["pass"]


def test_exceptional_covers_large_prop2_deviations():
    rng = random.Random(13)
    for _ in range(5):
        inst = random_instance(53, 2, rng)
        hist = histogram_Nn(inst, 1)
        rep2 = prop2_verify(inst, 1, hist=hist)
        repx = exceptional_lambdas(inst, 1)
        nu, _ = prop2_constants(inst.k)
        thresh = nu * math.sqrt(inst.p) + 2 * inst.k
        deep = [lam for lam, dev in rep2["exceptions"] if abs(dev) > thresh]
        shift_free = set(repx["exceptional"].keys())
        for lam in deep:
            assert lam in shift_free


def test_deviation_crosscheck():
    rep = deviation_crosscheck(K1_INST, 1)
    assert rep["pass"] and rep["uniform_gap"] == 0
    inst = BilinearInstance(p=31, b=(1, 4), c=(2, 7), d=(3, 5))
    rep = deviation_crosscheck(inst, 1)
    assert rep["pass"]
    assert rep["uniform_gap"] == rep["expected_uniform_gap"] == 2
    assert rep["worst_gap"] <= 2 * inst.k
    rep = deviation_crosscheck(BilinearInstance(p=11, b=(1, 4), c=(2, 7), d=(3, 5)), 2)
    assert rep["pass"] and rep["uniform_gap"] == 2
