"""Family complexity: exact values, witness certificates, and the
degree-plus-two constructive lower bound for squarefree families.

Families over F_p with degree bound d:

  P1  all polynomials of degree <= d
  P2  polynomials of degree <= d with no repeated root in the closure
      (nonzero constants included, the zero polynomial excluded)
  P3  monic products of d distinct linear factors f_A = prod(X - a), A a
      d-subset of F_p

The complexity of a family is the largest k such that every in/out
pattern on every k-point set is realized by some member.  Witness
searches run in a fixed canonical order so certificates are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import mpmath
import numpy as np

from . import kernels, poly
from .errors import BudgetError, CheckFailure, HypothesisError
from .fields import PrimeField
from .subsets import ResidueSet

FAMILY_BUDGET = 10**7
T2_CHAR_BUDGET = 10**8


@dataclass(frozen=True)
class Family:
    kind: str   # P1 | P2 | P3
    d: int

    def __post_init__(self):
        if self.kind not in ("P1", "P2", "P3"):
            raise ValueError("family kind must be P1, P2 or P3")
        if self.d < 1:
            raise ValueError("degree bound must be >= 1")

    def size(self, p: int) -> int:
        if self.kind in ("P1", "P2"):
            return p ** (self.d + 1)   # P2 scans the same index space
        return math.comb(p, self.d)

    def check_budget(self, p: int) -> None:
        if self.kind == "P3" and self.d > p:
            raise ValueError("P3 requires d <= p")
        if self.size(p) > FAMILY_BUDGET:
            raise BudgetError(
                f"family scan of size {self.size(p)} exceeds {FAMILY_BUDGET}"
            )


def member_from_index(family: Family, p: int, index: int):
    """Decode a canonical scan index into polynomial coefficients."""
    if family.kind in ("P1", "P2"):
        coeffs = [(index // p**i) % p for i in range(family.d + 1)]
        return poly.strip(coeffs)
    return poly.from_roots(unrank_combination(p, family.d, index), PrimeField(p))


def unrank_combination(p: int, d: int, rank: int) -> list[int]:
    """Lexicographic unranking of d-subsets of {0..p-1}."""
    out = []
    x = 0
    for slot in range(d, 0, -1):
        while rank >= math.comb(p - x - 1, slot - 1):
            rank -= math.comb(p - x - 1, slot - 1)
            x += 1
        out.append(x)
        x += 1
    return out


@dataclass
class WitnessCertificate:
    B: tuple
    C: tuple
    witness: list
    index: int
    verified: bool


@dataclass
class ComplexityReport:
    family: Family
    p: int
    K: int
    capped: bool
    k_max: int
    failing_partition: tuple | None
    witness_samples: list
    scanned_members: int


def _pattern_setup(S, B, C, p):
    B = tuple(sorted(x % p for x in B))
    C = tuple(sorted(x % p for x in C))
    if set(B) & set(C):
        raise ValueError("B and C must be disjoint")
    points = tuple(sorted(set(B) | set(C)))
    target = 0
    for i, x in enumerate(points):
        if x in B:
            target |= 1 << i
    in_s = S.indicator() if isinstance(S, ResidueSet) else ResidueSet(p, S).indicator()
    return B, C, points, target, in_s


def _scan(family: Family, p, points, in_s, target):
    pts = np.asarray(points, dtype=np.int64)
    if family.kind == "P1":
        return kernels.pattern_scan_dense(p, family.d, pts, in_s, False, target)
    if family.kind == "P2":
        return kernels.pattern_scan_dense(p, family.d, pts, in_s, True, target)
    return kernels.pattern_scan_subsets(p, family.d, pts, in_s, target)


def verify_membership(family: Family, S, B, C, g, p) -> bool:
    """Direct re-check: g in the family and g realizes the (B, C) pattern."""
    fld = PrimeField(p)
    if poly.degree(g) > family.d:
        return False
    if family.kind == "P2":
        if poly.is_zero(g):
            return False
        if not poly.is_squarefree(g, fld):
            return False
    if family.kind == "P3":
        if poly.degree(g) != family.d or g[-1] != 1:
            return False
        roots = poly.distinct_roots_in_field(g, fld) if not poly.is_zero(g) else []
        if len(roots) != family.d or poly.from_roots(roots, fld) != g:
            return False
    member = S if isinstance(S, ResidueSet) else ResidueSet(p, S)
    for x in B:
        if poly.eval_at(g, x % p, fld) not in member:
            return False
    for x in C:
        if poly.eval_at(g, x % p, fld) in member:
            return False
    return True


def find_witness(family: Family, S, B, C, p) -> WitnessCertificate | None:
    """First family member (canonical order) realizing the (B, C) pattern.

    Returns None only after scanning the entire family (exhaustion proof).
    """
    family.check_budget(p)
    B, C, points, target, in_s = _pattern_setup(S, B, C, p)
    if len(points) > p:
        raise ValueError("more pattern points than field elements")
    first_hit, scanned = _scan(family, p, points, in_s, target)
    idx = int(first_hit[target])
    if idx < 0:
        if scanned != family.size(p):
            raise RuntimeError("scan stopped early without finding the target")
        return None
    g = member_from_index(family, p, idx)
    cert = WitnessCertificate(B=B, C=C, witness=g, index=idx,
                              verified=verify_membership(family, S, B, C, g, p))
    if not cert.verified:
        raise CheckFailure("scan returned a witness that fails re-verification")
    return cert


def complexity_exact(family: Family, S, p: int, k_max: int) -> ComplexityReport:
    """Largest k <= k_max with every pattern on every k-subset realizable.

    Levels are checked bottom-up; realizability at k implies it at k-1 by
    restricting witnesses, so the first failing level pins K exactly.  If
    no level fails the report is flagged as capped (K is then a verified
    lower bound).
    """
    family.check_budget(p)
    k_max = min(k_max, p)
    member = S if isinstance(S, ResidueSet) else ResidueSet(p, S)
    in_s = member.indicator()
    scanned_total = 0
    witness_samples: list[WitnessCertificate] = []
    for k in range(1, k_max + 1):
        for A in combinations(range(p), k):
            pts = np.asarray(A, dtype=np.int64)
            first_hit, scanned = _scan(family, p, A, in_s, -1)
            scanned_total += int(scanned)
            missing = np.nonzero(first_hit < 0)[0]
            if missing.shape[0]:
                pattern = int(missing[0])
                B = tuple(A[i] for i in range(k) if pattern >> i & 1)
                C = tuple(A[i] for i in range(k) if not pattern >> i & 1)
                return ComplexityReport(
                    family=family, p=p, K=k - 1, capped=False, k_max=k_max,
                    failing_partition=(B, C),
                    witness_samples=witness_samples[:3],
                    scanned_members=scanned_total,
                )
            if k == 1 and len(witness_samples) < 3:
                for pattern in range(min(2, 1 << k)):
                    g = member_from_index(family, p, int(first_hit[pattern]))
                    B = tuple(A[i] for i in range(k) if pattern >> i & 1)
                    C = tuple(A[i] for i in range(k) if not pattern >> i & 1)
                    witness_samples.append(
                        WitnessCertificate(B=B, C=C, witness=g,
                                           index=int(first_hit[pattern]),
                                           verified=verify_membership(family, member, B, C, g, p))
                    )
    return ComplexityReport(
        family=family, p=p, K=k_max, capped=True, k_max=k_max,
        failing_partition=None, witness_samples=witness_samples[:3],
        scanned_members=scanned_total,
    )


def k3_upper_clamp(p: int, d: int) -> int:
    """floor((d+1) log2 p): the splitting-family complexity never exceeds it."""
    return math.floor((d + 1) * math.log2(p))


def k1_lower_bound_sweep(p: int, d: int) -> dict:
    """Certify K1 >= d+1 for every proper nonempty S at once.

    For each (d+1)-subset A, pattern (B, C) and ordered value pair
    (s0, c0) with s0 != c0, the interpolant through (x, s0) on B and
    (x, c0) on C has degree <= d; evaluating it back verifies the
    certificate.  A given S uses the pair (min S, min S^c), so covering
    all pairs covers all S.
    """
    fld = PrimeField(p)
    pairs = [(s0, c0) for s0 in range(p) for c0 in range(p) if s0 != c0]
    s_arr = np.array([s for s, _ in pairs], dtype=np.int64)
    c_arr = np.array([c for _, c in pairs], dtype=np.int64)
    certificates = 0
    for A in combinations(range(p), d + 1):
        for pattern in range(1 << (d + 1)):
            ind = [(pattern >> i) & 1 for i in range(d + 1)]
            u = poly.interpolate([(x, v) for x, v in zip(A, ind)], fld)
            uc = np.zeros(d + 1, dtype=np.int64)
            for i, cf in enumerate(u):
                uc[i] = cf
            one_minus = np.zeros(d + 1, dtype=np.int64)
            one_minus[0] = 1
            one_minus = (one_minus - uc) % p
            # coefficient rows for every (s0, c0) pair, then direct Horner
            coeffs = (s_arr[:, None] * uc[None, :] + c_arr[:, None] * one_minus[None, :]) % p
            for i, x in enumerate(A):
                vals = np.zeros(len(pairs), dtype=np.int64)
                for j in range(d, -1, -1):
                    vals = (vals * x + coeffs[:, j]) % p
                want = np.where(ind[i], s_arr, c_arr)
                if not (vals == want).all():
                    raise CheckFailure(
                        f"interpolation certificate failed at A={A}, pattern={pattern}"
                    )
            certificates += len(pairs)
    return {
        "p": p, "d": d,
        "subsets": math.comb(p, d + 1),
        "patterns_per_subset": 1 << (d + 1),
        "value_pairs": len(pairs),
        "certificates": certificates,
        "covers_all_S": True,
        "pass": True,
    }


# ---------------------------------------------------------------------------
# the positivity condition behind the inverse-interval lower bound
# ---------------------------------------------------------------------------

def theorem1_condition(p: int, beta, d: int, k: int) -> dict:
    """Sign of C(p-k,d) min_l beta^l (1-beta-1/p)^(k-l) - error term.

    The error term is (44^(4k) + 2k + 2d - 2) p^(d-1) (log 9p)^k.  The
    main term is exact rational arithmetic; the comparison runs in
    log-space at 60 digits when the two sides are close.
    """
    if not isinstance(beta, Fraction):
        beta = Fraction(str(beta))
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    if Fraction(p) <= 2 / (1 - beta):
        raise HypothesisError("requires p > 2/(1-beta)")
    qf = 1 - beta - Fraction(1, p)
    main = math.comb(p - k, d) * min(beta**l * qf ** (k - l) for l in range(k + 1))
    err_const = 44 ** (4 * k) + 2 * k + 2 * d - 2
    with mpmath.workdps(60):
        log_main = mpmath.log(mpmath.mpf(main.numerator)) - mpmath.log(
            mpmath.mpf(main.denominator)
        )
        log_err = (
            mpmath.log(err_const)
            + (d - 1) * mpmath.log(p)
            + k * mpmath.log(mpmath.log(9 * p))
        )
        sign = 1 if log_main > log_err else -1
        return {
            "p": p, "beta": str(beta), "d": d, "k": k,
            "sign": sign,
            "log_main_term": float(log_main),
            "log_error_term": float(log_err),
        }


def theorem1_crossover_scan(beta, d: int, k: int, p_cap: float = 1e30) -> dict:
    """Locate where the condition turns positive, treating p as a real scale.

    Reported without assertion: the statement is asymptotic.  Uses
    lgamma-based binomials so the scan reaches astronomically large p.
    """
    if not isinstance(beta, Fraction):
        beta = Fraction(str(beta))
    bf = float(beta)

    def sign_at(preal: float) -> float:
        qf = 1 - bf - 1 / preal
        if qf <= 0:
            return -1.0
        log_binom = (
            math.lgamma(preal - k + 1)
            - math.lgamma(d + 1)
            - math.lgamma(preal - k - d + 1)
        )
        log_main = log_binom + min(
            l * math.log(bf) + (k - l) * math.log(qf) for l in range(k + 1)
        )
        log_err = (
            math.log(44 ** (4 * k) + 2 * k + 2 * d - 2)
            + (d - 1) * math.log(preal)
            + k * math.log(math.log(9 * preal))
        )
        return log_main - log_err

    lo = max(2 / (1 - bf) + 1, k + d + 2)
    hi = lo
    while sign_at(hi) <= 0:
        hi *= 2
        if hi > p_cap:
            return {"beta": str(beta), "d": d, "k": k, "crossover": None,
                    "note": f"no sign change below {p_cap:.1e}"}
    while sign_at(lo) > 0 and lo > 3:
        lo /= 2
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if sign_at(mid) > 0:
            hi = mid
        else:
            lo = mid
    return {"beta": str(beta), "d": d, "k": k, "crossover": hi,
            "note": "first real scale with positive margin (no assertion)"}


# ---------------------------------------------------------------------------
# the constructive degree-plus-two witness (squarefree family)
# ---------------------------------------------------------------------------

@dataclass
class Theorem4Trace:
    case: str
    ell: int
    i0: int | None = None
    alpha: int | None = None
    mu: int | None = None
    avoid_set: list = field(default_factory=list)
    u: int | None = None
    v: int | None = None
    s_pair: tuple | None = None
    z_roots: list = field(default_factory=list)
    z_outside_field: bool = False
    retries: int = 0


def _distinct_infield_roots(f, fld):
    """In-field roots of f' style polynomials plus an out-of-field flag."""
    if poly.is_zero(f):
        return [], False
    if poly.degree(f) == 0:
        return [], False
    if poly.degree(f) == 1:
        return [(-f[0] * fld.inv(f[1])) % fld.p], False
    roots = []
    g = list(f)
    for x in range(fld.p):
        if fld.is_zero(poly.eval_at(g, x, fld)):
            roots.append(x)
    # peel in-field linear factors (with multiplicity) to detect residue
    rem = list(g)
    for x in roots:
        while True:
            qt, r = poly.divmod_poly(rem, [(-x) % fld.p, 1], fld)
            if r:
                break
            rem = qt
    return roots, poly.degree(rem) > 0


def _squarefree_or_constant(g, fld) -> bool:
    if poly.is_zero(g) or poly.degree(g) == 0:
        return True
    return poly.is_squarefree(g, fld)


def theorem4_construct(B, C, S, p: int, d: int) -> tuple[list, Theorem4Trace]:
    """Build a squarefree g, deg <= d, with g(B) inside S and g(C) outside.

    Requires |B u C| = d + 2 (disjoint) and 4d - 2 < |S| < (p - d + 1)/2.
    The returned polynomial is always re-verified by direct evaluation and
    a squarefreeness test before being handed back; search exhaustion is a
    defect (the hypotheses make it impossible) and raises with the trace.
    """
    fld = PrimeField(p)
    Svals = set(x % p for x in (S if not isinstance(S, ResidueSet) else iter(S)))
    B = sorted(x % p for x in B)
    C = sorted(x % p for x in C)
    if set(B) & set(C):
        raise HypothesisError("B and C must be disjoint")
    if len(B) + len(C) != d + 2:
        raise HypothesisError("|B u C| must equal d + 2")
    if d + 2 > p:
        raise HypothesisError("d + 2 must not exceed p")
    if not (4 * d - 2 < len(Svals) and 2 * len(Svals) < p - d + 1):
        raise HypothesisError("requires 4d - 2 < |S| < (p - d + 1)/2")
    ell = len(B)
    a = B + C          # a_1..a_ell in S-side, rest out

    def verified(g, trace):
        if poly.degree(g) > d:
            raise CheckFailure(f"degree overflow in construction: {trace}")
        for x in B:
            if poly.eval_at(g, x, fld) not in Svals:
                return False
        for x in C:
            if poly.eval_at(g, x, fld) in Svals:
                return False
        return _squarefree_or_constant(g, fld)

    # ell = 0: a constant outside S (nonzero, so it is a squarefree member)
    if ell == 0:
        w = min(x for x in range(1, p) if x not in Svals)
        trace = Theorem4Trace(case="ell0", ell=0, v=w)
        g = [w]
        if not verified(g, trace):
            raise CheckFailure(f"constant construction failed: {trace}")
        return g, trace

    if ell == 1:
        # interpolants f_i (i over C positions): 0 at a_1, 1 at other points
        fs = {}
        for i in range(1, d + 2):
            pts = [(a[0], 0)] + [(a[j], 1) for j in range(1, d + 2) if j != i]
            fs[i] = poly.interpolate(pts, fld)
        diag = {i: poly.eval_at(fs[i], a[i], fld) for i in fs}
        if all(v == 0 for v in diag.values()):
            f = []
            for i in fs:
                f = poly.add(f, fs[i], fld)
            mu_vals = {poly.eval_at(f, a[j], fld) for j in range(1, d + 2)}
            if len(mu_vals) != 1:
                raise CheckFailure("summed interpolants lost the common value")
            mu = mu_vals.pop()
            if mu == 0:
                raise CheckFailure("common value vanished; construction defect")
            fprime = poly.derivative(f, fld)
            z_roots, z_out = _distinct_infield_roots(fprime, fld)
            v = min(x for x in sorted(Svals) if x != 0)
            avoid = {0}
            for z in z_roots:
                fz = poly.eval_at(f, z, fld)
                if fz != 0:
                    avoid.add((-v * fld.inv(fz)) % p)
            mu_inv = fld.inv(mu)
            for s in Svals:
                avoid.add((s - v) * mu_inv % p)
            trace = Theorem4Trace(case="ell1_sum", ell=1, mu=mu, v=v,
                                  avoid_set=sorted(avoid), z_roots=z_roots,
                                  z_outside_field=z_out)
            for u in range(p):
                if u in avoid:
                    continue
                g = poly.add(poly.scale(f, u, fld), [v] if v else [], fld)
                trace.u = u
                if verified(g, trace):
                    return g, trace
                trace.retries += 1
            raise CheckFailure(f"ell=1 sum branch exhausted: {trace}")
        i0 = min(i for i, val in diag.items() if val != 0)
        fi = fs[i0]
        alpha0 = diag[i0]
        fprime = poly.derivative(fi, fld)
        z_roots, z_out = _distinct_infield_roots(fprime, fld)
        v = min(x for x in sorted(Svals) if x != 0)
        avoid = {0}
        for z in z_roots:
            fz = poly.eval_at(fi, z, fld)
            if fz != 0:
                avoid.add((-v * fld.inv(fz)) % p)
        for s in Svals:
            avoid.add((s - v) % p)
            avoid.add((s - v) * fld.inv(alpha0) % p)
        trace = Theorem4Trace(case="ell1_i0", ell=1, i0=i0, alpha=alpha0, v=v,
                              avoid_set=sorted(avoid), z_roots=z_roots,
                              z_outside_field=z_out)
        for u in range(p):
            if u in avoid:
                continue
            g = poly.add(poly.scale(fi, u, fld), [v] if v else [], fld)
            trace.u = u
            if verified(g, trace):
                return g, trace
            trace.retries += 1
        raise CheckFailure(f"ell=1 designated branch exhausted: {trace}")

    # ell >= 2: interpolants vanish on the other S-side points, 1 on C
    fs = {}
    for i in range(ell):
        pts = [(a[j], 0) for j in range(ell) if j != i] + [
            (a[j], 1) for j in range(ell, d + 2)
        ]
        fs[i] = poly.interpolate(pts, fld)
    diag = {i: poly.eval_at(fs[i], a[i], fld) for i in fs}
    if all(v == 1 for v in diag.values()):
        f = [(p - 1) % p]      # the constant -1
        for i in fs:
            f = poly.add(f, fs[i], fld)
        for j in range(ell):
            if poly.eval_at(f, a[j], fld) != 0:
                raise CheckFailure("sum construction lost its zeros")
        mu_vals = {poly.eval_at(f, a[j], fld) for j in range(ell, d + 2)}
        if C and len(mu_vals) != 1:
            raise CheckFailure("summed interpolants lost the common value")
        mu = mu_vals.pop() if C else (ell - 1) % p
        if C and mu == 0:
            raise CheckFailure("common value vanished; construction defect")
        fprime = poly.derivative(f, fld)
        z_roots, z_out = _distinct_infield_roots(fprime, fld)
        v = min(x for x in sorted(Svals) if x != 0)
        avoid = {0}
        for z in z_roots:
            fz = poly.eval_at(f, z, fld)
            if fz != 0:
                avoid.add((-v * fld.inv(fz)) % p)
        if C:
            mu_inv = fld.inv(mu)
            for s in Svals:
                avoid.add((s - v) * mu_inv % p)
        trace = Theorem4Trace(case="ell_ge2_sum", ell=ell, mu=mu, v=v,
                              avoid_set=sorted(avoid), z_roots=z_roots,
                              z_outside_field=z_out)
        for u in range(p):
            if u in avoid:
                continue
            g = poly.add(poly.scale(f, u, fld), [v] if v else [], fld)
            trace.u = u
            if verified(g, trace):
                return g, trace
            trace.retries += 1
        raise CheckFailure(f"ell>=2 sum branch exhausted: {trace}")

    i0 = min(i for i, val in diag.items() if val != 1)
    fi = fs[i0]
    alpha = diag[i0]
    fprime = poly.derivative(fi, fld)
    z_roots, z_out = _distinct_infield_roots(fprime, fld)
    if alpha == 0:
        # the two S-side conditions coincide: g = u f_i0 + v, v in S - {0}
        v = min(x for x in sorted(Svals) if x != 0)
        avoid = {0}
        for z in z_roots:
            fz = poly.eval_at(fi, z, fld)
            if fz != 0:
                avoid.add((-v * fld.inv(fz)) % p)
        if C:
            for s in Svals:
                avoid.add((s - v) % p)
        trace = Theorem4Trace(case="ell_ge2_alpha", ell=ell, i0=i0, alpha=0, v=v,
                              avoid_set=sorted(avoid), z_roots=z_roots,
                              z_outside_field=z_out)
        for u in range(p):
            if u in avoid:
                continue
            g = poly.add(poly.scale(fi, u, fld), [v] if v else [], fld)
            trace.u = u
            if verified(g, trace):
                return g, trace
            trace.retries += 1
        raise CheckFailure(f"alpha=0 branch exhausted: {trace}")

    # alpha not in {0, 1}: search value pairs (s, s') in S^2
    alpha_inv = fld.inv(alpha)
    fz_vals = [poly.eval_at(fi, z, fld) for z in z_roots]
    trace = Theorem4Trace(case="ell_ge2_alpha", ell=ell, i0=i0, alpha=alpha,
                          z_roots=z_roots, z_outside_field=z_out)
    s_sorted = sorted(Svals)
    for s in s_sorted:
        for s2 in s_sorted:
            combo = ((1 - alpha_inv) * s + alpha_inv * s2) % p
            if combo in Svals:
                continue
            bad = False
            for fz in fz_vals:
                t = alpha_inv * fz % p
                if ((1 - t) * s + t * s2) % p == 0:
                    bad = True
                    break
            if bad:
                continue
            u = (s2 - s) * alpha_inv % p
            v = s
            g = poly.add(poly.scale(fi, u, fld), [v] if v else [], fld)
            trace.u, trace.v, trace.s_pair = u, v, (s, s2)
            if verified(g, trace):
                return g, trace
            trace.retries += 1
    raise CheckFailure(f"alpha branch exhausted: {trace}")


# ---------------------------------------------------------------------------
# splitting-family counting and its character identity
# ---------------------------------------------------------------------------

def t2_count(S, d: int, B, C, p: int) -> int:
    """Count d-subsets A with f_A in S-{0} on B and in S^c-{0} on C."""
    if math.comb(p, d) > FAMILY_BUDGET:
        raise BudgetError("subset count exceeds the scan budget")
    member = S if isinstance(S, ResidueSet) else ResidueSet(p, S)
    B = tuple(sorted(x % p for x in B))
    C = tuple(sorted(x % p for x in C))
    if set(B) & set(C):
        raise ValueError("B and C must be disjoint")
    points = B + C
    ind = member.indicator()
    accept = np.zeros((len(points), p), dtype=np.uint8)
    for i in range(len(B)):
        accept[i] = ind
    for i in range(len(B), len(points)):
        accept[i] = 1 - ind
    if points:
        accept[:, 0] = 0    # values are required nonzero on both sides
    pts = np.asarray(points, dtype=np.int64)
    return int(kernels.count_subsets_matching(p, d, pts, accept))


def t2_character_identity_check(S, d: int, B, C, p: int) -> dict:
    """Literal character expansion of (p-1)^k T2 against the direct count.

    The inner factor for a point value x is
    sum_chi sum_{r in S-{0}} chi(x) conj(chi)(r); it is evaluated by
    summing all (p-1)|S-{0}| roots of unity (cached per x), the product
    over points is summed over every d-subset, rounded, and compared
    exactly.
    """
    member = S if isinstance(S, ResidueSet) else ResidueSet(p, S)
    B = tuple(sorted(x % p for x in B))
    C = tuple(sorted(x % p for x in C))
    k = len(B) + len(C)
    if (p - 1) ** k * math.comb(p, d) > T2_CHAR_BUDGET:
        raise BudgetError("character expansion exceeds its budget")
    fld = PrimeField(p)
    L = fld.dlog_table()
    zeta = np.exp(2j * np.pi * np.arange(p - 1) / (p - 1))
    a_range = np.arange(p - 1, dtype=np.int64)
    col = np.array([np.sum(zeta[(a_range * delta) % (p - 1)]) for delta in range(p - 1)])
    s_logs = [int(L[s]) for s in sorted(member) if s % p != 0]
    sc_logs = [int(L[s]) for s in sorted(member.complement()) if s % p != 0]
    inner_S = np.zeros(p, dtype=np.complex128)
    inner_Sc = np.zeros(p, dtype=np.complex128)
    for x in range(1, p):
        lx = int(L[x])
        inner_S[x] = sum(col[(lx - lr) % (p - 1)] for lr in s_logs)
        inner_Sc[x] = sum(col[(lx - lr) % (p - 1)] for lr in sc_logs)
    total = 0j
    for A in combinations(range(p), d):
        term = 1 + 0j
        for x in B:
            v = 1
            for aa in A:
                v = v * (x - aa) % p
            term *= inner_S[v]
            if term == 0:
                break
        if term != 0:
            for x in C:
                v = 1
                for aa in A:
                    v = v * (x - aa) % p
                term *= inner_Sc[v]
                if term == 0:
                    break
        total += term
    direct = t2_count(member, d, B, C, p)
    lhs = (p - 1) ** k * direct
    err = abs(total - lhs)
    if err > 1e-3:
        raise CheckFailure(f"character identity failed: |{total} - {lhs}| = {err}")
    return {
        "p": p, "d": d, "B": B, "C": C,
        "count": direct, "lhs": lhs,
        "expansion": complex(total), "rounding_error": err,
        "pass": True,
    }


# ---------------------------------------------------------------------------
# additive-combinatorics inequalities
# ---------------------------------------------------------------------------

def green_ruzsa_verify(S1, S2, p: int) -> dict:
    """Representation-count inequality for the sumset S1 + S2 over F_p.

    r(n) counts pairs (s1, s2) with s1 + s2 = n; for every t up to
    min(|S1|, |S2|) the clipped mass sum_n min(t, r(n)) must be at least
    t * min(p, |S1| + |S2| - 1 - t).
    """
    A = sorted(x % p for x in S1)
    Bv = sorted(x % p for x in S2)
    if not A or not Bv:
        raise ValueError("both sets must be nonempty")
    r = np.zeros(p, dtype=np.int64)
    ind2 = np.zeros(p, dtype=np.int64)
    for x in Bv:
        ind2[x] += 1
    for x in A:
        r += np.roll(ind2, x)
    worst_margin = None
    rows = []
    for t in range(1, min(len(A), len(Bv)) + 1):
        lhs = int(np.minimum(r, t).sum())
        rhs = t * min(p, len(A) + len(Bv) - 1 - t)
        margin = lhs - rhs
        rows.append({"t": t, "lhs": lhs, "rhs": rhs})
        if worst_margin is None or margin < worst_margin:
            worst_margin = margin
        if margin < 0:
            raise CheckFailure(f"clipped-mass inequality failed at t={t}: {lhs} < {rhs}")
    return {"p": p, "sizes": (len(A), len(Bv)), "worst_margin": worst_margin,
            "per_t": rows, "pass": True}


def condition34_check(S, alpha: int, d: int, p: int) -> dict:
    """Count pairs (s, s') in S^2 with (1 - 1/alpha)s + (1/alpha)s' outside S.

    The count equals sum_{n not in S} r(n) for the dilated sumset
    (1 - 1/alpha)S + (1/alpha)S, so the clipped-mass floor
    (|S|/2)(|S|/2 - 1) applies; the theorem needs count > |S|(d - 1),
    which follows from |S| > 4d - 2.
    """
    fld = PrimeField(p)
    if alpha % p in (0, 1):
        raise ValueError("alpha must avoid 0 and 1")
    Svals = sorted(x % p for x in (S if not isinstance(S, ResidueSet) else iter(S)))
    if len(Svals) <= 4 * d - 2:
        raise HypothesisError("requires |S| > 4d - 2")
    ainv = fld.inv(alpha)
    count = 0
    Sset = set(Svals)
    for s in Svals:
        for s2 in Svals:
            if ((1 - ainv) * s + ainv * s2) % p not in Sset:
                count += 1
    size = len(Svals)
    t0 = Fraction(size - 1, 2)
    t_star = int(t0) if t0.denominator == 1 else int(t0 + Fraction(1, 2))
    floor_val = t_star * (size - 1 - t_star)
    need = size * (d - 1)
    if count <= need:
        raise CheckFailure(f"pair count {count} not above |S|(d-1) = {need}")
    if count < floor_val:
        raise CheckFailure(f"pair count {count} below the clipped-mass floor {floor_val}")
    return {
        "p": p, "alpha": alpha % p, "d": d, "set_size": size,
        "pair_count": count, "required": need, "floor": floor_val,
        "pass": True,
    }
