"""Subset constructions over F_p and their pseudorandomness measures.

Builds the residue sets S (intervals, inverse intervals, power residues),
the index sets R(f, S) inside {1, ..., p}, the balanced +-type sequence
attached to an index set, and the two exhaustive measures: the
well-distribution measure W along arithmetic progressions and the order-k
correlation measure C_k.  Both measures are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels, poly
from .errors import BudgetError
from .fields import PrimeField

W_CAP = 5000
CK_CAP_N = 500
CK_CAP_K = 3


# ---------------------------------------------------------------------------
# subset specifications and their realizations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    r: int
    s: int


@dataclass(frozen=True)
class InverseInterval:
    r: int
    s: int


@dataclass(frozen=True)
class PowerResidues:
    ell: int


@dataclass(frozen=True)
class Explicit:
    members: frozenset


SubsetSpec = Interval | InverseInterval | PowerResidues | Explicit


class ResidueSet:
    """A subset of F_p stored as a bitmask over [0, p)."""

    __slots__ = ("p", "mask", "size")

    def __init__(self, p: int, members=()):
        self.p = p
        mask = 0
        for m in members:
            m %= p
            mask |= 1 << m
        self.mask = mask
        self.size = mask.bit_count()

    @classmethod
    def from_mask(cls, p: int, mask: int) -> "ResidueSet":
        out = cls.__new__(cls)
        out.p = p
        out.mask = mask
        out.size = mask.bit_count()
        return out

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> (x % self.p) & 1)

    def __iter__(self):
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return isinstance(other, ResidueSet) and (self.p, self.mask) == (other.p, other.mask)

    def __repr__(self) -> str:
        return f"ResidueSet(p={self.p}, members={sorted(self)})"

    def complement(self) -> "ResidueSet":
        return ResidueSet.from_mask(self.p, ~self.mask & ((1 << self.p) - 1))

    def indicator(self) -> np.ndarray:
        out = np.zeros(self.p, dtype=np.uint8)
        for m in self:
            out[m] = 1
        return out


class IndexedSet:
    """A subset of {1, ..., N} stored as a bitmask (bit i-1 for index i)."""

    __slots__ = ("N", "mask", "size")

    def __init__(self, N: int, members=()):
        self.N = N
        mask = 0
        for m in members:
            if not 1 <= m <= N:
                raise ValueError(f"index {m} outside 1..{N}")
            mask |= 1 << (m - 1)
        self.mask = mask
        self.size = mask.bit_count()

    def __contains__(self, i: int) -> bool:
        return 1 <= i <= self.N and bool(self.mask >> (i - 1) & 1)

    def __iter__(self):
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length()
            mask ^= low

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return isinstance(other, IndexedSet) and (self.N, self.mask) == (other.N, other.mask)

    def __repr__(self) -> str:
        return f"IndexedSet(N={self.N}, members={sorted(self)})"

    def complement(self) -> "IndexedSet":
        out = IndexedSet(self.N)
        out.mask = ~self.mask & ((1 << self.N) - 1)
        out.size = out.mask.bit_count()
        return out


@dataclass(frozen=True)
class BalancedSeq:
    """The exact sequence e_n = 1 - |R|/N (n in R) or -|R|/N, over n = 1..N.

    Stored as integer numerators over the common denominator N; the
    numerators sum to zero.
    """

    N: int
    r_size: int
    numerators: tuple

    @property
    def denominator(self) -> int:
        return self.N

    def value(self, n: int) -> Fraction:
        return Fraction(self.numerators[n - 1], self.N)


def realize(spec: SubsetSpec, p: int) -> ResidueSet:
    """Realize a subset specification inside F_p.

    Intervals wrap modulo p; inverse intervals invert the nonzero interval
    members (the element congruent to 0, when present, is skipped); power
    residues are the image of the ell-th power map on the unit group.
    """
    fld = PrimeField(p)
    if isinstance(spec, Interval):
        if not 1 <= spec.s <= p:
            raise ValueError("interval length must satisfy 1 <= s <= p")
        return ResidueSet(p, ((spec.r + i) % p for i in range(spec.s)))
    if isinstance(spec, InverseInterval):
        if not 1 <= spec.s <= p:
            raise ValueError("interval length must satisfy 1 <= s <= p")
        members = []
        for i in range(spec.s):
            x = (spec.r + i) % p
            if x != 0:
                members.append(fld.inv(x))
        return ResidueSet(p, members)
    if isinstance(spec, PowerResidues):
        if spec.ell < 1 or (p - 1) % spec.ell != 0:
            raise ValueError("ell must divide p - 1")
        return ResidueSet(p, (pow(x, spec.ell, p) for x in range(1, p)))
    if isinstance(spec, Explicit):
        members = set(spec.members)
        if any(not 0 <= m < p for m in members):
            raise ValueError("explicit members must lie in [0, p)")
        return ResidueSet(p, members)
    raise TypeError(f"unknown subset spec {spec!r}")


def construct_R(f, S: ResidueSet, p: int) -> IndexedSet:
    """R(f, S) = indices n in {1..p} with f(n) mod p in S; n = p uses residue 0."""
    if poly.degree(f) > p:
        raise ValueError("polynomial degree exceeds p")
    fld = PrimeField(p)
    members = [n for n in range(1, p + 1) if poly.eval_at(f, n % p, fld) in S]
    return IndexedSet(p, members)


def balanced_seq(R: IndexedSet) -> BalancedSeq:
    N, r = R.N, len(R)
    nums = tuple((N - r) if n in R else -r for n in range(1, N + 1))
    return BalancedSeq(N=N, r_size=r, numerators=nums)


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureResult:
    value: Fraction
    argmax: tuple


def measure_W(R: IndexedSet) -> MeasureResult:
    """Exhaustive well-distribution measure with its lex-least argmax (a, b, t)."""
    if R.N > W_CAP:
        raise BudgetError(f"W is capped at N <= {W_CAP}")
    seq = balanced_seq(R)
    num = np.array(seq.numerators, dtype=np.int64)
    best = kernels.w_max_abs(num)
    a, b, t = kernels.w_lex_argmax(num, best)
    return MeasureResult(value=Fraction(best, R.N), argmax=(a, b, t))


def measure_Ck(R: IndexedSet, k: int) -> MeasureResult:
    """Exhaustive order-k correlation measure; argmax is (M, (d_1..d_k))."""
    N = R.N
    if not 1 <= k <= N:
        raise ValueError("k must satisfy 1 <= k <= N")
    if N > CK_CAP_N or k > CK_CAP_K:
        raise BudgetError(f"C_k is capped at N <= {CK_CAP_N}, k <= {CK_CAP_K}")
    seq = balanced_seq(R)
    num = np.array(seq.numerators, dtype=np.int64)
    best, M, dvec = kernels.ck_max(num, k)
    return MeasureResult(value=Fraction(best, N**k), argmax=(M, tuple(dvec)))


def parse_subset_spec(text: str) -> SubsetSpec:
    """Parse CLI subset syntax: interval:r:s | invinterval:r:s | powers:ell | explicit:a,b,c."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "interval":
            r, s = rest.split(":")
            return Interval(int(r), int(s))
        if kind == "invinterval":
            r, s = rest.split(":")
            return InverseInterval(int(r), int(s))
        if kind == "powers":
            return PowerResidues(int(rest))
        if kind == "explicit":
            return Explicit(frozenset(int(x) for x in rest.split(",") if x != ""))
    except ValueError as exc:
        raise ValueError(f"malformed subset spec {text!r}") from exc
    raise ValueError(f"unknown subset spec kind {kind!r}")
