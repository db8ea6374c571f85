"""Exact arithmetic in F_p and F_{p^n}.

Elements of F_p are plain ints in [0, p); elements of F_{p^n} are length-n
tuples of ints (coefficients on the power basis of a fixed irreducible
modulus, lowest degree first).  Field objects carry the modulus and the
shared lookup tables; all operations are pure, so a field instance can be
used from any number of workers once built.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

# Deterministic Miller-Rabin witnesses, valid for all n < 3.3 * 10**14.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17)


def is_prime(n: int) -> bool:
    """Deterministic primality test for machine-word sized n."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17):
        if n == q:
            return True
        if n % q == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division (n is desk-scale)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def inverse_table(p: int) -> np.ndarray:
    """int64 array t with t[x]*x = 1 mod p for x in [1, p); t[0] = 0."""
    t = np.zeros(p, dtype=np.int64)
    if p > 1:
        t[1] = 1
    for i in range(2, p):
        t[i] = (p - (p // i) * t[p % i]) % p
    return t


class PrimeField:
    """The prime field F_p for an odd prime p >= 3."""

    def __init__(self, p: int):
        if p < 3 or p % 2 == 0 or not is_prime(p):
            raise ValueError(f"p must be an odd prime >= 3, got {p}")
        self.p = p
        self.n = 1
        self.order = p
        self.zero = 0
        self.one = 1
        self._inv_table: np.ndarray | None = None
        self._primitive_root: int | None = None
        self._dlog: np.ndarray | None = None

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    # -- arithmetic on int residues ------------------------------------
    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def pow(self, a: int, e: int) -> int:
        # pow(0, 0) = 1: empty product convention.
        if e < 0:
            raise ValueError("exponent must be nonnegative")
        return pow(a, e, self.p)

    def is_zero(self, a: int) -> bool:
        return a % self.p == 0

    def elements(self) -> Iterator[int]:
        """All residues in the fixed order 0, 1, ..., p-1."""
        return iter(range(self.p))

    # -- shared tables ---------------------------------------------------
    def inv_table(self) -> np.ndarray:
        if self._inv_table is None:
            self._inv_table = inverse_table(self.p)
        return self._inv_table

    def primitive_root(self) -> int:
        """Smallest generator of F_p* (order exactly p-1)."""
        if self._primitive_root is None:
            p = self.p
            factors = prime_factors(p - 1)
            g = 2
            while True:
                if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
                    self._primitive_root = g
                    break
                g += 1
        return self._primitive_root

    def dlog_table(self) -> np.ndarray:
        """int64 array L with g**L[x] = x for x in F_p*; L[0] = -1."""
        if self._dlog is None:
            p, g = self.p, self.primitive_root()
            L = np.full(p, -1, dtype=np.int64)
            acc = 1
            for e in range(p - 1):
                L[acc] = e
                acc = acc * g % p
            self._dlog = L
        return self._dlog


def _poly_mul_mod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    """Product of coefficient lists reduced by the monic modulus."""
    n = len(mod) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    for i in range(len(out) - 1, n - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(n):
                out[i - n + j] = (out[i - n + j] - c * mod[j]) % p
    return [x % p for x in out[:n]] + [0] * max(0, n - len(out))


def _poly_pow_x_mod(e: int, mod: list[int], p: int) -> list[int]:
    """X**e reduced by the monic modulus, by binary exponentiation."""
    n = len(mod) - 1
    result = [1] + [0] * (n - 1)
    base = ([0, 1] + [0] * (n - 2))[:n] if n >= 2 else [_x % p for _x in [-mod[0]]]
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, mod, p)
        base = _poly_mul_mod(base, base, mod, p)
        e >>= 1
    return result


def _is_irreducible(coeffs: list[int], p: int) -> bool:
    """Rabin test for a monic polynomial over F_p (degree >= 1)."""
    n = len(coeffs) - 1
    if n == 1:
        return True
    # X^(p^n) == X mod f
    xq = _poly_pow_x_mod(p**n, coeffs, p)
    if xq != [0, 1] + [0] * (n - 2):
        return False
    from . import poly as _poly  # deferred: poly imports nothing from here

    for r in prime_factors(n):
        t = _poly_pow_x_mod(p ** (n // r), coeffs, p)
        t = [(a - b) % p for a, b in zip(t, [0, 1] + [0] * (n - 2))]
        g = _poly.gcd(_poly.strip(t), _poly.strip(list(coeffs)), PrimeField(p))
        if _poly.degree(g) != 0:
            return False
    return True


def find_irreducible(p: int, n: int) -> list[int]:
    """Deterministic monic irreducible of degree n over F_p.

    Scans monic candidates X^n + c_{n-1}X^{n-1} + ... + c_0 in increasing
    order of the integer c_{n-1}*p^(n-1) + ... + c_0 and returns the first
    irreducible one, so repeated runs always pick the same modulus.
    """
    if n < 1:
        raise ValueError("extension degree must be >= 1")
    if n == 1:
        return [0, 1]
    for m in range(p**n):
        coeffs = [(m // p ** (n - 1 - i)) % p for i in range(n)]
        coeffs.reverse()  # c_0 is the least significant digit of m
        cand = coeffs + [1]
        if _is_irreducible(cand, p):
            return cand
    raise RuntimeError("unreachable: irreducible polynomials always exist")


class ExtField:
    """F_{p^n} presented on the power basis of a monic irreducible modulus.

    Elements are length-n tuples of ints.  For desk-scale q = p^n the field
    also exposes flat index tables (element index = sum c_i * p^i) used by
    the vectorized enumeration code.
    """

    def __init__(self, p: int, n: int, modulus: list[int] | None = None):
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        self.base = PrimeField(p)
        self.p = p
        self.n = n
        self.order = p**n
        if modulus is None:
            modulus = find_irreducible(p, n)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree n")
        if n > 1 and not _is_irreducible([c % p for c in modulus], p):
            raise ValueError("modulus is reducible over F_p")
        self.modulus = [c % p for c in modulus]
        self.zero = (0,) * n
        self.one = tuple([1] + [0] * (n - 1))
        self._inv_idx: np.ndarray | None = None
        self._trace_idx: np.ndarray | None = None

    def __repr__(self) -> str:
        return f"ExtField(p={self.p}, n={self.n}, modulus={self.modulus})"

    def _check(self, a: tuple) -> tuple:
        if len(a) != self.n:
            raise ValueError("element does not belong to this field")
        return a

    # -- arithmetic on coefficient tuples --------------------------------
    def add(self, a: tuple, b: tuple) -> tuple:
        self._check(a), self._check(b)
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: tuple, b: tuple) -> tuple:
        self._check(a), self._check(b)
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: tuple) -> tuple:
        p = self.p
        return tuple(-x % p for x in self._check(a))

    def mul(self, a: tuple, b: tuple) -> tuple:
        self._check(a), self._check(b)
        return tuple(_poly_mul_mod(list(a), list(b), self.modulus, self.p))

    def pow(self, a: tuple, e: int) -> tuple:
        if e < 0:
            raise ValueError("exponent must be nonnegative")
        result, base = self.one, self._check(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: tuple) -> tuple:
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.order - 2)

    def is_zero(self, a: tuple) -> bool:
        return all(x % self.p == 0 for x in self._check(a))

    def embed(self, c: int) -> tuple:
        """Image of the base-field residue c."""
        return tuple([c % self.p] + [0] * (self.n - 1))

    def trace(self, x: tuple) -> int:
        """Trace down to F_p: x + x^p + ... + x^(p^(n-1)).

        The result always lies in the base field and is returned as an int.
        """
        acc = self._check(x)
        t = x
        for _ in range(self.n - 1):
            t = self.pow(t, self.p)
            acc = self.add(acc, t)
        if any(acc[1:]):
            raise ArithmeticError("trace left the base field")
        return acc[0]

    # -- flat element indexing -------------------------------------------
    def to_index(self, a: tuple) -> int:
        idx = 0
        for c in reversed(self._check(a)):
            idx = idx * self.p + c % self.p
        return idx

    def from_index(self, idx: int) -> tuple:
        out = []
        for _ in range(self.n):
            out.append(idx % self.p)
            idx //= self.p
        return tuple(out)

    def elements(self) -> Iterator[tuple]:
        """All q elements in increasing flat-index order."""
        return (self.from_index(i) for i in range(self.order))

    def inv_index_table(self) -> np.ndarray:
        """int64 array t with element(t[i]) = element(i)^-1; t[0] = 0."""
        if self._inv_idx is None:
            t = np.zeros(self.order, dtype=np.int64)
            for i in range(1, self.order):
                t[i] = self.to_index(self.inv(self.from_index(i)))
            self._inv_idx = t
        return self._inv_idx

    def trace_index_table(self) -> np.ndarray:
        """int64 array of traces indexed by flat element index."""
        if self._trace_idx is None:
            t = np.zeros(self.order, dtype=np.int64)
            for i in range(self.order):
                t[i] = self.trace(self.from_index(i))
            self._trace_idx = t
        return self._trace_idx

    # vectorized index arithmetic (used by the enumeration passes) --------
    def idx_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p, n = self.p, self.n
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        mult = 1
        for _ in range(n):
            out += ((a // mult + b // mult) % p) * mult
            mult *= p
        return out

    def idx_sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p, n = self.p, self.n
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        mult = 1
        for _ in range(n):
            out += ((a // mult - b // mult) % p) * mult
            mult *= p
        return out

    def idx_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Flat-index product via coefficient convolution and reduction."""
        p, n = self.p, self.n
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        ca = [(a // p**i) % p for i in range(n)]
        cb = [(b // p**i) % p for i in range(n)]
        conv = [np.zeros(np.broadcast(a, b).shape, dtype=np.int64) for _ in range(2 * n - 1)]
        for i in range(n):
            for j in range(n):
                conv[i + j] = (conv[i + j] + ca[i] * cb[j]) % p
        # fold degrees >= n using the precomputed rows X^(n+j) mod modulus
        red = self._reduction_rows()
        for i in range(2 * n - 2, n - 1, -1):
            c = conv[i]
            for j in range(n):
                conv[j] = (conv[j] + c * red[i - n][j]) % p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        mult = 1
        for i in range(n):
            out += conv[i] * mult
            mult *= p
        return out

    def _reduction_rows(self) -> list[list[int]]:
        # row j = coefficients of X^(n+j) mod modulus
        rows = []
        cur = [(-c) % self.p for c in self.modulus[:-1]]
        rows.append(list(cur))
        for _ in range(self.n - 2):
            top = cur[-1]
            cur = [0] + cur[:-1]
            for i in range(self.n):
                cur[i] = (cur[i] + top * rows[0][i]) % self.p
            rows.append(list(cur))
        return rows


def trace(field: ExtField, x: tuple) -> int:
    """Module-level alias for ExtField.trace."""
    return field.trace(x)
