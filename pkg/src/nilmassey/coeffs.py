"""Exact arithmetic in Z/m, CRT splitting and linear solving over Z/p^a.

The rings used throughout are Z/m with gcd(m, n!) = 1, so that every
denominator up to n! can be inverted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

# numpy int64 kernels accumulate sums of up to 2**13 products of residues
MAX_MODULUS = 1 << 24


class NotAUnit(ArithmeticError):
    pass


class ModulusError(ValueError):
    pass


def factorize(m: int) -> list[tuple[int, int]]:
    """Trial-division factorization; m is small in every use here."""
    if m < 1:
        raise ModulusError(f"modulus must be positive, got {m}")
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            out.append((p, a))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


@dataclass(frozen=True)
class Modulus:
    m: int
    factorization: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, m: int, n: int | None = None) -> "Modulus":
        """Build a modulus, optionally checking gcd(m, n!) = 1."""
        if n is not None:
            check_modulus(m, n)
        return _modulus(m)

    @property
    def prime_powers(self) -> list[int]:
        return [p**a for p, a in self.factorization]

    def __int__(self) -> int:
        return self.m


@lru_cache(maxsize=None)
def _modulus(m: int) -> Modulus:
    if m < 2 or m >= MAX_MODULUS:
        raise ModulusError(f"modulus {m} outside supported range [2, {MAX_MODULUS})")
    return Modulus(m, tuple(factorize(m)))


def check_modulus(m: int, n: int) -> None:
    """Raise ModulusError unless 2 <= m < MAX_MODULUS and gcd(m, n!) = 1."""
    if m < 2 or m >= MAX_MODULUS:
        raise ModulusError(f"modulus {m} outside supported range [2, {MAX_MODULUS})")
    if math.gcd(m, math.factorial(n)) != 1:
        raise ModulusError(f"gcd({m}, {n}!) != 1")


def inv_mod(a: int, m: int) -> int:
    a %= m
    if math.gcd(a, m) != 1:
        raise NotAUnit(f"{a} is not a unit mod {m}")
    return pow(a, -1, m)


@lru_cache(maxsize=None)
def inverse_table(n: int, m: int) -> tuple[int, ...]:
    """(0, 1/1, 1/2, ..., 1/n) mod m."""
    return (0,) + tuple(inv_mod(k, m) for k in range(1, n + 1))


@lru_cache(maxsize=None)
def inverse_factorials(n: int, m: int) -> tuple[int, ...]:
    """(1/0!, 1/1!, ..., 1/n!) mod m."""
    return tuple(inv_mod(math.factorial(k), m) for k in range(n + 1))


def binomial_mod(c: int, k: int, m: int) -> int:
    """C(c, k) for a residue c, evaluated as c(c-1)...(c-k+1)/k! in Z/m."""
    num = 1
    for i in range(k):
        num = num * (c - i) % m
    return num * inv_mod(math.factorial(k), m) % m


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: Modulus

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus.m)

    @classmethod
    def of(cls, value: int, m: int) -> "Residue":
        return cls(value, _modulus(m))

    def _check(self, other: "Residue") -> None:
        if self.modulus.m != other.modulus.m:
            raise ModulusError(f"modulus mismatch: {self.modulus.m} vs {other.modulus.m}")

    def __add__(self, other):
        return residue_arith(self, other, "add")

    def __sub__(self, other):
        return residue_arith(self, other, "sub")

    def __mul__(self, other):
        return residue_arith(self, other, "mul")

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __int__(self):
        return self.value


def residue_arith(a: Residue, b: Residue, op: str) -> Residue:
    a._check(b)
    if op == "add":
        v = a.value + b.value
    elif op == "sub":
        v = a.value - b.value
    elif op == "mul":
        v = a.value * b.value
    else:
        raise ValueError(f"unknown op {op!r}")
    return Residue(v, a.modulus)


def residue_inv(a: Residue) -> Residue:
    return Residue(inv_mod(a.value, a.modulus.m), a.modulus)


# -- CRT -------------------------------------------------------------------

def crt_split(x: int, m: int) -> list[int]:
    """Images of x in Z/p^a for each prime power p^a || m."""
    return [x % q for q in _modulus(m).prime_powers]


def crt_join(parts: list[int], m: int) -> int:
    x, acc = 0, 1
    for r, q in zip(parts, _modulus(m).prime_powers):
        # x = x + acc * t with x + acc*t = r mod q
        t = (r - x) * pow(acc, -1, q) % q
        x += acc * t
        acc *= q
    return x % m


# -- linear systems ----------------------------------------------------------

def _valuation(x: int, p: int, a: int) -> int:
    if x == 0:
        return a
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def solve_linear(A: list[list[int]], b: list[int], p: int, a: int) -> list[int] | None:
    """Solve A x = b over Z/p^a, or return None when no solution exists.

    Diagonalizes A by row and column operations, always pivoting on an entry
    of least p-adic valuation, so every elimination step is exact.
    """
    q = p**a
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if len(b) != rows or any(len(r) != cols for r in A):
        raise ValueError("dimension mismatch")
    M = [[x % q for x in r] for r in A]
    rhs = [x % q for x in b]
    # x = Q y, Q accumulates column operations
    Q = [[int(i == j) for j in range(cols)] for i in range(cols)]
    diag = []
    for k in range(min(rows, cols)):
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                if M[i][j]:
                    v = _valuation(M[i][j], p, a)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, pi, pj = best
        M[k], M[pi] = M[pi], M[k]
        rhs[k], rhs[pi] = rhs[pi], rhs[k]
        if pj != k:
            for r in M:
                r[k], r[pj] = r[pj], r[k]
            for r in Q:
                r[k], r[pj] = r[pj], r[k]
        # pivot = u * p^v with u a unit; scale row to make pivot p^v
        u_inv = pow(M[k][k] // p**v, -1, q)
        M[k] = [x * u_inv % q for x in M[k]]
        rhs[k] = rhs[k] * u_inv % q
        pv = p**v
        for i in range(rows):
            if i != k and M[i][k]:
                t = M[i][k] // pv
                M[i] = [(x - t * y) % q for x, y in zip(M[i], M[k])]
                rhs[i] = (rhs[i] - t * rhs[k]) % q
        for j in range(k + 1, cols):
            if M[k][j]:
                t = M[k][j] // pv
                for r in M:
                    r[j] = (r[j] - t * r[k]) % q
                for r in Q:
                    r[j] = (r[j] - t * r[k]) % q
        diag.append(v)
    y = [0] * cols
    for k, v in enumerate(diag):
        if rhs[k] % p**v:
            return None
        y[k] = (rhs[k] // p**v) % q
    for i in range(len(diag), rows):
        if rhs[i]:
            return None
    return [sum(Q[i][j] * y[j] for j in range(cols)) % q for i in range(cols)]


def solve_linear_mod(A: list[list[int]], b: list[int], m: int) -> list[int] | None:
    """Solve A x = b over Z/m by CRT into prime-power factors."""
    cols = len(A[0]) if A else 0
    parts = []
    for p, a in _modulus(m).factorization:
        x = solve_linear(A, b, p, a)
        if x is None:
            return None
        parts.append(x)
    return [crt_join([xs[i] for xs in parts], m) for i in range(cols)]
