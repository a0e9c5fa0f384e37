"""Unipotent groups U_{n+1}(Z/m), the quotient by the corner, and phi.

Matrices are indexed 1..n+1 in docstrings (matching a_{i,j}) but stored
0-based.  ``A`` and ``B`` are the images of x and y; ``phi_prime`` is the
ring evaluation X -> A - 1, Y -> B - 1 on Magnus series, and ``phi`` its
composite with the projection killing the (1, n+1) entry.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .coeffs import check_modulus, inv_mod, inverse_factorials, inverse_table
from .magnus import Series


class NotInV(ValueError):
    pass


class NotUnipotent(ValueError):
    pass


class UniMatrix:
    """Upper unitriangular (n+1) x (n+1) matrix over Z/m."""

    __slots__ = ("n", "m", "a")

    def __init__(self, n: int, m: int, entries):
        a = np.asarray(entries, dtype=np.int64) % m
        if a.shape != (n + 1, n + 1):
            raise NotUnipotent(f"shape {a.shape} != {(n + 1, n + 1)}")
        if np.tril(a, -1).any() or not (np.diagonal(a) == 1).all():
            raise NotUnipotent("matrix is not upper unitriangular")
        a.flags.writeable = False
        self.n, self.m, self.a = n, m, a

    @classmethod
    def _raw(cls, n, m, a):
        M = object.__new__(cls)
        a.flags.writeable = False
        M.n, M.m, M.a = n, m, a
        return M

    @classmethod
    def identity(cls, n: int, m: int) -> "UniMatrix":
        return cls._raw(n, m, np.eye(n + 1, dtype=np.int64))

    @classmethod
    def elementary(cls, n: int, m: int, i: int, j: int, c: int = 1) -> "UniMatrix":
        """1 + c E_{i,j} (1-based, i < j)."""
        a = np.eye(n + 1, dtype=np.int64)
        a[i - 1, j - 1] = c % m
        return cls._raw(n, m, a)

    def entry(self, i: int, j: int) -> int:
        """a_{i,j}, 1-based."""
        return int(self.a[i - 1, j - 1])

    def __mul__(self, other: "UniMatrix") -> "UniMatrix":
        if self.n != other.n or self.m != other.m:
            raise ValueError("size/modulus mismatch")
        return UniMatrix._raw(self.n, self.m, self.a @ other.a % self.m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniMatrix):
            return NotImplemented
        return self.n == other.n and self.m == other.m and np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash((self.n, self.m, self.a.tobytes()))

    def __repr__(self):
        rows = "; ".join(" ".join(str(int(v)) for v in r) for r in self.a)
        return f"UniMatrix(n={self.n}, m={self.m}: [{rows}])"

    def nilpotent(self) -> np.ndarray:
        return (self.a - np.eye(self.n + 1, dtype=np.int64)) % self.m

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "entries": [int(v) for v in self.a.ravel()]}

    @classmethod
    def from_json(cls, data: dict) -> "UniMatrix":
        n, m = int(data["n"]), int(data["m"])
        return cls(n, m, np.array(data["entries"], dtype=np.int64).reshape(n + 1, n + 1))


def _nil_series(N: np.ndarray, weights, m: int) -> np.ndarray:
    """sum_k weights[k] N^k for strictly upper triangular N."""
    size = N.shape[0]
    acc = np.zeros_like(N)
    term = np.eye(size, dtype=np.int64)
    for k in range(size):
        if k:
            term = term @ N % m
            if not term.any():
                break
        if weights[k]:
            acc = (acc + weights[k] * term) % m
    return acc


def mat_mul(M: UniMatrix, N: UniMatrix) -> UniMatrix:
    return M * N


def mat_inv(M: UniMatrix) -> UniMatrix:
    # (1 + N)^-1 = sum (-N)^k
    negN = (-M.nilpotent()) % M.m
    return UniMatrix._raw(M.n, M.m, _nil_series(negN, [1] * (M.n + 1), M.m))


def mat_log(M: UniMatrix) -> np.ndarray:
    n, m = M.n, M.m
    invs = inverse_table(n, m)
    weights = [0] + [invs[k] if k % 2 else (-invs[k]) % m for k in range(1, n + 1)]
    return _nil_series(M.nilpotent(), weights, m)


def mat_exp(L: np.ndarray, n: int, m: int) -> UniMatrix:
    return UniMatrix._raw(n, m, _nil_series(L % m, inverse_factorials(n, m), m))


def mat_power(M: UniMatrix, c: int) -> UniMatrix:
    """M^c = exp(c log M) for a residue exponent c."""
    check_modulus(M.m, M.n)
    return mat_exp(mat_log(M) * (c % M.m) % M.m, M.n, M.m)


def mat_commutator(M: UniMatrix, N: UniMatrix) -> UniMatrix:
    return M * N * mat_inv(M) * mat_inv(N)


@lru_cache(maxsize=None)
def _weight_matrix(n: int) -> np.ndarray:
    idx = np.arange(n + 1)
    return np.maximum(idx[None, :] - idx[:, None], 0)


def chi_act(c: int, M: UniMatrix) -> UniMatrix:
    """a_{ij}(gM) = chi(g)^(j-i) a_{ij}(M)."""
    m = M.m
    inv_mod(c, m)  # raises NotAUnit for a non-unit weight
    powers = np.array([pow(c, k, m) for k in range(M.n + 1)], dtype=np.int64)
    return UniMatrix._raw(M.n, m, M.a * powers[_weight_matrix(M.n)] % m)


def chi_act_nil(c: int, L: np.ndarray, n: int, m: int) -> np.ndarray:
    powers = np.array([pow(c, k, m) for k in range(n + 1)], dtype=np.int64)
    return L * powers[_weight_matrix(n)] % m


# -- the matrices A and B ------------------------------------------------------

@lru_cache(maxsize=None)
def build_A(n: int, m: int) -> UniMatrix:
    """a_{ij}(A) = 1/(j-i)! for 1 < i < j < n+1."""
    check_modulus(m, n)
    inv_fact = inverse_factorials(n, m)
    a = np.eye(n + 1, dtype=np.int64)
    for i in range(2, n + 1):
        for j in range(i + 1, n + 1):
            a[i - 1, j - 1] = inv_fact[j - i]
    return UniMatrix._raw(n, m, a)


@lru_cache(maxsize=None)
def build_B(n: int, m: int) -> UniMatrix:
    """B = 1 + E_{1,2} + E_{n,n+1}."""
    check_modulus(m, n)
    a = np.eye(n + 1, dtype=np.int64)
    a[0, 1] = 1
    a[n - 1, n] = 1
    return UniMatrix._raw(n, m, a)


# -- the quotient by the corner ---------------------------------------------------

class UniCoset:
    """Image of a UniMatrix in U_{n+1} / (1 + Z E_{1,n+1}).

    The representative has its (1, n+1) entry set to 0.
    """

    __slots__ = ("rep",)

    def __init__(self, M: UniMatrix):
        a = M.a.copy()
        a[0, M.n] = 0
        self.rep = UniMatrix._raw(M.n, M.m, a)

    @property
    def n(self):
        return self.rep.n

    @property
    def m(self):
        return self.rep.m

    def entry(self, i: int, j: int) -> int:
        if (i, j) == (1, self.n + 1):
            raise ValueError("a_{1,n+1} is not defined on the quotient")
        return self.rep.entry(i, j)

    def __mul__(self, other: "UniCoset") -> "UniCoset":
        return UniCoset(self.rep * other.rep)

    def inverse(self) -> "UniCoset":
        return UniCoset(mat_inv(self.rep))

    def act(self, c: int) -> "UniCoset":
        return UniCoset(chi_act(c, self.rep))

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniCoset):
            return NotImplemented
        return self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def __repr__(self):
        return f"UniCoset({self.rep!r})"


def project(M: UniMatrix) -> UniCoset:
    return UniCoset(M)


def same_coset(M: UniMatrix, N: UniMatrix) -> bool:
    return UniCoset(M) == UniCoset(N)


def satisfies_star(M: UniMatrix) -> bool:
    """a_{ij}(M) = 0 for 1 < i, j < n+1, i != j."""
    inner = M.nilpotent()[1:M.n, 1:M.n]
    return not inner.any()


def in_V(c: UniCoset | UniMatrix) -> bool:
    rep = c.rep if isinstance(c, UniCoset) else c
    return satisfies_star(rep)


# -- phi and phi' -------------------------------------------------------------------

@lru_cache(maxsize=None)
def _word_images(n: int, m: int, d: int) -> np.ndarray:
    """Stack of (A-1)^.. (B-1)^.. products for all words of length <= d."""
    NA = build_A(n, m).nilpotent()
    NB = build_B(n, m).nilpotent()
    mats = [np.eye(n + 1, dtype=np.int64)]
    prev = [mats[0]]
    for _ in range(d):
        cur = [N @ w % m for N in (NA, NB) for w in prev]
        mats.extend(cur)
        prev = cur
    out = np.stack(mats)
    out.flags.writeable = False
    return out


def phi_prime(g: Series, n: int | None = None) -> UniMatrix:
    """Ring evaluation of the Magnus series of g at X = A - 1, Y = B - 1.

    Words longer than n map to products of more than n strictly upper
    triangular matrices, which vanish, so the truncation of g is harmless
    as long as g.n >= n or the dropped degrees are irrelevant.
    """
    n = g.n if n is None else n
    imgs = _word_images(n, g.m, min(g.n, n))
    flat = np.concatenate(g.blocks[: min(g.n, n) + 1])
    a = np.tensordot(flat, imgs, axes=1) % g.m
    return UniMatrix._raw(n, g.m, a)


def phi(g: Series, n: int | None = None) -> UniCoset:
    return UniCoset(phi_prime(g, n))


def bracket_entry(C: UniMatrix) -> int:
    """a_{1,n+1}[B, C] = a_{2,n+1}(C) - a_{1,n}(C) for C with image in V.

    Also checks that [B, C] = 1 + (that value) E_{1,n+1}.
    """
    if not satisfies_star(C):
        raise NotInV("C does not map into V")
    n, m = C.n, C.m
    value = (C.entry(2, n + 1) - C.entry(1, n)) % m
    comm = mat_commutator(build_B(n, m), C)
    expected = UniMatrix.elementary(n, m, 1, n + 1, value)
    if comm != expected:
        raise AssertionError(f"[B, C] = {comm!r}, expected {expected!r}")
    return value
