"""Truncated noncommutative power series in X, Y over Z/m.

The free nilpotent quotient pi/[pi]_{n+1} is modelled by its Magnus image:
grouplike series of degree <= n, with generators x = 1 + X and y = 1 + Y.
Since n! is invertible mod m, such series are exactly exp of Lie series,
which gives exact powers by residues and canonical sections.

A series of degree d is stored as d + 1 numpy blocks; block k has length
2**k and is indexed by the word's binary code (X = 0, Y = 1, first letter
most significant).
"""
from __future__ import annotations

import json
from functools import lru_cache

import numpy as np

from .coeffs import binomial_mod, check_modulus, inverse_factorials, inverse_table

LETTERS = "XY"
MAX_DEGREE = 12
# dense word-by-word substitution matrices above this degree get too large
DENSE_SUBSTITUTION_DEGREE = 9


class NotGrouplike(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


def word_code(word: str) -> int:
    code = 0
    for ch in word:
        code = 2 * code + LETTERS.index(ch)
    return code


def code_word(code: int, k: int) -> str:
    return "".join(LETTERS[(code >> (k - 1 - i)) & 1] for i in range(k))


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class Series:
    """Element of Z/m<<X, Y>> truncated above degree n.

    Values are immutable; arithmetic returns new series.
    """

    __slots__ = ("n", "m", "blocks")

    def __init__(self, n: int, m: int, blocks):
        if len(blocks) != n + 1:
            raise DegreeMismatch(f"expected {n + 1} blocks, got {len(blocks)}")
        self.n = n
        self.m = m
        self.blocks = tuple(_frozen(np.asarray(b, dtype=np.int64) % m) for b in blocks)

    # -- construction ------------------------------------------------------

    @classmethod
    def _raw(cls, n, m, blocks):
        # blocks already reduced, int64 and owned by the new object
        s = object.__new__(cls)
        s.n, s.m = n, m
        s.blocks = tuple(_frozen(b) for b in blocks)
        return s

    @classmethod
    def zero(cls, n: int, m: int) -> "Series":
        return cls._raw(n, m, [np.zeros(1 << k, dtype=np.int64) for k in range(n + 1)])

    @classmethod
    def one(cls, n: int, m: int) -> "Series":
        blocks = [np.zeros(1 << k, dtype=np.int64) for k in range(n + 1)]
        blocks[0][0] = 1
        return cls._raw(n, m, blocks)

    @classmethod
    def from_dict(cls, n: int, m: int, coeffs: dict[str, int]) -> "Series":
        blocks = [np.zeros(1 << k, dtype=np.int64) for k in range(n + 1)]
        for word, value in coeffs.items():
            if len(word) > n:
                raise DegreeMismatch(f"word {word!r} longer than truncation degree {n}")
            blocks[len(word)][word_code(word)] += value
        return cls(n, m, blocks)

    def to_dict(self) -> dict[str, int]:
        out = {}
        for k, b in enumerate(self.blocks):
            for code in np.flatnonzero(b):
                out[code_word(int(code), k)] = int(b[code])
        return out

    def __getitem__(self, word: str) -> int:
        if len(word) > self.n:
            return 0
        return int(self.blocks[len(word)][word_code(word)])

    # -- ring structure ----------------------------------------------------

    def _check(self, other: "Series") -> None:
        if self.n != other.n or self.m != other.m:
            raise DegreeMismatch(
                f"(n={self.n}, m={self.m}) vs (n={other.n}, m={other.m})"
            )

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        return Series._raw(self.n, self.m, [(a + b) % self.m for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other: "Series") -> "Series":
        self._check(other)
        return Series._raw(self.n, self.m, [(a - b) % self.m for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self) -> "Series":
        return Series._raw(self.n, self.m, [(-a) % self.m for a in self.blocks])

    def scale(self, c: int) -> "Series":
        return Series._raw(self.n, self.m, [a * (c % self.m) % self.m for a in self.blocks])

    def __mul__(self, other: "Series") -> "Series":
        self._check(other)
        return Series._raw(self.n, self.m, _mul_blocks(self.blocks, other.blocks, self.n, self.m))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and all(np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks))
        )

    def __hash__(self):
        return hash((self.n, self.m, self.key()))

    def key(self) -> bytes:
        return b"".join(b.tobytes() for b in self.blocks)

    def __repr__(self):
        terms = [f"{v}*{w or '1'}" for w, v in sorted(self.to_dict().items(), key=lambda t: (len(t[0]), t[0]))]
        return f"Series(n={self.n}, m={self.m}: {' + '.join(terms) or '0'})"

    @property
    def constant(self) -> int:
        return int(self.blocks[0][0])

    def is_zero(self) -> bool:
        return not any(b.any() for b in self.blocks)

    def degree_part(self, k: int) -> np.ndarray:
        return self.blocks[k]

    def homogeneous(self, k: int) -> "Series":
        """The degree-k component as a series of the same truncation."""
        blocks = [np.zeros(1 << j, dtype=np.int64) for j in range(self.n + 1)]
        blocks[k] = self.blocks[k].copy()
        return Series._raw(self.n, self.m, blocks)

    def truncate(self, d: int) -> "Series":
        """Drop degrees above d (result has truncation degree d)."""
        if d > self.n:
            raise DegreeMismatch(f"cannot truncate degree {self.n} series to {d}")
        return Series._raw(d, self.m, [b.copy() for b in self.blocks[: d + 1]])

    def extend(self, d: int) -> "Series":
        """Zero-pad to truncation degree d >= n."""
        if d < self.n:
            raise DegreeMismatch(f"cannot extend degree {self.n} series to {d}")
        blocks = [b.copy() for b in self.blocks]
        blocks += [np.zeros(1 << k, dtype=np.int64) for k in range(self.n + 1, d + 1)]
        return Series._raw(d, self.m, blocks)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        items = sorted(self.to_dict().items(), key=lambda t: (len(t[0]), t[0]))
        return {"n": self.n, "m": self.m, "coeffs": [{"word": w, "value": v} for w, v in items]}

    @classmethod
    def from_json(cls, data: dict) -> "Series":
        coeffs: dict[str, int] = {}
        for item in data["coeffs"]:
            word = item["word"]
            if set(word) - set(LETTERS):
                raise ValueError(f"bad word {word!r}")
            coeffs[word] = coeffs.get(word, 0) + int(item["value"])
        return cls.from_dict(int(data["n"]), int(data["m"]), coeffs)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _mul_blocks(a, b, n, m):
    out = []
    for k in range(n + 1):
        acc = np.zeros(1 << k, dtype=np.int64)
        for i in range(k + 1):
            ai, bj = a[i], b[k - i]
            if 0 < i < k and not (ai.any() and bj.any()):
                continue
            if i == 0:
                acc += ai[0] * bj
            elif i == k:
                acc += ai * bj[0]
            else:
                acc += np.outer(ai, bj).ravel()
        out.append(acc % m)
    return out


def _check_params(n: int, m: int) -> None:
    if not 0 <= n <= MAX_DEGREE:
        raise DegreeMismatch(f"truncation degree {n} outside 0..{MAX_DEGREE}")
    check_modulus(m, n)


# -- generators --------------------------------------------------------------

def gen_x(n: int, m: int) -> Series:
    _check_params(n, m)
    return Series.from_dict(n, m, {"": 1, "X": 1})


def gen_y(n: int, m: int) -> Series:
    _check_params(n, m)
    return Series.from_dict(n, m, {"": 1, "Y": 1})


def letter_power(letter: str, c: int, n: int, m: int) -> Series:
    """(1 + L)^c = sum_k C(c, k) L^k for a residue exponent c."""
    coeffs = {letter * k: binomial_mod(c, k, m) for k in range(n + 1)}
    return Series.from_dict(n, m, coeffs)


# -- exp / log ---------------------------------------------------------------

def _powers_sum(u: Series, weights) -> Series:
    """sum_k weights[k] * u**k for u with zero constant term."""
    n, m = u.n, u.m
    acc = Series.zero(n, m)
    term = Series.one(n, m)
    for k in range(n + 1):
        if k:
            term = term * u
        if weights[k]:
            acc = acc + term.scale(weights[k])
    return acc


def exp(ell: Series) -> Series:
    if ell.constant:
        raise ValueError("exp needs a series with zero constant term")
    return _powers_sum(ell, inverse_factorials(ell.n, ell.m))


def log(g: Series) -> Series:
    if g.constant != 1:
        raise NotGrouplike(f"constant term {g.constant} != 1")
    n, m = g.n, g.m
    invs = inverse_table(n, m)
    weights = [0] + [invs[k] if k % 2 else (-invs[k]) % m for k in range(1, n + 1)]
    return _powers_sum(g - Series.one(n, m), weights)


def inverse(g: Series) -> Series:
    """Inverse of a series with constant term 1.

    Degree by degree from g h = 1: h_k = -sum_{i=1..k} g_i h_{k-i}.
    """
    if g.constant != 1:
        raise NotGrouplike(f"constant term {g.constant} != 1")
    n, m = g.n, g.m
    a = g.blocks
    h = [np.ones(1, dtype=np.int64)]
    for k in range(1, n + 1):
        acc = a[k].copy()
        for i in range(1, k):
            if a[i].any():
                acc += np.outer(a[i], h[k - i]).ravel()
        h.append(-acc % m)
    return Series._raw(n, m, h)


def group_commutator(a: Series, b: Series) -> Series:
    """[a, b] = a b a^-1 b^-1."""
    return a * b * inverse(a) * inverse(b)


def group_power(g: Series, c: int) -> Series:
    return exp(log(g).scale(c))


def conjugate(g: Series, by: Series) -> Series:
    """by^-1 g by."""
    return inverse(by) * g * by


# -- lower central series -----------------------------------------------------

def lcs_degree(g: Series) -> int:
    """Largest k with g in [pi]_k, i.e. first nonzero positive degree."""
    for k in range(1, g.n + 1):
        if g.blocks[k].any():
            return k
    return g.n + 1


def truncate_to_level(g: Series, level: int) -> Series:
    """Image in pi/[pi]_level: drop degrees >= level."""
    if level < 1 or level > g.n + 1:
        raise DegreeMismatch(f"level {level} outside 1..{g.n + 1}")
    return g.truncate(level - 1)


def canonical_section(g: Series) -> Series:
    """Lift from level n+1 to level n+2 by zero-padding the logarithm.

    The padding happens in exponential coordinates (where log g is a Lie
    series); padding log g directly in Magnus coordinates would leave the
    group, e.g. exp(X) is not a lift of x = 1 + X.
    """
    check_modulus(g.m, g.n + 1)
    ell = log(to_exp_coords(g)).extend(g.n + 1)
    return from_exp_coords(exp(ell))


def magnus_coefficient(word: str, g: Series) -> int:
    return g[word]


def abelianize(g: Series) -> tuple[int, int]:
    return g["X"], g["Y"]


# -- Lie elements ------------------------------------------------------------

def dynkin_block(v: np.ndarray, k: int, m: int) -> np.ndarray:
    """Left-normed bracketing a1...ak -> [..[a1, a2], ..., ak] on a degree-k block."""
    if k <= 1:
        return v.copy() % m
    half = 1 << (k - 1)
    pairs = v.reshape(half, 2)
    out = np.zeros(1 << k, dtype=np.int64)
    for a in (0, 1):
        d = dynkin_block(pairs[:, a], k - 1, m)
        # right multiplication by letter a, minus left multiplication
        out[a::2] += d
        out[a * half:(a + 1) * half] -= d
    return out % m


def dynkin_projection(v: np.ndarray, k: int, m: int) -> np.ndarray:
    """Idempotent projection of a degree-k block onto Lie elements."""
    if k == 0:
        return np.zeros(1, dtype=np.int64)
    return dynkin_block(v, k, m) * inverse_table(k, m)[k] % m


def is_lie(s: Series) -> bool:
    """Dynkin criterion: each degree-k part satisfies D(l_k) = k l_k."""
    if s.constant:
        return False
    return all(
        np.array_equal(dynkin_block(s.blocks[k], k, s.m), s.blocks[k] * k % s.m)
        for k in range(1, s.n + 1)
    )


def is_grouplike(g: Series) -> bool:
    """Whether g lies in the Magnus image of the free nilpotent group."""
    return g.constant == 1 and is_lie(log(to_exp_coords(g)))


def lie_bracket(a: Series, b: Series) -> Series:
    return a * b - b * a


def lie_generator(letter: str, n: int, m: int) -> Series:
    return Series.from_dict(n, m, {letter: 1})


def random_lie(n: int, m: int, rng: np.random.Generator, min_degree: int = 1, max_degree: int | None = None) -> Series:
    """Uniform random Lie series with components in degrees min..max."""
    top = n if max_degree is None else max_degree
    blocks = [np.zeros(1 << k, dtype=np.int64) for k in range(n + 1)]
    for k in range(max(min_degree, 1), top + 1):
        v = rng.integers(0, m, size=1 << k, dtype=np.int64)
        blocks[k] = dynkin_projection(v, k, m)
    return Series._raw(n, m, blocks)


def random_grouplike(n: int, m: int, rng: np.random.Generator, min_degree: int = 1) -> Series:
    """Random element of [pi]_min_degree (uniform in exponential coordinates)."""
    return from_exp_coords(exp(random_lie(n, m, rng, min_degree)))


# -- substitutions -------------------------------------------------------------

@lru_cache(maxsize=None)
def _word_count(d: int) -> int:
    return (1 << (d + 1)) - 1


class Substitution:
    """Continuous ring endomorphism with X -> img_x - 1, Y -> img_y - 1.

    On grouplike series this is the group endomorphism sending the
    generators to img_x and img_y.  The map is linear, so for each input
    degree d a dense matrix over all words of length <= d is built once.
    """

    def __init__(self, img_x: Series, img_y: Series):
        img_x._check(img_y)
        if img_x.constant != 1 or img_y.constant != 1:
            raise NotGrouplike("substitution images must have constant term 1")
        self.n, self.m = img_x.n, img_x.m
        self.img_x, self.img_y = img_x, img_y
        self._mats: dict[int, np.ndarray] = {}

    def _matrix(self, d: int) -> np.ndarray:
        mat = self._mats.get(d)
        if mat is not None:
            return mat
        m = self.m
        ux = (self.img_x.truncate(d) - Series.one(d, m))
        uy = (self.img_y.truncate(d) - Series.one(d, m))
        dim = _word_count(d)
        mat = np.zeros((dim, dim), dtype=np.int64)
        # images of words, degree by degree: img(a w) = U_a img(w)
        prev = [Series.one(d, m)]
        col = 0
        mat[:, col] = _flatten(prev[0])
        col += 1
        for k in range(1, d + 1):
            cur = []
            for a_img in (ux, uy):
                for w_img in prev:
                    cur.append(a_img * w_img)
            # cur ordered as X-prefixed words then Y-prefixed, matching codes
            for s in cur:
                mat[:, col] = _flatten(s)
                col += 1
            prev = cur
        self._mats[d] = mat
        return mat

    def __call__(self, s: Series) -> Series:
        if s.m != self.m or s.n > self.n:
            raise DegreeMismatch("series incompatible with substitution")
        if s.n > DENSE_SUBSTITUTION_DEGREE:
            return self._horner(s)
        mat = self._matrix(s.n)
        flat = mat @ _flatten(s) % self.m
        return _unflatten(flat, s.n, self.m)

    def _horner(self, s: Series) -> Series:
        # T(s) = s_0 + U_X T(d_X s) + U_Y T(d_Y s), d_a strips a leading letter
        d, m = s.n, self.m
        out = Series.zero(d, m) + Series.one(d, m).scale(s.constant)
        if d == 0:
            return out
        for a, img in enumerate((self.img_x, self.img_y)):
            tail = []
            for k in range(d):
                blk = s.blocks[k + 1]
                half = 1 << k
                tail.append(blk[a * half:(a + 1) * half].copy())
            t = self._horner(Series._raw(d - 1, m, tail)).extend(d)
            out = out + (img.truncate(d) - Series.one(d, m)) * t
        return out


def substitution_endo(img_x: Series, img_y: Series) -> Substitution:
    return Substitution(img_x, img_y)


def _flatten(s: Series) -> np.ndarray:
    return np.concatenate(s.blocks)


def _unflatten(flat: np.ndarray, n: int, m: int) -> Series:
    blocks = []
    pos = 0
    for k in range(n + 1):
        blocks.append(np.array(flat[pos:pos + (1 << k)], dtype=np.int64))
        pos += 1 << k
    return Series._raw(n, m, blocks)


# -- exponential coordinates ---------------------------------------------------
#
# The group generated by 1 + X and 1 + Y is the image of exp(Lie series)
# under the ring automorphism X -> log(1 + X), Y -> log(1 + Y), which sends
# e^X to 1 + X.  Its inverse is X -> e^X - 1.

@lru_cache(maxsize=None)
def _coordinate_change(n: int, m: int, forward: bool) -> Substitution:
    if forward:
        ix, iy = lie_generator("X", n, m), lie_generator("Y", n, m)
        return Substitution(exp(ix), exp(iy))
    one = Series.one(n, m)
    return Substitution(one + log(gen_x(n, m)), one + log(gen_y(n, m)))


def to_exp_coords(g: Series) -> Series:
    """Apply X -> e^X - 1; maps Magnus group elements to exp(Lie)."""
    return _coordinate_change(g.n, g.m, True)(g)


def from_exp_coords(g: Series) -> Series:
    """Apply X -> log(1 + X); maps exp(Lie) into the Magnus group."""
    return _coordinate_change(g.n, g.m, False)(g)
