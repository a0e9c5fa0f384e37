"""Inhomogeneous cochains of a finite group with values in Z/m(chi^k).

Also nonabelian 1-cocycles with values in the Magnus model of
pi/[pi]_level, acted on through an ActionSpec.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .coeffs import solve_linear_mod
from .groups import Coefficients
from .magnus import Series, dynkin_projection, inverse, letter_power, log

if TYPE_CHECKING:
    from .action import ActionSpec


class NotACocycle(ValueError):
    pass


class WeightMismatch(ValueError):
    pass


def _table(ctx: Coefficients) -> np.ndarray:
    return np.array(ctx.group.table, dtype=np.int64)


def _weights(ctx: Coefficients, k: int) -> np.ndarray:
    return np.array([ctx.weight(g, k) for g in ctx.group], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Cochain1:
    ctx: Coefficients
    weight: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64) % self.ctx.m
        if v.shape != (self.ctx.group.order,):
            raise ValueError(f"1-cochain needs {self.ctx.group.order} values")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def zero(cls, ctx: Coefficients, weight: int) -> "Cochain1":
        return cls(ctx, weight, np.zeros(ctx.group.order, dtype=np.int64))

    def __call__(self, g: int) -> int:
        return int(self.values[g])

    def _check(self, other):
        if self.ctx != other.ctx:
            raise ValueError("cochains over different coefficient data")
        if self.weight != other.weight:
            raise WeightMismatch(f"weights {self.weight} and {other.weight}")

    def __add__(self, other: "Cochain1") -> "Cochain1":
        self._check(other)
        return Cochain1(self.ctx, self.weight, self.values + other.values)

    def __sub__(self, other: "Cochain1") -> "Cochain1":
        self._check(other)
        return Cochain1(self.ctx, self.weight, self.values - other.values)

    def __neg__(self) -> "Cochain1":
        return Cochain1(self.ctx, self.weight, -self.values)

    def scale(self, c: int) -> "Cochain1":
        return Cochain1(self.ctx, self.weight, self.values * (c % self.ctx.m))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain1):
            return NotImplemented
        return self.ctx == other.ctx and self.weight == other.weight and np.array_equal(self.values, other.values)

    def is_zero(self) -> bool:
        return not self.values.any()

    def to_json(self) -> dict:
        return {"weight": self.weight, "values": [int(v) for v in self.values]}

    @classmethod
    def from_json(cls, ctx: Coefficients, data: dict) -> "Cochain1":
        return cls(ctx, int(data["weight"]), data["values"])


@dataclass(frozen=True, eq=False)
class Cochain2:
    ctx: Coefficients
    weight: int
    values: np.ndarray

    def __post_init__(self):
        d = self.ctx.group.order
        v = np.asarray(self.values, dtype=np.int64) % self.ctx.m
        if v.shape != (d, d):
            raise ValueError(f"2-cochain needs a {d}x{d} table")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def zero(cls, ctx: Coefficients, weight: int) -> "Cochain2":
        d = ctx.group.order
        return cls(ctx, weight, np.zeros((d, d), dtype=np.int64))

    def __call__(self, g: int, h: int) -> int:
        return int(self.values[g, h])

    def _check(self, other):
        if self.ctx != other.ctx:
            raise ValueError("cochains over different coefficient data")
        if self.weight != other.weight:
            raise WeightMismatch(f"weights {self.weight} and {other.weight}")

    def __add__(self, other: "Cochain2") -> "Cochain2":
        self._check(other)
        return Cochain2(self.ctx, self.weight, self.values + other.values)

    def __sub__(self, other: "Cochain2") -> "Cochain2":
        self._check(other)
        return Cochain2(self.ctx, self.weight, self.values - other.values)

    def __neg__(self) -> "Cochain2":
        return Cochain2(self.ctx, self.weight, -self.values)

    def scale(self, c: int) -> "Cochain2":
        return Cochain2(self.ctx, self.weight, self.values * (c % self.ctx.m))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain2):
            return NotImplemented
        return self.ctx == other.ctx and self.weight == other.weight and np.array_equal(self.values, other.values)

    def is_zero(self) -> bool:
        return not self.values.any()

    def to_json(self) -> dict:
        return {"weight": self.weight, "values": [int(v) for v in self.values.ravel()]}

    @classmethod
    def from_json(cls, ctx: Coefficients, data: dict) -> "Cochain2":
        d = ctx.group.order
        return cls(ctx, int(data["weight"]), np.array(data["values"], dtype=np.int64).reshape(d, d))


def d1(a: Cochain1) -> Cochain2:
    """(Da)(g, h) = chi^k(g) a(h) - a(gh) + a(g)."""
    T = _table(a.ctx)
    w = _weights(a.ctx, a.weight)
    v = a.values
    return Cochain2(a.ctx, a.weight, w[:, None] * v[None, :] - v[T] + v[:, None])


def d2(c: Cochain2) -> np.ndarray:
    """(Dc)(g, h, k) = chi^w(g) c(h, k) - c(gh, k) + c(g, hk) - c(g, h)."""
    T = _table(c.ctx)
    w = _weights(c.ctx, c.weight)
    v = c.values
    d = c.ctx.group.order
    g = np.arange(d)[:, None, None]
    out = w[:, None, None] * v[None, :, :] - v[T] + v[g, T[None, :, :]] - v[:, :, None]
    return out % c.ctx.m


def is_cocycle1(a: Cochain1) -> bool:
    return d1(a).is_zero()


def is_cocycle2(c: Cochain2) -> bool:
    return not d2(c).any()


def cup(a: Cochain1, b: Cochain1) -> Cochain2:
    """(a u b)(g, h) = a(g) chi(g)^{wt b} b(h); weights add."""
    if a.ctx != b.ctx:
        raise ValueError("cochains over different coefficient data")
    w = _weights(a.ctx, b.weight)
    return Cochain2(a.ctx, a.weight + b.weight, (a.values * w)[:, None] * b.values[None, :])


def _d1_matrix(ctx: Coefficients, weight: int) -> list[list[int]]:
    d = ctx.group.order
    rows = []
    for g in range(d):
        wg = ctx.weight(g, weight)
        for h in range(d):
            row = [0] * d
            row[h] += wg
            row[ctx.group.mul(g, h)] -= 1
            row[g] += 1
            rows.append(row)
    return rows


def solve_coboundary(ctx: Coefficients, weight: int, target: np.ndarray) -> np.ndarray | None:
    """Some b with Db = target (a d x d table), or None."""
    sol = solve_linear_mod(_d1_matrix(ctx, weight), [int(v) for v in np.ravel(target)], ctx.m)
    return None if sol is None else np.array(sol, dtype=np.int64)


def is_coboundary(c: Cochain2) -> Cochain1 | None:
    if not is_cocycle2(c):
        raise NotACocycle("input 2-cochain is not a cocycle")
    if c.is_zero():
        return Cochain1.zero(c.ctx, c.weight)
    b = solve_coboundary(c.ctx, c.weight, c.values)
    return None if b is None else Cochain1(c.ctx, c.weight, b)


def is_coboundary1(a: Cochain1) -> int | None:
    """Some c in Z/m with a(g) = chi(g)^k c - c for all g, or None."""
    if not is_cocycle1(a):
        raise NotACocycle("input 1-cochain is not a cocycle")
    rows = [[(a.ctx.weight(g, a.weight) - 1) % a.ctx.m] for g in a.ctx.group]
    sol = solve_linear_mod(rows, [int(v) for v in a.values], a.ctx.m)
    return None if sol is None else sol[0]


def classes_equal1(a: Cochain1, b: Cochain1) -> bool:
    return is_coboundary1(a - b) is not None


def classes_equal(c1: Cochain2, c2: Cochain2) -> bool:
    return is_coboundary(c1 - c2) is not None


def class_token(c: Cochain2) -> str:
    """Short description of a class: '0' when c is a coboundary."""
    return "0" if is_coboundary(c) is not None else "nonzero"


# -- Lie-valued 2-cochains ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class LieCochain2:
    """2-cochain with values in degree-k homogeneous Lie elements.

    values[g, h] is the degree-k block (length 2**k); each word coordinate
    is an ordinary 2-cochain of weight k.
    """

    ctx: Coefficients
    degree: int
    values: np.ndarray

    def __post_init__(self):
        d = self.ctx.group.order
        v = np.asarray(self.values, dtype=np.int64) % self.ctx.m
        if v.shape != (d, d, 1 << self.degree):
            raise ValueError("bad Lie 2-cochain shape")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def coordinate(self, code: int) -> Cochain2:
        return Cochain2(self.ctx, self.degree, self.values[:, :, code])

    def __sub__(self, other: "LieCochain2") -> "LieCochain2":
        return LieCochain2(self.ctx, self.degree, self.values - other.values)

    def __add__(self, other: "LieCochain2") -> "LieCochain2":
        return LieCochain2(self.ctx, self.degree, self.values + other.values)

    def is_cocycle(self) -> bool:
        return all(is_cocycle2(self.coordinate(c)) for c in range(1 << self.degree))

    def is_lie_valued(self) -> bool:
        k, m = self.degree, self.ctx.m
        d = self.ctx.group.order
        return all(
            np.array_equal(dynkin_projection(self.values[g, h], k, m), self.values[g, h])
            for g in range(d)
            for h in range(d)
        )


def lie_coboundary(c: LieCochain2) -> np.ndarray | None:
    """A Lie-valued 1-cochain b (shape (d, 2**k)) with Db = c, or None.

    Solves coordinatewise, then applies the Dynkin projection, which commutes
    with D because g acts on the degree-k part by the scalar chi(g)^k.
    """
    if not c.is_cocycle():
        raise NotACocycle("Lie 2-cochain is not a cocycle")
    d, k, m = c.ctx.group.order, c.degree, c.ctx.m
    b = np.zeros((d, 1 << k), dtype=np.int64)
    for code in range(1 << k):
        col = c.values[:, :, code]
        if not col.any():
            continue
        sol = solve_coboundary(c.ctx, k, col)
        if sol is None:
            return None
        b[:, code] = sol
    for g in range(d):
        b[g] = dynkin_projection(b[g], k, m)
    return b


def lie_classes_equal(c1: LieCochain2, c2: LieCochain2) -> bool:
    return lie_coboundary(c1 - c2) is not None


# -- nonabelian cocycles ----------------------------------------------------

class NACocycle:
    """g -> q(g) in pi/[pi]_level with q(gh) = q(g) (g q(h)).

    Values are grouplike series of truncation degree level - 1.
    """

    def __init__(self, spec: "ActionSpec", level: int, values: Sequence[Series]):
        if len(values) != spec.group.order:
            raise ValueError("one value per group element required")
        if not 2 <= level <= spec.n + 1:
            raise ValueError(f"level {level} outside 2..{spec.n + 1}")
        for v in values:
            if v.n != level - 1 or v.m != spec.m:
                raise ValueError("cocycle value has the wrong truncation or modulus")
        self.spec = spec
        self.level = level
        self.values = tuple(values)

    def __call__(self, g: int) -> Series:
        return self.values[g]

    def __eq__(self, other) -> bool:
        if not isinstance(other, NACocycle):
            return NotImplemented
        return self.spec is other.spec and self.level == other.level and self.values == other.values

    def failures(self) -> list[tuple[int, int]]:
        """Pairs (g, h) where the twisted cocycle law fails."""
        G = self.spec.group
        bad = []
        for g in G:
            for h in G:
                lhs = self.values[G.mul(g, h)]
                rhs = self.values[g] * self.spec.act(g, self.values[h])
                if lhs != rhs:
                    bad.append((g, h))
        return bad

    def is_valid(self) -> bool:
        return not self.failures()

    def truncate(self, level: int) -> "NACocycle":
        return NACocycle(self.spec, level, [v.truncate(level - 1) for v in self.values])

    def ab_cochains(self) -> tuple[Cochain1, Cochain1]:
        """(p_x, p_y): the X and Y coefficients, as weight-1 cochains."""
        ctx = self.spec.coefficients
        px = [v["X"] for v in self.values]
        py = [v["Y"] for v in self.values]
        return Cochain1(ctx, 1, px), Cochain1(ctx, 1, py)

    def to_json(self) -> dict:
        return {"level": self.level, "values": [v.to_json() for v in self.values]}


def na_twist(q: NACocycle, beta: Series) -> NACocycle:
    """g -> beta^-1 q(g) (g beta)."""
    beta = beta.truncate(q.level - 1) if beta.n > q.level - 1 else beta
    binv = inverse(beta)
    vals = [binv * q(g) * q.spec.act(g, beta) for g in q.spec.group]
    return NACocycle(q.spec, q.level, vals)


def principal_cocycle(spec: "ActionSpec", beta: Series, level: int) -> NACocycle:
    """g -> beta^-1 (g beta), the twist of the trivial cocycle."""
    beta = beta.truncate(level - 1)
    binv = inverse(beta)
    return NACocycle(spec, level, [binv * spec.act(g, beta) for g in spec.group])


def x_power_cocycle(spec: "ActionSpec", t: Cochain1, level: int) -> NACocycle:
    """g -> x^{t(g)} for a weight-1 cocycle t."""
    if t.weight != 1:
        raise WeightMismatch("x-power cocycles need a weight-1 cochain")
    if not is_cocycle1(t):
        raise NotACocycle("t is not a cocycle")
    return NACocycle(spec, level, [letter_power("X", t(g), level - 1, spec.m) for g in spec.group])


def trivial_cocycle(spec: "ActionSpec", level: int) -> NACocycle:
    return NACocycle(spec, level, [Series.one(level - 1, spec.m)] * spec.group.order)


def lie_part(g: Series, k: int) -> np.ndarray:
    """Degree-k block of log g."""
    return log(g).blocks[k]
