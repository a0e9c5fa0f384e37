"""Finite groups given by multiplication tables, and characters into (Z/m)^*."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd


class GroupTableError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    """Group on {0, ..., d-1}; ``table[g][h]`` is the index of gh."""

    table: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        d = len(self.table)
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", table)
        if d == 0 or any(len(r) != d for r in table):
            raise GroupTableError("multiplication table must be square and nonempty")
        if any(not 0 <= v < d for r in table for v in r):
            raise GroupTableError("table entries out of range")
        e = self.identity
        for g in range(d):
            for h in range(d):
                for k in range(d):
                    if table[table[g][h]][k] != table[g][table[h][k]]:
                        raise GroupTableError(f"not associative at ({g}, {h}, {k})")
        if any(table[g][self.inverse[g]] != e for g in range(d)):
            raise GroupTableError("missing inverses")

    @classmethod
    def cyclic(cls, d: int) -> "FiniteGroup":
        """Z/d with element j standing for sigma^j."""
        return cls(tuple(tuple((i + j) % d for j in range(d)) for i in range(d)), name=f"Z/{d}")

    @classmethod
    def product(cls, a: "FiniteGroup", b: "FiniteGroup") -> "FiniteGroup":
        """a x b with (i, j) stored as i * |b| + j."""
        nb = b.order
        table = tuple(
            tuple(a.table[g // nb][h // nb] * nb + b.table[g % nb][h % nb] for h in range(a.order * nb))
            for g in range(a.order * nb)
        )
        return cls(table, name=f"{a.name}x{b.name}")

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(range(self.order))

    @cached_property
    def identity(self) -> int:
        d = len(self.table)
        for e in range(d):
            if all(self.table[e][g] == g and self.table[g][e] == g for g in range(d)):
                return e
        raise GroupTableError("no identity element")

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        d = len(self.table)
        e = self.identity
        out = []
        for g in range(d):
            hs = [h for h in range(d) if self.table[g][h] == e]
            if not hs:
                raise GroupTableError(f"element {g} has no inverse")
            out.append(hs[0])
        return tuple(out)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.table[x][g]
            k += 1
        return k

    def to_json(self) -> dict:
        return {"order": self.order, "table": [list(r) for r in self.table]}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroup":
        table = data["table"]
        if len(table) != int(data.get("order", len(table))):
            raise GroupTableError("order does not match table size")
        return cls(tuple(tuple(r) for r in table))


def character_failures(group: FiniteGroup, chi, m: int) -> list[str]:
    """Violations of: chi(g) a unit, chi(e) = 1, chi(g) chi(h) = chi(gh)."""
    out = []
    if len(chi) != group.order:
        return [f"character has {len(chi)} values for a group of order {group.order}"]
    for g in group:
        if gcd(chi[g] % m, m) != 1:
            out.append(f"chi({g}) = {chi[g]} is not a unit mod {m}")
    if chi[group.identity] % m != 1:
        out.append(f"chi(e) = {chi[group.identity]} != 1")
    for g in group:
        for h in group:
            if chi[g] * chi[h] % m != chi[group.mul(g, h)] % m:
                out.append(f"chi({g}) chi({h}) != chi({group.mul(g, h)})")
                break
    return out


@dataclass(frozen=True)
class Coefficients:
    """The coefficient data Z/m(chi) shared by all cochains over one group.

    A cochain of weight k sees g act by multiplication by chi(g)^k.
    """

    group: FiniteGroup
    chi: tuple[int, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "chi", tuple(int(c) % self.m for c in self.chi))

    def weight(self, g: int, k: int) -> int:
        return pow(self.chi[g], k, self.m)
