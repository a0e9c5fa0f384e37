"""Defining systems for n-fold Massey products of weight-1 classes.

A defining system is a triangular array Z[i, j] (1 <= i < j <= n+1, the
corner (1, n+1) excluded) of 1-cochains, Z[i, j] of weight j - i, with

    D Z[i, j] = sum_{i<r<j} Z[i, r] u Z[r, j].

Its value is the 2-cocycle sum_{r=2}^{n} Z[1, r] u Z[r, n+1].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .action import ValidationReport
from .cohomology import Cochain1, Cochain2, NotACocycle, classes_equal1, cup, d1, is_cocycle1, is_cocycle2
from .groups import Coefficients
from .unipotent import UniCoset


class InvalidDefiningSystem(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("; ".join(f["message"] for f in report.failures[:5]))
        self.report = report


class NotATwistedCocycle(ValueError):
    pass


def positions(n: int) -> list[tuple[int, int]]:
    """All (i, j) with 1 <= i < j <= n+1 except the corner."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 2) if (i, j) != (1, n + 1)]


@dataclass(frozen=True, eq=False)
class DefiningSystem:
    n: int
    ctx: Coefficients
    entries: dict
    inputs: tuple | None = field(default=None)

    def __post_init__(self):
        want = set(positions(self.n))
        if set(self.entries) != want:
            missing = sorted(want - set(self.entries))
            extra = sorted(set(self.entries) - want)
            raise ValueError(f"entries mismatch: missing {missing}, unexpected {extra}")
        for (i, j), z in self.entries.items():
            if z.weight != j - i:
                raise ValueError(f"Z[{i},{j}] has weight {z.weight}, expected {j - i}")
            if z.ctx != self.ctx:
                raise ValueError(f"Z[{i},{j}] lives over different coefficients")
        if self.inputs is not None and len(self.inputs) != self.n:
            raise ValueError("need one input class per factor")

    def __getitem__(self, ij: tuple[int, int]) -> Cochain1:
        return self.entries[ij]

    def replace(self, ij: tuple[int, int], z: Cochain1) -> "DefiningSystem":
        entries = dict(self.entries)
        entries[ij] = z
        return DefiningSystem(self.n, self.ctx, entries, self.inputs)

    def to_json(self) -> dict:
        return {"n": self.n, "entries": {f"{i},{j}": z.to_json() for (i, j), z in sorted(self.entries.items())}}

    @classmethod
    def from_json(cls, ctx: Coefficients, data: dict) -> "DefiningSystem":
        entries = {}
        for key, z in data["entries"].items():
            i, j = (int(t) for t in key.split(","))
            entries[(i, j)] = Cochain1.from_json(ctx, z)
        return cls(int(data["n"]), ctx, entries)


def zero_system(n: int, ctx: Coefficients) -> DefiningSystem:
    return DefiningSystem(n, ctx, {(i, j): Cochain1.zero(ctx, j - i) for i, j in positions(n)})


def _boundary_target(ds: DefiningSystem, i: int, j: int) -> Cochain2:
    acc = Cochain2.zero(ds.ctx, j - i)
    for r in range(i + 1, j):
        acc = acc + cup(ds[i, r], ds[r, j])
    return acc


def validate_defining_system(ds: DefiningSystem) -> ValidationReport:
    """Check every entry; failures carry (i, j) and, where relevant, (g, h)."""
    rep = ValidationReport()
    n = ds.n
    for i in range(1, n + 1):
        z = ds[i, i + 1]
        bad = np.argwhere(d1(z).values)
        if len(bad):
            g, h = (int(t) for t in bad[0])
            rep.add("cocycle", f"Z[{i},{i + 1}] is not a cocycle", i=i, j=i + 1, g=g, h=h)
        elif ds.inputs is not None and not classes_equal1(z, ds.inputs[i - 1]):
            rep.add("input", f"Z[{i},{i + 1}] does not represent input {i}", i=i, j=i + 1)
    for i, j in positions(n):
        if j == i + 1:
            continue
        diff = d1(ds[i, j]) - _boundary_target(ds, i, j)
        bad = np.argwhere(diff.values)
        if len(bad):
            g, h = (int(t) for t in bad[0])
            rep.add("boundary", f"D Z[{i},{j}] != sum Z[{i},r] u Z[r,{j}] at ({g},{h})", i=i, j=j, g=g, h=h)
    return rep


def require_valid(ds: DefiningSystem) -> DefiningSystem:
    rep = validate_defining_system(ds)
    if not rep.ok:
        raise InvalidDefiningSystem(rep)
    return ds


def massey_value(ds: DefiningSystem, check: bool = True) -> Cochain2:
    if check:
        require_valid(ds)
    n = ds.n
    acc = Cochain2.zero(ds.ctx, n)
    for r in range(2, n + 1):
        acc = acc + cup(ds[1, r], ds[r, n + 1])
    # holds for every valid system; a failure here is a bug, not bad input
    assert is_cocycle2(acc), "Massey value is not a 2-cocycle"
    return acc


def theta_failures(theta: Sequence[UniCoset], ctx: Coefficients) -> list[tuple[int, int]]:
    """Pairs where theta(gh) != theta(g) (g theta(h)) in the quotient."""
    G = ctx.group
    return [
        (g, h)
        for g in G
        for h in G
        if theta[G.mul(g, h)] != theta[g] * theta[h].act(ctx.chi[g])
    ]


def from_theta(theta: Sequence[UniCoset], ctx: Coefficients, check: bool = True) -> DefiningSystem:
    """The system Z[i, j] = -a_{i,j} o theta."""
    if len(theta) != ctx.group.order:
        raise ValueError("theta needs one value per group element")
    n = theta[0].n
    if check:
        bad = theta_failures(theta, ctx)
        if bad:
            raise NotATwistedCocycle(f"theta fails the cocycle law at {bad[0]}")
    entries = {
        (i, j): Cochain1(ctx, j - i, [-t.entry(i, j) for t in theta])
        for i, j in positions(n)
    }
    return DefiningSystem(n, ctx, entries)


def modify_for_zero(ds: DefiningSystem, f: Cochain1) -> DefiningSystem:
    """Replace Z[1, n] by Z[1, n] + f for a cocycle f of weight n-1.

    The value changes by exactly f u Z[n, n+1].
    """
    n = ds.n
    if f.weight != n - 1:
        raise ValueError(f"f must have weight {n - 1}")
    if not is_cocycle1(f):
        raise NotACocycle("f is not a cocycle")
    return ds.replace((1, n), ds[1, n] + f)
