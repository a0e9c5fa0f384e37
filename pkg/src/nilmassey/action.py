"""Synthetic group actions on the free nilpotent model.

An ActionSpec fixes a finite group G, a character chi: G -> (Z/m)^* and a
table frak_f: G -> [pi]_2, and lets g act by

    g(x) = x^chi(g),    g(y) = frak_f(g)^-1 y^chi(g) frak_f(g).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coeffs import check_modulus
from .cohomology import Cochain1, NotACocycle, d1
from .groups import Coefficients, FiniteGroup, character_failures
from .magnus import (
    Series,
    Substitution,
    gen_x,
    gen_y,
    inverse,
    is_grouplike,
    lcs_degree,
    letter_power,
)
from .unipotent import phi


class BadCharacter(ValueError):
    pass


class InvalidAction(ValueError):
    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(f["message"] for f in report.failures[:5]))
        self.report = report


@dataclass
class ValidationReport:
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, check: str, message: str, **witness) -> None:
        self.failures.append({"check": check, "message": message, "witness": witness})

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": self.failures}


class ActionSpec:
    def __init__(self, n: int, m: int, group: FiniteGroup, chi, frak_f):
        check_modulus(m, n)
        self.n, self.m = n, m
        self.group = group
        self.chi = tuple(int(c) % m for c in chi)
        self.frak_f = tuple(frak_f)
        if len(self.chi) != group.order or len(self.frak_f) != group.order:
            raise ValueError("chi and frak_f need one entry per group element")
        for f in self.frak_f:
            if f.n != n or f.m != m:
                raise ValueError("frak_f values must have truncation degree n and modulus m")
        self._subs: dict[int, Substitution] = {}

    @property
    def coefficients(self) -> Coefficients:
        return Coefficients(self.group, self.chi, self.m)

    def images(self, g: int) -> tuple[Series, Series]:
        c = self.chi[g]
        img_x = letter_power("X", c, self.n, self.m)
        f = self.frak_f[g]
        img_y = inverse(f) * letter_power("Y", c, self.n, self.m) * f
        return img_x, img_y

    def substitution(self, g: int) -> Substitution:
        sub = self._subs.get(g)
        if sub is None:
            sub = self._subs[g] = Substitution(*self.images(g))
        return sub

    def act(self, g: int, w: Series) -> Series:
        return self.substitution(g)(w)

    def with_values(self, chi=None, frak_f=None) -> "ActionSpec":
        return ActionSpec(
            self.n,
            self.m,
            self.group,
            self.chi if chi is None else chi,
            self.frak_f if frak_f is None else frak_f,
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "group": self.group.to_json(),
            "chi": list(self.chi),
            "frak_f": [f.to_json() for f in self.frak_f],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ActionSpec":
        if "cyclic" in data:
            cyc = data["cyclic"]
            n, m = int(data["n"]), int(data["m"])
            if "value" in cyc:
                v = _fit(Series.from_json(cyc["value"]), n)
                return cyclic_action_from_value(int(cyc["d"]), int(cyc["c"]), v, n, m)
            gamma = _fit(Series.from_json(cyc["gamma"]), n) if "gamma" in cyc else Series.one(n, m)
            return make_cyclic_action(int(cyc["d"]), int(cyc["c"]), gamma, n, m)
        group = FiniteGroup.from_json(data["group"])
        frak_f = [Series.from_json(f) for f in data["frak_f"]]
        return cls(int(data["n"]), int(data["m"]), group, data["chi"], frak_f)


def _fit(s: Series, n: int) -> Series:
    return s.extend(n) if s.n < n else s.truncate(n)


def apply_action(spec: ActionSpec, g: int, w: Series) -> Series:
    return spec.act(g, w)


def validate_action(spec: ActionSpec) -> ValidationReport:
    """Exhaustive check of the character, degree, cocycle and action laws."""
    rep = ValidationReport()
    G = spec.group
    for msg in character_failures(G, spec.chi, spec.m):
        rep.add("character", msg)
    for g in G:
        f = spec.frak_f[g]
        if f.constant != 1 or not is_grouplike(f):
            rep.add("grouplike", f"frak_f({g}) is not grouplike", g=g)
        elif lcs_degree(f) < 2:
            rep.add("degree", f"frak_f({g}) not in [pi]_2", g=g)
    e = G.identity
    if spec.frak_f[e] != Series.one(spec.n, spec.m):
        rep.add("identity", "frak_f(e) != 1", g=e)
    if not rep.ok:
        # the remaining checks assume grouplike values and a unit character
        return rep
    for g in G:
        for h in G:
            gh = G.mul(g, h)
            if spec.frak_f[gh] != spec.frak_f[g] * spec.act(g, spec.frak_f[h]):
                rep.add("cocycle", f"frak_f({gh}) != frak_f({g}) g(frak_f({h}))", g=g, h=h)
    x, y = gen_x(spec.n, spec.m), gen_y(spec.n, spec.m)
    for g in G:
        for h in G:
            gh = G.mul(g, h)
            for name, w in (("x", x), ("y", y)):
                if spec.act(g, spec.act(h, w)) != spec.act(gh, w):
                    rep.add("action", f"g(h({name})) != (gh)({name})", g=g, h=h, generator=name)
    return rep


def require_valid(spec: ActionSpec) -> ActionSpec:
    rep = validate_action(spec)
    if not rep.ok:
        raise InvalidAction(rep)
    return spec


def trivial_action(group: FiniteGroup, n: int, m: int) -> ActionSpec:
    one = Series.one(n, m)
    return ActionSpec(n, m, group, [1] * group.order, [one] * group.order)


def make_cyclic_action(d: int, c: int, gamma: Series, n: int, m: int) -> ActionSpec:
    """Z/d acting with chi(sigma) = c and frak_f(sigma) = gamma^-1 sigma(gamma).

    sigma itself depends on frak_f(sigma), so the value is found as the fixed
    point of v -> gamma^-1 sigma_v(gamma).  Since gamma lies in [pi]_2, a
    change of v in degree k moves sigma_v(gamma) only in degrees > k, so the
    iteration stabilizes after at most n steps.
    """
    check_modulus(m, n)
    c %= m
    if pow(c, d, m) != 1:
        raise BadCharacter(f"{c}^{d} != 1 mod {m}")
    if gamma.n != n or gamma.m != m:
        raise ValueError("gamma must have truncation degree n and modulus m")
    if lcs_degree(gamma) < 2:
        raise ValueError("gamma must lie in [pi]_2")
    one = Series.one(n, m)
    gamma_inv = inverse(gamma)

    def sigma(v: Series) -> Substitution:
        img_x = letter_power("X", c, n, m)
        img_y = inverse(v) * letter_power("Y", c, n, m) * v
        return Substitution(img_x, img_y)

    v = one
    for _ in range(n + 1):
        nxt = gamma_inv * sigma(v)(gamma)
        if nxt == v:
            break
        v = nxt
    else:
        raise AssertionError("fixed-point iteration for frak_f did not stabilize")
    return cyclic_action_from_value(d, c, v, n, m)


def cyclic_action_from_value(d: int, c: int, v: Series, n: int, m: int, check: bool = True) -> ActionSpec:
    """Z/d with chi(sigma) = c and frak_f(sigma) = v, extended by the cocycle law.

    Only valid when the resulting sigma has order dividing d; with check=True
    an InvalidAction is raised otherwise.
    """
    check_modulus(m, n)
    c %= m
    if pow(c, d, m) != 1:
        raise BadCharacter(f"{c}^{d} != 1 mod {m}")
    if v.n != n or v.m != m:
        raise ValueError("frak_f(sigma) must have truncation degree n and modulus m")
    one = Series.one(n, m)
    act = Substitution(letter_power("X", c, n, m), inverse(v) * letter_power("Y", c, n, m) * v)
    frak_f = [one]
    for _ in range(1, d):
        frak_f.append(v * act(frak_f[-1]))
    spec = ActionSpec(n, m, FiniteGroup.cyclic(d), [pow(c, j, m) for j in range(d)], frak_f)
    return require_valid(spec) if check else spec


def f_cochain(spec: ActionSpec, check: bool = True) -> Cochain1:
    """g -> a_{2,n+1}(phi(frak_f(g))) - a_{1,n}(phi(frak_f(g))), weight n-1."""
    n, m = spec.n, spec.m
    vals = []
    for f in spec.frak_f:
        C = phi(f)
        vals.append(C.entry(2, n + 1) - C.entry(1, n))
    f = Cochain1(spec.coefficients, n - 1, np.array(vals, dtype=np.int64))
    if check and not d1(f).is_zero():
        raise NotACocycle("f is not a cocycle")
    return f
