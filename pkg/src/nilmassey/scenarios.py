"""Scenario files and the randomized scenario generator.

A scenario is an action together with a recipe for a cocycle q' at level
n+1.  Recipes:

    {"x_power": [t(g), ...]}         g -> x^t(g), t a weight-1 cocycle
    {"principal": beta}              g -> beta^-1 (g beta)
    {"twist": [recipe, beta]}        recipe twisted by beta
    {"abelian": [tx, ty]}            g -> x^tx(g) y^ty(g) at level 2 only,
                                     tx, ty weight-1 cocycles
    {"lift_chain": recipe}           recipe evaluated at level 2, then lifted
                                     one level at a time by lift_step
    {"unlifted": recipe}             recipe evaluated at level n (for the
                                     obstruction identity without a lift)
    {"values": [series, ...]}        explicit values; their truncation degree
                                     fixes the level (n for unlifted use)

beta is Series JSON of any truncation; it is cut to the level needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial, gcd

import numpy as np

from .action import ActionSpec, cyclic_action_from_value, make_cyclic_action, validate_action
from .cohomology import Cochain1, NACocycle, is_cocycle1, na_twist, principal_cocycle, x_power_cocycle
from .magnus import Series, exp, from_exp_coords, gen_x, gen_y, group_commutator, inverse, random_grouplike, random_lie
from .obstruction import lift_step

SCENARIO_VERSION = "1"
PROFILES = ("default", "nontrivial-h2")


class ScenarioError(ValueError):
    """Parse or validation failure; carries the scenario id and JSON path."""

    def __init__(self, message: str, scenario: str = "", path: str = ""):
        super().__init__(f"{scenario or '?'} at {path or '$'}: {message}")
        self.scenario, self.path, self.message = scenario, path, message


class NotLiftable(ValueError):
    pass


@dataclass
class Scenario:
    id: str
    spec: ActionSpec
    recipe: dict
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def m(self) -> int:
        return self.spec.m

    def to_json(self) -> dict:
        out = {"id": self.id, "n": self.n, "m": self.m, "action": self.spec.to_json(), "cocycle": self.recipe}
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def _beta(data, level: int, m: int) -> Series:
    b = Series.from_json(data)
    if b.m != m:
        raise ValueError(f"beta has modulus {b.m}, expected {m}")
    return b.truncate(level - 1) if b.n >= level - 1 else b.extend(level - 1)


def build_cocycle(spec: ActionSpec, recipe: dict, level: int) -> NACocycle:
    """Evaluate a recipe at the given level."""
    if not isinstance(recipe, dict) or len(recipe) != 1:
        raise ValueError("a recipe is a one-key object")
    (kind, arg), = recipe.items()
    if kind == "x_power":
        t = Cochain1(spec.coefficients, 1, arg)
        return x_power_cocycle(spec, t, level)
    if kind == "abelian":
        if level != 2:
            raise ValueError("abelian recipes live at level 2; wrap them in lift_chain")
        tx, ty = (Cochain1(spec.coefficients, 1, t) for t in arg)
        if not (is_cocycle1(tx) and is_cocycle1(ty)):
            raise ValueError("abelian recipe needs weight-1 cocycles")
        return NACocycle(spec, 2, [Series(1, spec.m, [np.array([1]), np.array([tx(g), ty(g)])]) for g in spec.group])
    if kind == "principal":
        return principal_cocycle(spec, _beta(arg, level, spec.m), level)
    if kind == "twist":
        inner, beta = arg
        return na_twist(build_cocycle(spec, inner, level), _beta(beta, level, spec.m))
    if kind == "lift_chain":
        q = build_cocycle(spec, arg, 2)
        while q.level < level:
            nxt = lift_step(q)
            if nxt is None:
                raise NotLiftable(f"obstruction at level {q.level}")
            q = nxt
        return q
    if kind == "values":
        vals = [Series.from_json(v) for v in arg]
        if not vals or any(v.m != spec.m or v.n != vals[0].n for v in vals):
            raise ValueError("values need a common truncation degree and modulus")
        return NACocycle(spec, vals[0].n + 1, vals)
    if kind == "unlifted":
        return build_cocycle(spec, arg, min(level, spec.n))
    raise ValueError(f"unknown recipe kind {kind!r}")


def scenario_cocycle(sc: Scenario) -> NACocycle:
    """q' at level n+1, or p at level n for "unlifted" and level-n "values" recipes."""
    q = build_cocycle(sc.spec, sc.recipe, sc.n + 1)
    if q.level not in (sc.n, sc.n + 1):
        raise ValueError(f"cocycle lives at level {q.level}; expected {sc.n} or {sc.n + 1}")
    return q


def parse_scenario(data: dict, index: int = 0) -> Scenario:
    sid = str(data.get("id", f"#{index}"))
    base = f"$.scenarios[{index}]"
    for key in ("n", "m", "action", "cocycle"):
        if key not in data:
            raise ScenarioError(f"missing field {key!r}", sid, base)
    try:
        n, m = int(data["n"]), int(data["m"])
    except (TypeError, ValueError) as e:
        raise ScenarioError(str(e), sid, base)
    action = dict(data["action"])
    action.setdefault("n", n)
    action.setdefault("m", m)
    try:
        spec = ActionSpec.from_json(action)
    except (ValueError, KeyError, TypeError, ArithmeticError) as e:
        raise ScenarioError(str(e), sid, f"{base}.action")
    if spec.n != n or spec.m != m:
        raise ScenarioError("action n/m differ from the scenario's", sid, f"{base}.action")
    rep = validate_action(spec)
    if not rep.ok:
        raise ScenarioError("; ".join(f["message"] for f in rep.failures[:3]), sid, f"{base}.action")
    return Scenario(sid, spec, data["cocycle"], data.get("seed"))


def parse_scenario_file(data: dict) -> list[Scenario]:
    if not isinstance(data, dict) or "scenarios" not in data:
        raise ScenarioError("expected an object with a 'scenarios' list")
    out, seen = [], set()
    for i, item in enumerate(data["scenarios"]):
        sc = parse_scenario(item, i)
        if sc.id in seen:
            raise ScenarioError("duplicate id", sc.id, f"$.scenarios[{i}].id")
        seen.add(sc.id)
        out.append(sc)
    return out


# -- random generation ------------------------------------------------------------

DEFAULT_ORDERS = (2, 3, 4, 5)
DEFAULT_MODULI = (25, 49, 121, 125)
DEFAULT_NS = (3, 4, 5)


def admissible(m: int, n: int) -> bool:
    return gcd(m, factorial(n)) == 1


def roots_of_unity(d: int, m: int) -> list[int]:
    return [c for c in range(1, m) if gcd(c, m) == 1 and pow(c, d, m) == 1]


def random_commutator_word(n: int, m: int, rng: np.random.Generator, length: int = 3) -> Series:
    """Product of a few iterated commutators of generator powers; lies in [pi]_2."""
    gens = [gen_x(n, m), gen_y(n, m)]
    out = Series.one(n, m)
    for _ in range(int(rng.integers(1, length + 1))):
        a = gens[int(rng.integers(2))]
        b = gens[int(rng.integers(2))]
        if a is b:
            b = gens[1] if a is gens[0] else gens[0]
        w = group_commutator(a, b)
        for _ in range(int(rng.integers(0, 2))):
            w = group_commutator(w, gens[int(rng.integers(2))])
        if rng.integers(2):
            w = inverse(w)
        out = out * w
    return out


def random_weight1_cocycle(spec: ActionSpec, rng: np.random.Generator) -> list[int]:
    """t(sigma^j) = (1 + c + ... + c^{j-1}) t1 with the norm condition on t1."""
    d, m = spec.group.order, spec.m
    c = spec.chi[1] if d > 1 else 1
    norm = sum(pow(c, i, m) for i in range(d)) % m
    step = m // gcd(norm, m)
    t1 = int(rng.integers(0, m)) * step % m
    vals = [sum(pow(c, i, m) for i in range(j)) * t1 % m for j in range(d)]
    assert is_cocycle1(Cochain1(spec.coefficients, 1, vals))
    return vals


def random_recipe(spec: ActionSpec, rng: np.random.Generator, level: int) -> dict:
    kind = ("x_power", "principal", "twist", "lift_chain", "abelian")[int(rng.integers(5))]
    n, m = spec.n, spec.m
    if kind == "x_power":
        return {"x_power": random_weight1_cocycle(spec, rng)}
    if kind == "principal":
        return {"principal": Series.to_json(random_grouplike(n, m, rng))}
    if kind == "twist":
        return {"twist": [{"x_power": random_weight1_cocycle(spec, rng)}, Series.to_json(random_grouplike(n, m, rng))]}
    if kind == "abelian":
        return {"lift_chain": {"abelian": [random_weight1_cocycle(spec, rng), random_weight1_cocycle(spec, rng)]}}
    inner = {"twist": [{"x_power": random_weight1_cocycle(spec, rng)}, Series.to_json(random_grouplike(n, m, rng))]}
    return {"lift_chain": inner}


def _default_scenario(rng: np.random.Generator, sid: str, seed: int) -> Scenario:
    while True:
        m = int(rng.choice(DEFAULT_MODULI))
        n = int(rng.choice(DEFAULT_NS))
        if admissible(m, n):
            break
    d = int(rng.choice(DEFAULT_ORDERS))
    c = int(rng.choice(roots_of_unity(d, m)))
    gamma = random_commutator_word(n, m, rng) if rng.random() < 0.8 else Series.one(n, m)
    spec = make_cyclic_action(d, c, gamma, n, m)
    return Scenario(sid, spec, random_recipe(spec, rng, n + 1), seed)


def h2_action(p: int, n: int, rng: np.random.Generator) -> ActionSpec:
    """Z/p acting on the model mod p^2: either chi of order p with principal
    frak_f, or chi trivial with frak_f(sigma) = exp(p L), L Lie of degree >= 2."""
    m = p * p
    if rng.random() < 0.5:
        c = 1 + p * int(rng.integers(1, p))
        return make_cyclic_action(p, c, random_commutator_word(n, m, rng), n, m)
    v = from_exp_coords(exp(random_lie(n, m, rng, min_degree=2).scale(p)))
    return cyclic_action_from_value(p, 1, v, n, m)


def _h2_scenario(rng: np.random.Generator, sid: str, seed: int) -> Scenario:
    p = int(rng.choice((5, 7)))
    n = int(rng.integers(3, p))
    spec = h2_action(p, n, rng)
    return Scenario(sid, spec, random_recipe(spec, rng, n + 1), seed)


def bicyclic_scenario(p: int, n: int, sid: str = "") -> Scenario:
    """Z/p x Z/p acting trivially on the model mod p, with the unlifted cocycle
    (i, j) -> c^i y^j at level n, c = [y, x, ..., x] of degree n-1.

    The two images commute modulo [pi]_n but not modulo [pi]_{n+1}, so the
    obstruction to lifting is a nonzero commutator class.
    """
    from .action import trivial_action
    from .groups import FiniteGroup
    from .magnus import group_power

    if n >= p:
        raise ValueError("need n < p so that p-th powers vanish")
    Zp = FiniteGroup.cyclic(p)
    spec = trivial_action(FiniteGroup.product(Zp, Zp), n, p)
    x, y = gen_x(n - 1, p), gen_y(n - 1, p)
    c = y
    for _ in range(n - 2):
        c = group_commutator(c, x)
    vals = [group_power(c, i) * group_power(y, j) for i in range(p) for j in range(p)]
    return Scenario(sid or f"bicyclic-{p}-{n}", spec, {"values": [v.to_json() for v in vals]})


def random_central_cocycle(spec: ActionSpec, k: int, rng: np.random.Generator) -> np.ndarray:
    """Random 1-cocycle of the cyclic group with values in degree-k Lie elements.

    g acts on the degree-k piece by chi(g)^k, so z(sigma^j) = (1 + c + ... + c^{j-1}) z1
    with c = chi(sigma)^k, subject to the norm condition on z1.
    """
    from .magnus import dynkin_projection

    d, m = spec.group.order, spec.m
    c = pow(spec.chi[1], k, m) if d > 1 else 1
    norm = sum(pow(c, i, m) for i in range(d)) % m
    step = m // gcd(norm, m)
    z1 = dynkin_projection(rng.integers(0, m, 1 << k), k, m) * step % m
    return np.array([sum(pow(c, i, m) for i in range(j)) * z1 % m for j in range(d)], dtype=np.int64)


def random_lift(p: NACocycle, rng: np.random.Generator) -> NACocycle | None:
    """Some lift of p one level up (None if delta_k(p) != 0), varied by a
    random central cocycle so that successive lifts explore H^1 fibres."""
    q = lift_step(p)
    if q is None:
        return None
    k, spec = p.level, p.spec
    z = random_central_cocycle(spec, k, rng)
    vals = []
    for g in spec.group:
        blocks = [np.zeros(1 << j, dtype=np.int64) for j in range(k + 1)]
        blocks[0][0] = 1
        blocks[k] = z[g]
        vals.append(q(g) * Series(k, spec.m, blocks))
    out = NACocycle(spec, k + 1, vals)
    assert out.is_valid(), "random lift failed the cocycle law"
    return out


def random_scenarios(count: int, seed: int, profile: str = "default") -> list[Scenario]:
    """Deterministic in (count, seed, profile); scenario i uses seed [seed, i]."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    out = []
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        sid = f"{profile}-{seed}-{i:04d}"
        make = _default_scenario if profile == "default" else _h2_scenario
        out.append(make(rng, sid, seed))
    return out
