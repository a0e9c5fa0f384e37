"""Shared scenario builders and fault injectors for the test-suite."""
import numpy as np

from nilmassey.action import make_cyclic_action, validate_action
from nilmassey.cohomology import Cochain1, principal_cocycle, x_power_cocycle, na_twist
from nilmassey.massey import DefiningSystem, validate_defining_system
from nilmassey.magnus import Series, gen_x, gen_y, group_commutator, random_grouplike
from nilmassey.scenarios import random_scenarios, scenario_cocycle


def commutator(n, m):
    return group_commutator(gen_x(n, m), gen_y(n, m))


def scenario_pairs(count, seed, profile="default"):
    """(scenario, q') pairs from the random generator, q' at level n+1."""
    out = []
    for sc in random_scenarios(count, seed, profile):
        out.append((sc, scenario_cocycle(sc)))
    return out


def twisted_x_power(spec, t, beta, level):
    return na_twist(x_power_cocycle(spec, Cochain1(spec.coefficients, 1, t), level), beta)


# -- fault injection -----------------------------------------------------------------

def corrupt_entry(ds: DefiningSystem, rng):
    """Add a nonzero constant at one group element of one entry."""
    keys = sorted(ds.entries)
    i, j = keys[int(rng.integers(len(keys)))]
    z = ds[i, j]
    g = int(rng.integers(z.ctx.group.order))
    bump = np.zeros(z.ctx.group.order, dtype=np.int64)
    bump[g] = int(rng.integers(1, z.ctx.m))
    return ds.replace((i, j), Cochain1(z.ctx, z.weight, z.values + bump)), (i, j, g)


def corrupt_frak_f(spec, rng):
    """Multiply one frak_f value by an element with nonzero degree-2 part.

    Changing a single value this way always breaks the cocycle law: on the
    degree-2 graded piece the law at (g, g^-1) reads z + chi(g)^2 z' = 0 with
    only z changed, and for g = e it breaks frak_f(e) = 1.
    """
    G = spec.group
    g = int(rng.integers(G.order))
    noise = random_grouplike(spec.n, spec.m, rng, min_degree=2)
    while not noise.blocks[2].any():
        noise = random_grouplike(spec.n, spec.m, rng, min_degree=2)
    vals = list(spec.frak_f)
    vals[g] = vals[g] * noise
    return spec.with_values(frak_f=vals), g


def corrupt_chi(spec, rng):
    """Replace chi(g) by a value c' with c'^ord(g) != 1, so no character has it."""
    G = spec.group
    g = int(rng.integers(G.order))
    k = G.element_order(g)
    while True:
        c = int(rng.integers(0, spec.m))
        if pow(c, k, spec.m) != 1:
            break
    chi = list(spec.chi)
    chi[g] = c
    return spec.with_values(chi=chi), g


def detected(report, key=None):
    """A failing report with at least one witness."""
    return (not report.ok) and bool(report.failures) and all("message" in f for f in report.failures)


__all__ = [
    "commutator",
    "scenario_pairs",
    "twisted_x_power",
    "corrupt_entry",
    "corrupt_frak_f",
    "corrupt_chi",
    "detected",
    "make_cyclic_action",
    "validate_action",
    "validate_defining_system",
    "principal_cocycle",
]


# -- independent oracles used to label injected faults --------------------------------

def brute_is_coboundary1(values, weight, ctx):
    m = ctx.m
    return any(
        all((pow(ctx.chi[g], weight, m) - 1) * c % m == int(values[g]) % m for g in ctx.group)
        for c in range(m)
    )


def brute_defining_system_ok(ds, inputs=None):
    """Plain-loop check of the defining-system equations (and input classes)."""
    ctx, n, m = ds.ctx, ds.n, ds.ctx.m
    G = ctx.group

    def D(z):
        return {(g, h): (pow(ctx.chi[g], z.weight, m) * z(h) - z(G.mul(g, h)) + z(g)) % m for g in G for h in G}

    def cup_(a, b):
        return {(g, h): a(g) * pow(ctx.chi[g], b.weight, m) * b(h) % m for g in G for h in G}

    for i in range(1, n + 1):
        z = ds[i, i + 1]
        if any(D(z).values()):
            return False
        if inputs is not None and not brute_is_coboundary1(z.values - inputs[i - 1].values, 1, ctx):
            return False
    for (i, j), z in ds.entries.items():
        if j == i + 1:
            continue
        lhs = D(z)
        for r in range(i + 1, j):
            c = cup_(ds[i, r], ds[r, j])
            lhs = {k: (lhs[k] - c[k]) % m for k in lhs}
        if any(lhs.values()):
            return False
    return True


def brute_character_ok(group, chi, m):
    from math import gcd

    if any(gcd(int(c), m) != 1 for c in chi):
        return False
    return all(chi[g] * chi[h] % m == chi[group.mul(g, h)] % m for g in group for h in group)
