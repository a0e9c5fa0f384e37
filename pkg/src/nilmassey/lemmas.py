"""Randomized checks of the matrix lemmas behind phi.

Each check returns None on success or a small witness dict on failure.
run_lemma_suite aggregates them over a grid of (n, m) and a trial count.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .coeffs import check_modulus
from .magnus import random_grouplike
from .scenarios import admissible, random_commutator_word
from .unipotent import (
    UniCoset,
    UniMatrix,
    bracket_entry,
    build_A,
    build_B,
    chi_act,
    in_V,
    mat_inv,
    mat_power,
    phi,
)

LEMMAS = ("power_law", "V_normal_B_central", "phi_commutators_in_V", "bracket_formula", "defining_system_identity")


def random_unimatrix(n: int, m: int, rng: np.random.Generator) -> UniMatrix:
    a = np.triu(rng.integers(0, m, (n + 1, n + 1)), 1) + np.eye(n + 1, dtype=np.int64)
    return UniMatrix._raw(n, m, a % m)


def random_in_V(n: int, m: int, rng: np.random.Generator) -> UniMatrix:
    """Random matrix whose image lies in V: only row 1 and column n+1 are free."""
    a = np.eye(n + 1, dtype=np.int64)
    a[0, 1:] = rng.integers(0, m, n)
    a[1:n, n] = rng.integers(0, m, n - 1)
    return UniMatrix._raw(n, m, a)


def random_unit(m: int, rng: np.random.Generator) -> int:
    from math import gcd

    while True:
        c = int(rng.integers(1, m))
        if gcd(c, m) == 1:
            return c


def check_power_law(n: int, m: int, rng: np.random.Generator):
    """a_{i,i+j}(M^N) = N^j a_{i,i+j}(M) for M in {A, B}."""
    N = int(rng.integers(0, m))
    for name, M in (("A", build_A(n, m)), ("B", build_B(n, m))):
        P = mat_power(M, N)
        for i in range(1, n + 1):
            for j in range(1, n + 2 - i):
                if P.entry(i, i + j) != pow(N, j, m) * M.entry(i, i + j) % m:
                    return {"matrix": name, "N": N, "i": i, "j": i + j}
    # small positive exponents by repeated multiplication
    k = int(rng.integers(0, 21))
    for name, M in (("A", build_A(n, m)), ("B", build_B(n, m))):
        P = UniMatrix.identity(n, m)
        for _ in range(k):
            P = P * M
        if P != mat_power(M, k):
            return {"matrix": name, "N": k, "check": "iterated product"}
    return None


def check_V_normal_B_central(n: int, m: int, rng: np.random.Generator):
    U = random_unimatrix(n, m, rng)
    v = random_in_V(n, m, rng)
    w = random_in_V(n, m, rng)
    conj = U * v * mat_inv(U)
    if not in_V(UniCoset(conj)):
        return {"check": "conjugate", "U": U.to_json(), "v": v.to_json()}
    if not in_V(UniCoset(v * w)) or not in_V(UniCoset(mat_inv(v))):
        return {"check": "subgroup", "v": v.to_json(), "w": w.to_json()}
    B = build_B(n, m)
    if UniCoset(B * v) != UniCoset(v * B):
        return {"check": "B central", "v": v.to_json()}
    return None


def check_phi_commutators(n: int, m: int, rng: np.random.Generator):
    if rng.random() < 0.5:
        gamma = random_commutator_word(n, m, rng)
    else:
        gamma = random_grouplike(n, m, rng, min_degree=2)
    if not in_V(phi(gamma)):
        return {"gamma": gamma.to_json()}
    return None


def check_bracket(n: int, m: int, rng: np.random.Generator):
    C = random_in_V(n, m, rng)
    # randomize the corner too; it must not matter
    try:
        value = bracket_entry(C)
    except AssertionError as e:
        return {"C": C.to_json(), "error": str(e)}
    if value != (C.entry(2, n + 1) - C.entry(1, n)) % m:
        return {"C": C.to_json()}
    return None


def check_defining_identity(n: int, m: int, rng: np.random.Generator):
    """D(a_ij) = -sum_r a_ir u a_rj on pairs (u, g), (v, h) of the semidirect product.

    With chi(g) = c the left side is c^{j-i} a_ij(v) - a_ij(u (g v)) + a_ij(u)
    and the right side is -sum_r a_ir(u) c^{j-r} a_rj(v).
    """
    u = random_unimatrix(n, m, rng)
    v = random_unimatrix(n, m, rng)
    c = random_unit(m, rng)
    prod = u * chi_act(c, v)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 2):
            if (i, j) == (1, n + 1):
                continue
            lhs = pow(c, j - i, m) * v.entry(i, j) - prod.entry(i, j) + u.entry(i, j)
            rhs = -sum(u.entry(i, r) * pow(c, j - r, m) * v.entry(r, j) for r in range(i + 1, j))
            if (lhs - rhs) % m:
                return {"i": i, "j": j, "c": c, "u": u.to_json(), "v": v.to_json()}
    return None


CHECKS = {
    "power_law": check_power_law,
    "V_normal_B_central": check_V_normal_B_central,
    "phi_commutators_in_V": check_phi_commutators,
    "bracket_formula": check_bracket,
    "defining_system_identity": check_defining_identity,
}


@dataclass
class LemmaReport:
    seed: int
    grid: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(r["failures"] == 0 for r in self.results.values())

    def to_json(self, timing: bool = False) -> dict:
        out = {"seed": self.seed, "grid": self.grid, "skipped": self.skipped, "results": self.results, "ok": self.ok}
        if timing:
            out["seconds"] = self.seconds
        return out


def run_lemma_suite(ns, ms, trials: int, seed: int) -> LemmaReport:
    """Run every lemma check `trials` times for each admissible (n, m).

    Pairs with gcd(m, n!) != 1 are skipped and listed.
    """
    t0 = time.perf_counter()
    rep = LemmaReport(seed)
    rep.results = {name: {"trials": 0, "failures": 0, "witness": None} for name in LEMMAS}
    for n in ns:
        if n < 3:
            raise ValueError(f"n = {n}; the lemmas need n >= 3")
        for m in ms:
            if not admissible(m, n):
                rep.skipped.append([n, m])
                continue
            check_modulus(m, n)
            rep.grid.append([n, m])
            rng = np.random.default_rng([seed, n, m])
            for name in LEMMAS:
                res = rep.results[name]
                for _ in range(trials):
                    res["trials"] += 1
                    wit = CHECKS[name](n, m, rng)
                    if wit is not None:
                        res["failures"] += 1
                        if res["witness"] is None:
                            res["witness"] = {"n": n, "m": m, **wit}
    rep.seconds = round(time.perf_counter() - t0, 3)
    return rep
