"""Lifting obstructions along the lower central series, and the main check.

delta_k(p) measures the failure of a cocycle p: G -> pi/[pi]_k to lift to
pi/[pi]_{k+1}.  mu_pushforward reads off the (y, x, ..., x, y) Magnus
coordinate of a degree-n Lie value.  verify_main_theorem compares the
Massey value of the system determined by phi o p with -f u p_y, both as
classes and through the pointwise factor set of the section phi' o q'.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .action import ActionSpec, f_cochain, require_valid as require_valid_action
from .cohomology import (
    Cochain1,
    Cochain2,
    LieCochain2,
    NACocycle,
    class_token,
    classes_equal,
    cup,
    is_coboundary,
    lie_classes_equal,
    lie_coboundary,
)
from .magnus import Series, canonical_section, dynkin_projection, inverse, word_code
from .massey import from_theta, massey_value, modify_for_zero
from .unipotent import (
    UniMatrix,
    _word_images,
    bracket_entry,
    chi_act,
    mat_inv,
    phi,
    phi_prime,
)


class DegenerateInput(ValueError):
    pass


class InvalidCocycle(ValueError):
    pass


MIN_N = 3


def check_n(n: int) -> None:
    if n < MIN_N:
        raise DegenerateInput(f"n = {n}; the construction needs n >= {MIN_N}")


def require_cocycle(q: NACocycle) -> NACocycle:
    bad = q.failures()
    if bad:
        raise InvalidCocycle(f"cocycle law fails at (g, h) = {bad[0]}")
    return q


# -- delta_k and lifting --------------------------------------------------------

Section = Callable[[Series], Series]


def factor_set(p: NACocycle, section: Section = canonical_section) -> np.ndarray:
    """(g, h) -> r(p(g)) g(r(p(h))) r(p(gh))^-1, as degree-k blocks.

    Each value lies in [pi]_k / [pi]_{k+1}; lower degrees are asserted zero.
    """
    spec, k = p.spec, p.level
    if k > spec.n:
        raise ValueError(f"cannot lift past level {spec.n + 1}")
    G = spec.group
    lifts = [section(v) for v in p.values]
    inv = [inverse(r) for r in lifts]
    d = G.order
    out = np.zeros((d, d, 1 << k), dtype=np.int64)
    for g in G:
        for h in G:
            val = lifts[g] * spec.act(g, lifts[h]) * inv[G.mul(g, h)]
            assert all(not val.blocks[j].any() for j in range(1, k)), "factor set not central"
            out[g, h] = val.blocks[k]
    return out


def delta_k(p: NACocycle, section: Section = canonical_section) -> LieCochain2:
    """The obstruction to lifting p, as a Lie-valued 2-cocycle of degree k."""
    return LieCochain2(p.spec.coefficients, p.level, factor_set(p, section))


def delta_class_zero(p: NACocycle) -> bool:
    return lie_coboundary(delta_k(p)) is not None


def lift_step(p: NACocycle) -> NACocycle | None:
    """A cocycle at level k+1 truncating to p, or None when delta_k(p) != 0.

    With r the canonical section, q(g) = r(p(g)) (1 - b(g)) where Db = delta.
    """
    delta = delta_k(p)
    b = lie_coboundary(delta)
    if b is None:
        return None
    spec, k = p.spec, p.level
    vals = []
    for g in spec.group:
        r = canonical_section(p(g))
        blocks = [np.zeros(1 << j, dtype=np.int64) for j in range(k + 1)]
        blocks[0][0] = 1
        blocks[k] = -b[g]
        vals.append(r * Series(k, spec.m, blocks))
    q = NACocycle(spec, k + 1, vals)
    assert q.is_valid(), "lift failed the cocycle law"
    return q


def perturbed_section(k: int, m: int, seed: int) -> Section:
    """Canonical section times 1 + lambda(u), lambda a Lie element of degree k
    chosen as a deterministic function of u."""

    def section(u: Series) -> Series:
        r = canonical_section(u)
        digest = int.from_bytes(u.key()[-8:], "little") ^ seed
        rng = np.random.default_rng([seed, digest & 0xFFFFFFFF, len(u.key())])
        lam = dynkin_projection(rng.integers(0, m, 1 << k), k, m)
        blocks = [np.zeros(1 << j, dtype=np.int64) for j in range(k + 1)]
        blocks[0][0] = 1
        blocks[k] = lam
        return r * Series(k, m, blocks)

    return section


def section_independent(p: NACocycle, seed: int) -> bool:
    """delta_k computed with a perturbed section is cohomologous to the canonical one."""
    other = delta_k(p, perturbed_section(p.level, p.spec.m, seed))
    return lie_classes_equal(delta_k(p), other)


# -- mu_* ------------------------------------------------------------------------

def mu_word(n: int) -> str:
    return "Y" + "X" * (n - 2) + "Y"


def mu_vector(n: int, m: int) -> np.ndarray:
    """Corner entries a_{1,n+1} of the images of all degree-n words."""
    imgs = _word_images(n, m, n)
    start = (1 << n) - 1
    return imgs[start:, 0, n].copy()


def mu_pushforward(c: LieCochain2) -> Cochain2:
    """Apply gamma -> a_{1,n+1}(phi'(exp gamma)) to each value of c."""
    n, m = c.degree, c.ctx.m
    check_n(n)
    if not c.is_lie_valued():
        raise ValueError("values are not Lie elements")
    # exp(gamma) = 1 + gamma in degree n, so the corner entry is linear in gamma
    via_matrix = np.tensordot(c.values, mu_vector(n, m), axes=1) % m
    via_word = c.values[:, :, word_code(mu_word(n))] % m
    assert np.array_equal(via_matrix, via_word), "mu: matrix and word paths disagree"
    return Cochain2(c.ctx, n, via_matrix)


def mu_of_lie(gamma: np.ndarray, n: int, m: int) -> tuple[int, int]:
    """Both computations of mu on a single degree-n block (matrix, word)."""
    blocks = [np.zeros(1 << j, dtype=np.int64) for j in range(n + 1)]
    blocks[0][0] = 1
    blocks[n] = np.asarray(gamma, dtype=np.int64)
    M = phi_prime(Series(n, m, blocks))
    return M.entry(1, n + 1), int(gamma[word_code(mu_word(n))]) % m


# -- main theorem ---------------------------------------------------------------

@dataclass
class ObstructionReport:
    scenario: str
    level: int
    delta_class_zero: bool
    lift: dict | None
    massey_class: str
    rhs_class: str | None
    theorem_holds: bool | None
    cochain_identity_holds: bool | None
    contains_zero: bool | None = None
    mu_delta_holds: bool | None = None
    witnesses: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        """All checks that were run passed (None means not applicable)."""
        flags = (self.theorem_holds, self.cochain_identity_holds, self.contains_zero, self.mu_delta_holds)
        return all(v for v in flags if v is not None)

    def to_json(self, timing: bool = True) -> dict:
        out = asdict(self)
        if not timing:
            del out["seconds"]
        out["ok"] = self.ok
        return out


def theta_of(p: NACocycle) -> list:
    """phi o p as a list of cosets in the quotient by the corner."""
    n = p.spec.n
    return [phi(v, n) for v in p.values]


def determined_system(p: NACocycle):
    return from_theta(theta_of(p), p.spec.coefficients)


def section_factor_set(spec: ActionSpec, q_prime: NACocycle) -> np.ndarray:
    """s~(g, h) = s(g) (g s(h)) s(gh)^-1 for s = phi' o q', as (d, d) corner values.

    Raises AssertionError if some value is not a corner matrix.
    """
    n, m, G = spec.n, spec.m, spec.group
    s = [phi_prime(v, n) for v in q_prime.values]
    s_inv = [mat_inv(M) for M in s]
    d = G.order
    out = np.zeros((d, d), dtype=np.int64)
    for g in G:
        for h in G:
            M = s[g] * chi_act(spec.chi[g], s[h]) * s_inv[G.mul(g, h)]
            corner = M.entry(1, n + 1)
            assert M == UniMatrix.elementary(n, m, 1, n + 1, corner), "factor set not central"
            out[g, h] = corner
    return out


def predicted_factor_set(spec: ActionSpec, q_prime: NACocycle) -> np.ndarray:
    """a_{1,n+1}[B, phi'(frak_f(g))] * (-chi(g) q'_y(h))."""
    n, m = spec.n, spec.m
    brackets = np.array([bracket_entry(phi_prime(f, n)) for f in spec.frak_f], dtype=np.int64)
    chi = np.array(spec.chi, dtype=np.int64)
    qy = np.array([v["Y"] for v in q_prime.values], dtype=np.int64)
    return (-(brackets * chi)[:, None] * qy[None, :]) % m


def verify_main_theorem(spec: ActionSpec, q_prime: NACocycle, scenario: str = "", check: bool = True) -> ObstructionReport:
    t0 = time.perf_counter()
    n = spec.n
    check_n(n)
    if q_prime.level != n + 1:
        raise ValueError(f"q' must live at level {n + 1}")
    if check:
        require_valid_action(spec)
        require_cocycle(q_prime)
    p = q_prime.truncate(n)
    witnesses = []

    ds = determined_system(p)
    value = massey_value(ds)
    f = f_cochain(spec)
    _, p_y = p.ab_cochains()
    rhs = -cup(f, p_y)
    holds = classes_equal(value, rhs)

    # p lifts to q' by hypothesis, so its obstruction class vanishes
    dzero = delta_class_zero(p)

    actual = section_factor_set(spec, q_prime)
    predicted = predicted_factor_set(spec, q_prime)
    bad = np.argwhere(actual != predicted)
    for g, h in bad[:3]:
        witnesses.append({"check": "cochain_identity", "g": int(g), "h": int(h),
                          "actual": int(actual[g, h]), "predicted": int(predicted[g, h])})
    if not holds:
        witnesses.append({"check": "theorem", "message": "Massey value and -f u p_y differ in H^2"})
    if not dzero:
        witnesses.append({"check": "delta", "message": "delta_n of the truncation is not a coboundary"})

    zero = contains_zero_check(spec, q_prime, check=False)
    mu_delta = verify_mu_delta(spec, p, check=False)
    return ObstructionReport(
        scenario=scenario,
        level=n,
        delta_class_zero=dzero,
        lift=q_prime.to_json(),
        massey_class=class_token(value),
        rhs_class=class_token(rhs),
        theorem_holds=holds and dzero,
        cochain_identity_holds=not len(bad),
        contains_zero=zero,
        mu_delta_holds=mu_delta,
        witnesses=witnesses,
        seconds=round(time.perf_counter() - t0, 4),
    )


def zero_realizing_systems(spec: ActionSpec, q_prime: NACocycle):
    """(system from phi o p, Z[1,n] - f version, Z[1,n] + f version)."""
    p = q_prime.truncate(spec.n)
    ds = determined_system(p)
    f = f_cochain(spec)
    return ds, modify_for_zero(ds, -f), modify_for_zero(ds, f)


def contains_zero_check(spec: ActionSpec, q_prime: NACocycle, check: bool = True) -> bool:
    """Whether the modified system has zero Massey class.

    The system determined by phi o p has Z[n, n+1] = -p_y, so replacing
    Z[1, n] by Z[1, n] - f shifts the value by f u p_y, cancelling -f u p_y.
    """
    check_n(spec.n)
    if check:
        require_valid_action(spec)
        require_cocycle(q_prime)
    _, minus, _ = zero_realizing_systems(spec, q_prime)
    return is_coboundary(massey_value(minus)) is not None


def literal_modification_is_zero(spec: ActionSpec, q_prime: NACocycle) -> bool:
    """Same check with Z[1, n] + f, the variant written in the corollary."""
    _, _, plus = zero_realizing_systems(spec, q_prime)
    return is_coboundary(massey_value(plus)) is not None


def mu_delta_sides(spec: ActionSpec, p: NACocycle) -> tuple[Cochain2, Cochain2]:
    """(mu_* delta_n(p), f u p_y + Massey value of the system from phi o p)."""
    n = spec.n
    check_n(n)
    if p.level != n:
        raise ValueError(f"p must live at level {n}")
    lhs = mu_pushforward(delta_k(p))
    f = f_cochain(spec)
    _, p_y = p.ab_cochains()
    rhs = cup(f, p_y) + massey_value(determined_system(p))
    return lhs, rhs


def verify_mu_delta(spec: ActionSpec, p: NACocycle, check: bool = True) -> bool:
    if check:
        require_valid_action(spec)
        require_cocycle(p)
    lhs, rhs = mu_delta_sides(spec, p)
    return classes_equal(lhs, rhs)


def mu_delta_report(spec: ActionSpec, p: NACocycle, scenario: str = "") -> ObstructionReport:
    """Report for a cocycle at level n that is not assumed to lift."""
    t0 = time.perf_counter()
    require_valid_action(spec)
    require_cocycle(p)
    lhs, rhs = mu_delta_sides(spec, p)
    holds = classes_equal(lhs, rhs)
    witnesses = [] if holds else [{"check": "mu_delta", "message": "mu_* delta_n and f u p_y + Massey differ in H^2"}]
    return ObstructionReport(
        scenario=scenario,
        level=spec.n,
        delta_class_zero=delta_class_zero(p),
        lift=None,
        massey_class=class_token(massey_value(determined_system(p))),
        rhs_class=None,
        theorem_holds=None,
        cochain_identity_holds=None,
        mu_delta_holds=holds,
        witnesses=witnesses,
        seconds=round(time.perf_counter() - t0, 4),
    )
