import numpy as np
import pytest
from hypothesis import given, strategies as st

from nilmassey.action import (
    ActionSpec,
    BadCharacter,
    InvalidAction,
    apply_action,
    cyclic_action_from_value,
    f_cochain,
    make_cyclic_action,
    require_valid,
    trivial_action,
    validate_action,
)
from nilmassey.groups import FiniteGroup, GroupTableError
from nilmassey.magnus import (
    Series,
    gen_x,
    gen_y,
    group_commutator,
    group_power,
    log,
    random_grouplike,
)
from nilmassey.scenarios import random_commutator_word, roots_of_unity
from nilmassey.unipotent import chi_act, phi

seeds = st.integers(0, 2**32 - 1)


def commutator(n, m):
    return group_commutator(gen_x(n, m), gen_y(n, m))


def klein():
    return FiniteGroup(((0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)))


def test_group_table_rejected():
    with pytest.raises(GroupTableError):
        FiniteGroup(((0, 1), (0, 1)))


def test_identity_acts_trivially():
    spec = make_cyclic_action(2, 24, commutator(3, 25), 3, 25)
    g = random_grouplike(3, 25, np.random.default_rng(0))
    assert apply_action(spec, 0, g) == g


def test_untwisted_action_on_y():
    spec = make_cyclic_action(4, 7, Series.one(3, 25), 3, 25)
    assert all(f == Series.one(3, 25) for f in spec.frak_f)
    for g in spec.group:
        assert apply_action(spec, g, gen_y(3, 25)) == group_power(gen_y(3, 25), spec.chi[g])


def test_validation_examples():
    assert validate_action(trivial_action(klein(), 3, 25)).ok
    assert validate_action(make_cyclic_action(2, 24, commutator(3, 25), 3, 25)).ok
    gamma = commutator(4, 25) * group_commutator(commutator(4, 25), gen_x(4, 25))
    spec = make_cyclic_action(5, 6, gamma, 4, 25)
    assert validate_action(spec).ok
    # sigma^5 acts as the identity on the generators
    for w in (gen_x(4, 25), gen_y(4, 25)):
        v = w
        for _ in range(5):
            v = spec.act(1, v)
        assert v == w


def test_degree_one_frak_f_rejected():
    spec = trivial_action(FiniteGroup.cyclic(2), 3, 25)
    bad = spec.with_values(frak_f=[Series.one(3, 25), gen_y(3, 25)])
    rep = validate_action(bad)
    assert not rep.ok
    assert rep.failures[0]["check"] == "degree"
    with pytest.raises(InvalidAction):
        require_valid(bad)


def test_bad_character():
    with pytest.raises(BadCharacter):
        make_cyclic_action(2, 7, Series.one(3, 25), 3, 25)
    spec = trivial_action(FiniteGroup.cyclic(2), 3, 25).with_values(chi=[1, 7])
    checks = {f["check"] for f in validate_action(spec).failures}
    assert checks == {"character"}


def test_f_cochain_examples():
    spec = make_cyclic_action(3, 1, Series.one(3, 25), 3, 25)
    assert f_cochain(spec).is_zero()
    C = phi(commutator(3, 25))
    assert (C.entry(2, 4) - C.entry(1, 3)) % 25 == 2
    forced = trivial_action(FiniteGroup.cyclic(2), 3, 25).with_values(frak_f=[Series.one(3, 25), commutator(3, 25)])
    assert f_cochain(forced, check=False)(1) == 2


def test_from_value_matches_fixed_point():
    spec = make_cyclic_action(2, 24, commutator(3, 25), 3, 25)
    again = cyclic_action_from_value(2, 24, spec.frak_f[1], 3, 25)
    assert again.frak_f == spec.frak_f


def test_json_roundtrip():
    spec = make_cyclic_action(2, 48, commutator(4, 49), 4, 49)
    back = ActionSpec.from_json(spec.to_json())
    assert back.frak_f == spec.frak_f and back.chi == spec.chi
    short = ActionSpec.from_json({"n": 4, "m": 49, "cyclic": {"d": 2, "c": 48, "gamma": commutator(4, 49).to_json()}})
    assert short.frak_f == spec.frak_f


@st.composite
def cyclic_specs(draw):
    n, m = draw(st.sampled_from([(3, 25), (4, 49), (4, 121), (5, 49)]))
    d = draw(st.sampled_from([2, 3, 4, 6]))
    roots = roots_of_unity(d, m)
    c = draw(st.sampled_from(roots))
    seed = draw(seeds)
    gamma = random_commutator_word(n, m, np.random.default_rng(seed))
    return make_cyclic_action(d, c, gamma, n, m)


@given(cyclic_specs(), seeds)
def test_action_is_graded_by_chi(spec, seed):
    """On gr_k, g acts by chi(g)^k."""
    w = random_grouplike(spec.n, spec.m, np.random.default_rng(seed))
    lw = log(w)
    for g in spec.group:
        lg = log(spec.act(g, w))
        c = spec.chi[g]
        k0 = 1
        # only the lowest nonzero degree is graded exactly
        while k0 <= spec.n and not lw.blocks[k0].any():
            k0 += 1
        if k0 <= spec.n:
            assert np.array_equal(lg.blocks[k0], lw.blocks[k0] * pow(c, k0, spec.m) % spec.m)


@given(cyclic_specs(), seeds)
def test_action_is_automorphism(spec, seed):
    rng = np.random.default_rng(seed)
    a, b = random_grouplike(spec.n, spec.m, rng), random_grouplike(spec.n, spec.m, rng)
    for g in spec.group:
        assert spec.act(g, a * b) == spec.act(g, a) * spec.act(g, b)


@given(cyclic_specs(), seeds)
def test_phi_equivariance(spec, seed):
    rng = np.random.default_rng(seed)
    w = random_grouplike(spec.n, spec.m, rng)
    for g in spec.group:
        assert phi(spec.act(g, w)) == phi(w).act(spec.chi[g])


@given(cyclic_specs())
def test_f_is_a_cocycle(spec):
    f = f_cochain(spec)
    assert f.weight == spec.n - 1
