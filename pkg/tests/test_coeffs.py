import itertools

import pytest
from hypothesis import given, strategies as st

from nilmassey.coeffs import (
    ModulusError,
    Modulus,
    NotAUnit,
    Residue,
    binomial_mod,
    check_modulus,
    crt_join,
    crt_split,
    factorize,
    inv_mod,
    residue_arith,
    residue_inv,
    solve_linear,
    solve_linear_mod,
)

MODULI = [25, 49, 121, 125, 35, 77, 169]


def R(v, m=25):
    return Residue.of(v, m)


def test_arith_examples():
    assert residue_arith(R(7), R(9), "mul").value == 13
    assert residue_arith(R(0), R(11), "add").value == 11
    assert residue_arith(R(17), R(17), "sub").value == 0


def test_modulus_mismatch():
    with pytest.raises(ModulusError):
        residue_arith(R(1, 25), R(1, 49), "add")


def test_inverse_examples():
    assert residue_inv(R(2)).value == 13
    assert residue_inv(R(1)).value == 1
    with pytest.raises(NotAUnit):
        residue_inv(R(5))


def test_check_modulus():
    check_modulus(25, 4)
    with pytest.raises(ModulusError):
        check_modulus(24, 3)
    with pytest.raises(ModulusError):
        check_modulus(25, 5)
    with pytest.raises(ModulusError):
        Modulus.of(49, 7)


def test_factorize():
    assert factorize(125) == [(5, 3)]
    assert factorize(35) == [(5, 1), (7, 1)]


def test_solve_linear_examples():
    assert solve_linear([[1, 0], [0, 1]], [3, 4], 5, 2) == [3, 4]
    x = solve_linear([[5]], [10], 5, 2)
    assert x is not None and 5 * x[0] % 25 == 10
    assert solve_linear([[5]], [1], 5, 2) is None


def test_solve_linear_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_linear([[1, 0]], [1, 2], 5, 1)


@given(st.sampled_from(MODULI), st.integers(), st.integers())
def test_ring_axioms(m, a, b):
    x, y = R(a, m), R(b, m)
    assert (x + y).value == (a + b) % m
    assert (x * y).value == (a * b) % m
    assert (x - x).value == 0


@given(st.sampled_from(MODULI), st.integers(1, 10**6))
def test_inverse_property(m, a):
    try:
        b = inv_mod(a, m)
    except NotAUnit:
        assert any(a % p == 0 for p, _ in factorize(m))
        return
    assert a * b % m == 1


@given(st.sampled_from(MODULI), st.integers(0, 10**6))
def test_crt_roundtrip(m, x):
    assert crt_join(crt_split(x, m), m) == x % m


@given(st.integers(0, 200), st.integers(0, 4))
def test_binomial_matches_integer_binomial(c, k):
    from math import comb

    assert binomial_mod(c, k, 25) == comb(c, k) % 25


def brute_force_solvable(A, b, m):
    cols = len(A[0])
    for x in itertools.product(range(m), repeat=cols):
        if all(sum(a * v for a, v in zip(row, x)) % m == bi % m for row, bi in zip(A, b)):
            return True
    return False


@given(
    st.lists(st.lists(st.integers(0, 24), min_size=2, max_size=2), min_size=1, max_size=3),
    st.lists(st.integers(0, 24), min_size=3, max_size=3),
)
def test_solve_linear_decision_is_exact(A, b):
    b = b[: len(A)]
    x = solve_linear(A, b, 5, 2)
    assert (x is not None) == brute_force_solvable(A, b, 25)
    if x is not None:
        for row, bi in zip(A, b):
            assert sum(a * v for a, v in zip(row, x)) % 25 == bi


@given(
    st.lists(st.lists(st.integers(0, 34), min_size=2, max_size=2), min_size=1, max_size=2),
    st.lists(st.integers(0, 34), min_size=2, max_size=2),
)
def test_solve_linear_mod_composite(A, b):
    b = b[: len(A)]
    x = solve_linear_mod(A, b, 35)
    assert (x is not None) == brute_force_solvable(A, b, 35)
    if x is not None:
        for row, bi in zip(A, b):
            assert sum(a * v for a, v in zip(row, x)) % 35 == bi
