from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from artifact import liealg
from artifact.errors import InputError
from artifact.liealg import (LieAlgebra, adjoint_matrix, cartan_decompose, check_jacobi,
                             delta_character, load_algebra, load_pair, trace_ad_power)
from artifact import _exact as ex

F = Fraction


@pytest.fixture(scope="module")
def sl2():
    return load_algebra("sl2")


def sl2_table(c_he_e=2):
    # basis e, h, f
    return {(1, 0): {0: c_he_e}, (0, 1): {0: -c_he_e},
            (1, 2): {2: -2}, (2, 1): {2: 2},
            (0, 2): {1: 1}, (2, 0): {1: -1}}


def test_jacobi_abelian():
    assert check_jacobi([[[0, 0], [0, 0]], [[0, 0], [0, 0]]])


def test_jacobi_sl2():
    assert check_jacobi(sl2_table(), dim=3)


def test_jacobi_detects_altered_constant():
    assert not check_jacobi(sl2_table(3), dim=3)


def test_jacobi_dimension_mismatch():
    with pytest.raises(InputError):
        check_jacobi([[[0, 0], [0]], [[0, 0], [0, 0]]])
    with pytest.raises(InputError):
        check_jacobi([[[0]]], dim=2)


def test_cartan_sl2(sl2):
    alg, sigma = sl2
    pair = cartan_decompose(alg, sigma)
    e_minus_f = alg.vector({"e": 1, "f": -1})
    assert pair.k_vectors == [e_minus_f]
    p_span = pair.p_vectors
    assert len(p_span) == 2
    for v in (alg.vector({"h": 1}), alg.vector({"e": 1, "f": 1})):
        assert ex.rank(p_span + [v]) == 2
    assert pair.p_idx == [0, 1] and pair.k_idx == [2]


def test_cartan_identity(sl2):
    alg, _ = sl2
    pair = cartan_decompose(alg, ex.identity(3))
    assert len(pair.k_vectors) == 3 and pair.p_vectors == []


def test_cartan_solvable():
    pair = load_pair("solvable2")
    alg = pair.algebra
    assert pair.k_vectors == [alg.vector({"a": 1})]
    assert pair.p_vectors == [alg.vector({"b": 1})]


def test_cartan_rejects_bad_sigma(sl2):
    alg, _ = sl2
    with pytest.raises(InputError):
        cartan_decompose(alg, [[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    # involutive but not an automorphism: swaps e and h
    with pytest.raises(InputError):
        cartan_decompose(alg, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])


def test_delta_values(sl2):
    pair = load_pair("sl2")
    assert delta_character(pair).values == [0]
    assert delta_character(load_pair("abelian2")).values == [0]
    assert delta_character(load_pair("solvable2")).values == [F(1, 2)]


def test_trace_ad_power(sl2):
    alg, _ = sl2
    pair = load_pair("sl2")
    assert trace_ad_power(pair, pair.algebra.vector({"h": 1}), 1) == 4
    assert trace_ad_power(pair, [0, 0, 0], 1) == 0
    assert trace_ad_power(pair, pair.algebra.vector({"e": 1, "f": 1}), 1) == 4
    with pytest.raises(InputError):
        trace_ad_power(pair, pair.algebra.vector({"e": 1}), 1)


def test_adjoint_matrix(sl2):
    alg, _ = sl2
    assert adjoint_matrix(alg, [0, 0, 0]) == [[0] * 3] * 3
    ad_h = adjoint_matrix(alg, alg.vector({"h": 1}))
    assert ad_h == [[2, 0, 0], [0, 0, 0], [0, 0, -2]]
    ab, _ = load_algebra("abelian2")
    assert adjoint_matrix(ab, [F(3), F(-7)]) == [[0, 0], [0, 0]]


def test_json_roundtrip(sl2):
    alg, _ = sl2
    again = LieAlgebra.from_dict(alg.to_dict())
    assert again.c == alg.c


def test_character_rejects_non_character(sl2):
    alg, _ = sl2
    full = liealg.Subalgebra(alg, [alg.basis_vector(i) for i in range(3)])
    with pytest.raises(InputError):
        liealg.Character(full, [0, 1, 0])


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
vec3 = st.lists(rationals, min_size=3, max_size=3)


@settings(max_examples=60, deadline=None)
@given(vec3, vec3)
def test_ad_is_representation(x, y):
    alg, _ = load_algebra("sl2")
    lhs = adjoint_matrix(alg, alg.bracket(x, y))
    ax, ay = adjoint_matrix(alg, x), adjoint_matrix(alg, y)
    rhs = [[a - b for a, b in zip(r1, r2)]
           for r1, r2 in zip(ex.matmul(ax, ay), ex.matmul(ay, ax))]
    assert lhs == rhs


@pytest.mark.parametrize("name", ["sl2", "solvable2", "abelian2"])
def test_delta_vanishes_on_k_brackets(name):
    pair = load_pair(name)
    d = delta_character(pair)
    for a in pair.k_vectors:
        for b in pair.k_vectors:
            ab = pair.to_adapted(pair.algebra.bracket(a, b))
            assert d(ab) == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=2))
def test_ad_p_swaps_blocks(coeffs):
    pair = load_pair("sl2")
    x = pair.from_adapted(coeffs + [F(0)])
    ad = adjoint_matrix(pair.algebra, x)
    for v in pair.k_vectors:
        assert pair.in_p(ex.matvec(ad, v))
    for v in pair.p_vectors:
        assert pair.in_k(ex.matvec(ad, v))
