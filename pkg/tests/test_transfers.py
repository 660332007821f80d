from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import random_doubly_stochastic

from randassign.core import Profile, all_preferences, make_profile
from randassign.mechanisms import ED, PS, linear_mechanism
from randassign.properties import check_envy_free, check_strategy_proof
from randassign.transfers import (RankTransfer, RankWitness, TransferError, TransferFunction,
                                  VectorWitness, check_ef_transfer_lemmas, check_f_axioms,
                                  check_sp_prefix_monotonicity, decompose_to_transfers, f_from_v,
                                  format_f, format_v, g_from_f, parse_f, parse_v,
                                  random_transfer_function, reconstruct_f, roundtrip_check,
                                  transfer_mechanism, v_from_g, validate_transfer_function)

F = Fraction
ABC, ACB, BAC = (0, 1, 2), (0, 2, 1), (1, 0, 2)
VECTORS = [(F(1, 6), 0, 0), (F(1, 6), F(1, 12), 0), (F(1, 12), F(1, 24), 0), (F(1, 6), F(1, 6), 0)]


def failing(report):
    return [c.name for c in report.checks if not c.holds]


def test_zero_function_is_valid():
    assert validate_transfer_function(TransferFunction.zero(3)).holds


@pytest.mark.parametrize("values, broken", [
    ({(ABC, ABC, 0): F(1, 12), (ABC, ABC, 1): F(-1, 12)}, "no_transfers"),
    ({(ABC, BAC, 0): F(1, 12), (BAC, ABC, 0): F(-1, 12)}, "balanced"),
    ({(ABC, BAC, 0): F(1, 12), (ABC, BAC, 1): F(-1, 12)}, "antisymmetric"),
    ({(ABC, BAC, 0): F(1, 3), (ABC, BAC, 1): F(-1, 3),
      (BAC, ABC, 0): F(-1, 3), (BAC, ABC, 1): F(1, 3)}, "bounded"),
])
def test_validation_names_the_broken_property(values, broken):
    rep = validate_transfer_function(TransferFunction(3, values))
    assert broken in failing(rep)
    assert "fails" in rep[broken].line()


def test_invalid_function_is_rejected_by_axiom_checks():
    f = TransferFunction(3, {(ABC, BAC, 0): F(1, 12)})
    with pytest.raises(TransferError, match="invalid transfer function"):
        check_f_axioms(f)


def test_constructor_rejections():
    with pytest.raises(TransferError, match="n must be"):
        TransferFunction(2)
    with pytest.raises(TransferError, match="not preferences"):
        TransferFunction(3, {((0, 0, 1), ABC, 0): 0})
    with pytest.raises(TransferError, match="out of range"):
        TransferFunction(3, {(ABC, BAC, 5): 0})
    with pytest.raises(TransferError, match="limited"):
        TransferFunction(5)


@pytest.mark.parametrize("v", VECTORS, ids=str)
def test_linear_functions_pass_every_axiom(v):
    f = f_from_v(v)
    assert validate_transfer_function(f).holds
    assert check_f_axioms(f).holds
    assert check_ef_transfer_lemmas(f).holds
    assert check_sp_prefix_monotonicity(f).holds


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_random_functions_are_valid(seed):
    assert validate_transfer_function(random_transfer_function(3, seed)).holds


def test_random_functions_are_deterministic():
    assert random_transfer_function(3, 17) == random_transfer_function(3, 17)


@pytest.mark.parametrize("seed", range(12))
def test_sp_equals_ef_on_sample(seed):
    mech = transfer_mechanism(random_transfer_function(3, seed))
    assert check_strategy_proof(mech, 3).holds == check_envy_free(mech, 3).holds


def test_sender_invariance_violation_is_reported():
    # f(abc, acb, a) must not depend on a partner that agrees on the top object
    f = f_from_v((F(1, 6), 0, 0))
    values = {(p, q, a): f(p, q, a) for p in all_preferences(3) for q in all_preferences(3)
              for a in range(3)}
    for p, q in ((ABC, ACB), (ACB, ABC)):
        sign = 1 if p == ABC else -1
        values[(p, q, 0)] += sign * F(1, 12)
        values[(p, q, 1)] -= sign * F(1, 12)
    g = TransferFunction(3, values)
    assert validate_transfer_function(g).holds
    assert not check_f_axioms(g).holds
    assert not check_ef_transfer_lemmas(g)["agreeing_zero_transfers"].holds
    assert isinstance(g_from_f(g), RankWitness)


@pytest.mark.parametrize("v", VECTORS, ids=str)
def test_reconstruct_linear_mechanism(v):
    assert reconstruct_f(linear_mechanism(v), 3) == f_from_v(v)


@pytest.mark.parametrize("v", VECTORS, ids=str)
def test_rank_roundtrip_recovers_v(v):
    g = g_from_f(f_from_v(v))
    assert isinstance(g, RankTransfer)
    assert g == RankTransfer.from_v(v)
    assert v_from_g(g) == tuple(F(x) for x in v)


def test_v_from_g_witnesses():
    assert v_from_g(RankTransfer(((F(1), 0, 0), (0, 0, 0), (0, 0, 0)))) == VectorWitness("diagonal", (1,))
    g = RankTransfer(((0, F(1, 6), 0), (0, 0, 0), (0, 0, 0)))
    assert v_from_g(g).kind == "permutation"


@settings(max_examples=30)
@given(st.sampled_from([3, 4, 5]), st.integers(0, 10 ** 6))
def test_decomposition_reconstructs(n, seed):
    P = random_doubly_stochastic(n, seed)
    tm = decompose_to_transfers(P, Profile(tuple(tuple(range(n)) for _ in range(n))))
    assert tm.reconstruct() == P
    assert tm.max_abs() <= F(1, n)
    assert all(tm(i, j, a) == -tm(j, i, a) for (i, j, a) in tm.h)


def test_decomposition_text():
    prof = make_profile("abc", "bca", "cab")
    tm = decompose_to_transfers(PS(prof), prof)
    lines = tm.to_text().splitlines()
    assert lines and all(" <- " in ln for ln in lines)
    assert tm.max_abs() == F(1, 3)


def test_roundtrip():
    assert roundtrip_check(ED, 3).is_pairwise_exchange
    assert roundtrip_check(linear_mechanism((F(1, 6), 0, 0)), 3).is_pairwise_exchange
    r = roundtrip_check(PS, 3)
    assert not r.is_pairwise_exchange
    assert str(r.witness) == "1: a b c; 2: a b c; 3: b c a"


def test_f_text_roundtrip():
    f = random_transfer_function(3, 5)
    text = format_f(f)
    assert text.startswith("f n=3\n")
    assert parse_f(text) == f
    assert parse_f("# empty\nf n=3\n") == TransferFunction.zero(3)


@pytest.mark.parametrize("text, message", [
    ("", "header"),
    ("f n=x\n", "bad n"),
    ("f n=7\n", "outside"),
    ("f n=3\na,b,c | b,a,c | a\n", "expected"),
    ("f n=3\na,b,z | b,a,c | a | 1/12\n", "unknown object"),
    ("f n=3\na,b,b | b,a,c | a | 1/12\n", "not a preference"),
    ("f n=3\na,b,c | b,a,c | a | 1/12\na,b,c | b,a,c | a | 1/12\n", "duplicate"),
    ("f n=3\na,b,c | b,a,c | a | half\n", "line 2"),
])
def test_parse_f_errors(text, message):
    with pytest.raises(TransferError, match=message):
        parse_f(text)


def test_v_text_roundtrip():
    v = (F(1, 6), F(1, 12), F(0))
    assert format_v(v) == "v 1/6 1/12 0\n"
    assert parse_v(format_v(v)) == v
    with pytest.raises(ValueError):
        parse_v("w 1/6 0 0\n")
    with pytest.raises(ValueError):
        parse_v("v 1/12 1/6 0\n")


def test_lazy_vector_function_at_five():
    v = (F(1, 20), F(1, 40), F(1, 80), F(1, 160), 0)
    f = f_from_v(v)
    assert not f.dense
    p, q = (0, 1, 2, 3, 4), (4, 3, 2, 1, 0)
    assert f(p, q, 0) == F(1, 20)
    assert f(q, p, 0) == -F(1, 20)
    assert f(p, q, 2) == 0
    with pytest.raises(TransferError, match="dense cap"):
        next(f.entries())
