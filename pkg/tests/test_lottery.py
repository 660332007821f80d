import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import random_doubly_stochastic

from randassign.core import Assignment, all_preferences, make_profile
from randassign.lottery import (Lottery, birkhoff_decompose, hull_membership,
                                lottery_from_certificate, render_permutation, sample)
from randassign.mechanisms import ED, PS, RSD, catalog

F = Fraction


@given(st.sampled_from([3, 4, 5]), st.integers(0, 10 ** 6))
def test_birkhoff_reconstructs_within_support_bound(n, seed):
    P = random_doubly_stochastic(n, seed)
    lot = birkhoff_decompose(P)
    assert lot.matrix() == P
    assert len(lot.support) <= (n - 1) ** 2 + 1
    assert all(sorted(p) == list(range(n)) for _, p in lot.support)


def test_uniform_decomposition():
    lot = birkhoff_decompose(Assignment.uniform(3))
    assert lot.support == ((F(1, 3), (0, 1, 2)), (F(1, 3), (1, 2, 0)), (F(1, 3), (2, 0, 1)))
    assert lot.to_text().splitlines()[1] == "1/3: 1↦b, 2↦c, 3↦a"


def test_catalog_outputs_decompose():
    for mech in catalog(3):
        for prof in itertools.islice(itertools.product(all_preferences(3), repeat=3), 0, 216, 11):
            P = mech(make_profile(*["".join("abc"[a] for a in p) for p in prof]))
            lot = birkhoff_decompose(P)
            assert lot.matrix() == P and len(lot.support) <= 5


def test_permutations_render():
    assert render_permutation((2, 0, 1), ("x", "y", "z")) == "1↦z, 2↦x, 3↦y"


@pytest.mark.parametrize("n", [3, 4])
def test_uniform_is_in_the_full_hull(n):
    cert = hull_membership(Assignment.uniform(n), itertools.permutations(range(n)))
    assert cert.kind == "feasible"
    assert lottery_from_certificate(cert).matrix() == Assignment.uniform(n)


def test_hull_non_membership_has_farkas_proof():
    cert = hull_membership(Assignment.uniform(3), [(0, 1, 2), (1, 0, 2)])
    assert cert.kind == "infeasible" and cert.delta > 0


def test_rsd_lies_in_the_hull_of_serial_outcomes():
    prof = make_profile("abc", "abc", "bac")
    P = RSD(prof)
    cert = hull_membership(P, [(0, 1, 2), (1, 0, 2), (2, 0, 1), (2, 1, 0), (1, 2, 0), (0, 2, 1)])
    assert cert.feasible
    assert not hull_membership(PS(make_profile("abc", "abc", "bca")), [(0, 1, 2)]).feasible


def test_sampling_is_seeded():
    lot = birkhoff_decompose(ED(make_profile("abc", "bca", "cab")))
    draws = [sample(lot, s) for s in range(200)]
    assert draws == [sample(lot, s) for s in range(200)]
    assert set(draws) == {p for _, p in lot.support}


@pytest.mark.parametrize("support, message", [
    ((), "empty"),
    (((F(1), (0, 1, 2)), (F(0), (1, 0, 2))), "positive"),
    (((F(1, 2), (0, 1, 2)),), "sum to 1"),
])
def test_lottery_validation(support, message):
    with pytest.raises(ValueError, match=message):
        Lottery(support)
