import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import naive_pairwise

from randassign.core import Assignment, Profile, all_preferences, make_profile
from randassign.mechanisms import (ED, PS, RSD, VectorError, catalog, eating_schedule,
                                   linear_assignment, linear_mechanism, pairwise_exchange,
                                   random_serial_dictatorship, sd_mechanism, serial_pick,
                                   validate_vector)
from randassign.tabulate import clear_cache, tabulate
from randassign.transfers import f_from_v

F = Fraction


def profiles(n=3):
    return st.tuples(*[st.sampled_from(all_preferences(n))] * n).map(Profile)


def grid_vectors():
    top = st.integers(0, 12).map(lambda k: F(k, 72))
    return st.tuples(top, st.integers(0, 12)).map(lambda t: (t[0], min(t[0], F(t[1], 72)), F(0)))


def rows(P):
    return [list(r) for r in P]


def test_ps_on_profile_e():
    # three agents with a on top; agents 2 and 3 then split c
    P = PS(make_profile("abc", "acb", "acb"))
    assert rows(P) == [[F(1, 3), F(2, 3), 0], [F(1, 3), F(1, 6), F(1, 2)], [F(1, 3), F(1, 6), F(1, 2)]]


def test_ps_eating_by_hand():
    # a runs out at 1/2, then three eaters finish b by 2/3
    times, P = eating_schedule(make_profile("abc", "abc", "bca"))
    assert times == [F(1, 2), F(2, 3), F(1)]
    assert rows(P) == [[F(1, 2), F(1, 6), F(1, 3)], [F(1, 2), F(1, 6), F(1, 3)], [0, F(2, 3), F(1, 3)]]


def test_ps_simultaneous_exhaustion_is_one_event():
    times, P = eating_schedule(make_profile("abc", "bac", "cab"))
    assert times == [F(1)]
    assert rows(P) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_serial_dictatorship():
    prof = make_profile("abc", "abc", "bac")
    assert serial_pick(prof, (0, 1, 2)) == (0, 1, 2)
    assert serial_pick(prof, (2, 1, 0)) == (2, 0, 1)
    assert sd_mechanism((2, 1, 0)).name == "sd:3,2,1"
    with pytest.raises(ValueError):
        serial_pick(prof, (0, 0, 1))


@given(profiles())
def test_rsd_is_average_over_orders(prof):
    counts = [[0] * 3 for _ in range(3)]
    for order in itertools.permutations(range(3)):
        for i, a in enumerate(serial_pick(prof, order)):
            counts[i][a] += 1
    assert rows(RSD(prof)) == [[F(c, 6) for c in r] for r in counts]


def test_rsd_cap():
    prof = Profile(tuple(tuple(range(9)) for _ in range(9)))
    with pytest.raises(ValueError, match="cap"):
        random_serial_dictatorship(prof)


def test_equal_division():
    assert ED(make_profile("abc", "bca", "cab")) == Assignment.uniform(3)


@pytest.mark.parametrize("v, message", [
    ((F(1, 6), F(1, 12)), "n >= 3"),
    ((F(1, 12), F(1, 6), 0), "unsorted"),
    ((F(1, 6), 0, F(1, 12)), "unsorted"),
    ((F(1, 6), F(1, 12), F(1, 24)), "must be 0"),
    ((F(1, 5), 0, 0), "exceeds"),
])
def test_validate_vector(v, message):
    with pytest.raises(VectorError, match=message):
        validate_vector(v)


def test_linear_profile_c():
    # cell = 1/3 + 3 v[rank] - column total of v[rank]; checked by hand
    P = linear_assignment(make_profile("abc", "acb", "cab"), (F(1, 6), 0, 0))
    assert rows(P) == [[F(1, 2), F(1, 3), F(1, 6)], [F(1, 2), F(1, 3), F(1, 6)], [0, F(1, 3), F(2, 3)]]


@given(profiles(), grid_vectors())
def test_linear_closed_form_matches_pairwise_sum(prof, v):
    f = f_from_v(v)
    assert linear_assignment(prof, v) == naive_pairwise(prof, f) == pairwise_exchange(prof, f)


@given(profiles(n=4), st.integers(0, 6), st.integers(0, 6))
def test_linear_closed_form_n4(prof, x, y):
    v = (F(max(x, y), 72), F(min(x, y), 72), F(min(x, y), 144), F(0))
    assert linear_assignment(prof, v) == naive_pairwise(prof, f_from_v(v))


@pytest.mark.parametrize("v", [(F(1, 6), 0, 0), (F(1, 6), F(1, 12), 0), (F(1, 12), F(1, 24), 0)])
def test_linear_bulk_matches_evaluator(v):
    clear_cache()
    mech = linear_mechanism(v)
    T = tabulate(mech, 3)
    for p in range(0, 216, 7):
        assert T.matrix(p) == mech(T.profile(p)).matrix


def test_linear_bulk_rejects_wrong_n():
    with pytest.raises(VectorError):
        linear_mechanism((F(1, 6), 0, 0)).bulk(4)


def test_catalog_names():
    assert [m.name for m in catalog(3)] == [
        "ed", "rsd", "ps", "sd:1,2,3", "linear:(1/6,0,0)", "linear:(1/6,1/12,0)", "linear:(1/12,0,0)"]
    assert [m.name for m in catalog(4)] == ["ed", "rsd", "ps", "sd:1,2,3,4"]


@given(profiles())
def test_every_catalog_output_is_doubly_stochastic(prof):
    for mech in catalog(3):
        P = mech(prof)
        assert all(sum(r) == 1 for r in P)
        assert all(sum(P[i][a] for i in range(3)) == 1 for a in range(3))


def test_tabulation_is_cached_and_keyed_by_evaluator():
    clear_cache()
    a = linear_mechanism((F(1, 6), 0, 0))
    b = linear_mechanism((F(1, 6), 0, 0))
    assert tabulate(a, 3) is tabulate(a, 3)
    assert tabulate(b, 3) is not tabulate(a, 3)
    assert tabulate(a, 3).denom % math.lcm(3, 6) == 0
