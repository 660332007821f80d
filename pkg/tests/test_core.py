from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from randassign.core import (Assignment, AssignmentError, Profile, ProfileError,
                             all_preferences, enumerate_profiles, format_rational, invert,
                             is_doubly_stochastic, make_profile, neighbors, parse_profile,
                             parse_rational, permute_agents, permute_objects,
                             profile_from_index, rank_of, sd_compare, sigma, upper_contour)

F = Fraction


def prefs3():
    return st.sampled_from(all_preferences(3))


def profiles(n=3):
    return st.tuples(*[st.sampled_from(all_preferences(n))] * n).map(Profile)


def test_parse_profile_first_appearance_order():
    prof = parse_profile("n 3\n1: x z y\n2: y x z\n3: z y x\n")
    assert prof.objects == ("x", "z", "y")
    assert prof[0] == (0, 1, 2)
    assert prof[1] == (2, 0, 1)


def test_parse_profile_ignores_comments_and_blank_lines():
    text = "# market\nn 3\n\n1: a b c\n2: b a c\n# tail\n3: c a b\n"
    assert parse_profile(text) == make_profile("abc", "bac", "cab")


@pytest.mark.parametrize("text, message", [
    ("", "empty"),
    ("m 3\n", "expected 'n <int>'"),
    ("n 2\n1: a b\n2: b a\n", "n must be >= 3"),
    ("n 3\n1: a b c\n2: a b c\n", "expected 3 preference lines"),
    ("n 3\n1: a b c\n2: a b\n3: a b c\n", "expected 3 objects"),
    ("n 3\n1: a b c\n2: a a c\n3: a b c\n", "duplicate object"),
    ("n 3\n1: a b c\n2: a b d\n3: a b c\n", "unknown object"),
    ("n 3\n1 a b c\n2: a b c\n3: a b c\n", "expected '<agent>: <objects>'"),
])
def test_parse_profile_errors(text, message):
    with pytest.raises(ProfileError, match=message):
        parse_profile(text)


def test_profile_to_text_roundtrip():
    prof = make_profile("bca", "abc", "cab")
    back = parse_profile(prof.to_text())
    assert back.objects == ("b", "c", "a")
    assert str(back) == str(prof)


def test_small_n_rejected():
    with pytest.raises(ProfileError):
        Profile(((0, 1), (1, 0)))
    with pytest.raises(ProfileError):
        list(enumerate_profiles(2))


def test_enumeration_count_and_cap():
    assert sum(1 for _ in enumerate_profiles(3)) == 216
    with pytest.raises(ValueError, match="cap"):
        next(enumerate_profiles(5))


def test_enumeration_order_is_mixed_radix():
    for k, prof in enumerate(enumerate_profiles(3)):
        assert prof.index() == k
        if k > 40:
            break
    assert profile_from_index(3, 215).prefs == ((2, 1, 0),) * 3


@given(st.integers(0, 215))
def test_index_roundtrip(k):
    assert profile_from_index(3, k).index() == k


def test_rank_sigma_and_contours():
    pref = (2, 0, 1)
    assert [rank_of(pref, a) for a in range(3)] == [2, 3, 1]
    assert sigma(pref, 1) == 2
    assert upper_contour(pref, 0) == frozenset({2, 0})
    assert upper_contour(pref, 1) == frozenset({0, 1, 2})
    assert neighbors((0, 1, 2)) == [(1, 0, 2), (0, 2, 1)]


@given(profiles(), prefs3(), prefs3())
def test_object_relabelings_compose(prof, pi, rho):
    once = permute_objects(permute_objects(prof, pi), rho)
    assert once == permute_objects(prof, tuple(rho[pi[a]] for a in range(3)))
    assert permute_objects(permute_objects(prof, pi), invert(pi)) == prof


@given(profiles(), prefs3())
def test_agent_permutation_inverse(prof, s):
    assert permute_agents(permute_agents(prof, s), invert(s)) == prof


def test_sd_compare():
    pref = (0, 1, 2)
    assert sd_compare((F(1, 2), F(1, 2), 0), (F(1, 2), 0, F(1, 2)), pref) == (True, True)
    assert sd_compare((F(1, 3),) * 3, (F(1, 3),) * 3, pref) == (True, False)
    assert sd_compare((0, 1, 0), (F(1, 2), 0, F(1, 2)), pref) == (False, False)
    with pytest.raises(ValueError):
        sd_compare((1, 1, 0), (1, 0, 0), pref)


@given(st.lists(st.integers(0, 6), min_size=3, max_size=3),
       st.lists(st.integers(0, 6), min_size=3, max_size=3), prefs3())
def test_sd_compare_is_prefix_order(x, y, pref):
    if not sum(x) or not sum(y):
        return
    p = [F(v, sum(x)) for v in x]
    q = [F(v, sum(y)) for v in y]
    dom, strict = sd_compare(p, q, pref)
    sums = [(sum(p[a] for a in pref[:t]), sum(q[a] for a in pref[:t])) for t in range(1, 4)]
    assert dom == all(a >= b for a, b in sums)
    assert strict == (dom and any(a > b for a, b in sums))
    back, _ = sd_compare(q, p, pref)
    assert not (strict and back)


def test_rationals():
    assert format_rational(F(2, 4)) == "1/2"
    assert format_rational(F(3)) == "3"
    assert parse_rational(" 5/12 ") == F(5, 12)
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("half")


def test_assignment_validation_and_tsv():
    P = Assignment.uniform(3)
    assert P.to_tsv(("x", "y", "z")).splitlines() == [
        "\tx\ty\tz", "1\t1/3\t1/3\t1/3", "2\t1/3\t1/3\t1/3", "3\t1/3\t1/3\t1/3"]
    assert Assignment.from_permutation((1, 2, 0))[0] == (0, 1, 0)
    with pytest.raises(AssignmentError, match="row 1"):
        Assignment(((1, 1, 0), (0, 0, 1), (0, 0, 0)))
    with pytest.raises(AssignmentError, match="column"):
        Assignment(((1, 0, 0), (1, 0, 0), (0, 0, 1)))
    with pytest.raises(AssignmentError, match="outside"):
        Assignment(((2, -1, 0), (0, 1, 0), (-1, 1, 1)))
    assert is_doubly_stochastic(P.matrix)
    assert not is_doubly_stochastic(((1, 0, 0), (1, 0, 0), (0, 0, 1)))
