from fractions import Fraction

import pytest

from randassign.certify import BudgetError, encode_axioms, lp_solve
from randassign.certify.symmetry import group_elements, quotient
from randassign.certify.theorems import (PROFILE_C_TARGET, SIX_PROFILES, block_leakage,
                                         certify_strong_hardness, certify_theorem1,
                                         derive_profile_c, family_profile,
                                         rsd_full_allocation, six_profiles, write_certificate)
from randassign.core import Assignment, enumerate_profiles, make_profile
from randassign.mechanisms import RSD, linear_mechanism

F = Fraction


def test_contention_free_profile_forces_identity():
    prof = make_profile("abc", "bac", "cab")
    sys = encode_axioms([prof], ["EF", "CFE"])
    cert = lp_solve(sys)
    assert cert.kind == "feasible"
    assert sys.values(cert.point, prof) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_encoding_rejects_bad_input():
    with pytest.raises(ValueError, match="unknown axioms"):
        encode_axioms([make_profile("abc", "abc", "abc")], ["IR"])
    with pytest.raises(BudgetError):
        encode_axioms(six_profiles().values(), ["SP"], budget=10)
    with pytest.raises(ValueError, match="no profiles"):
        encode_axioms([], ["SP"])


def test_neutral_closure():
    sys = encode_axioms([make_profile("abc", "abc", "bca")], ["NEUTRAL"])
    assert sys.closure_size == 6


def test_six_profiles():
    profs = six_profiles()
    assert list(profs) == list(SIX_PROFILES) == list("ABCDEF")
    assert str(profs["C"]) == "1: a b c; 2: a c b; 3: c a b"


@pytest.fixture(scope="module")
def impossibility():
    return certify_theorem1()


def test_six_profile_certificate(impossibility, tmp_path):
    assert impossibility.holds
    cert = impossibility.certificate
    cert.verify(impossibility.system)
    assert cert.delta > 0
    assert set(impossibility.dropped) == {"SP", "EF", "CFE"}
    for ax, c in impossibility.dropped.items():
        assert c.kind == "feasible", ax
    path = write_certificate(cert, tmp_path / "t1.cert.txt", "header line")
    text = path.read_text()
    assert text.startswith("# header line\n") and "certificate: infeasible" in text


def test_full_domain_certificate(impossibility):
    full = impossibility.full
    assert full.kind == "infeasible"
    full.verify(full.system)
    assert len(full.system) == 216 * 9
    assert "all 216 profiles" in impossibility.text()


def test_quotient_partitions_the_full_domain():
    full = encode_axioms(enumerate_profiles(3), ["SP", "EF", "CFE"])
    q = quotient(full, group_elements(3))
    assert len(q.reduced) == 63
    assert sum(len(o) for o in q.orbits) == len(full)


def test_quotient_point_lifts_to_a_feasible_point():
    full = encode_axioms(enumerate_profiles(3), ["SP", "EF"])
    q = quotient(full, group_elements(3))
    cert = lp_solve(q.reduced)
    assert cert.kind == "feasible"
    point = q.lift_point(cert.point)
    x = [point[name] for name in full.names]
    for r in full.all_rows():
        assert (r.value(x) == r.rhs) if r.sense == "eq" else r.value(x) <= r.rhs


def test_profile_c():
    rep = derive_profile_c()
    assert rep.assignment == Assignment(PROFILE_C_TARGET)
    assert [list(r) for r in rep.assignment] == [
        [F(1, 2), F(1, 2), 0], [F(1, 2), F(1, 4), F(1, 4)], [0, F(1, 4), F(3, 4)]]
    assert rep.step_interval == (0, F(1, 2))
    assert rep.tight_interval == (F(1, 4), F(1, 3))
    for cert in rep.certificates:
        cert.verify(cert.system)
    assert "[0, 1/2]" in rep.text() and "[1/4, 1/3]" in rep.text()


def test_rsd_reaches_one_without_envy_freeness():
    m = rsd_full_allocation()
    assert m.value == 1
    assert str(m.profile) == "1: a b c; 2: a b c; 3: c a b"
    assert (m.agent, m.obj) == (2, 2)
    m.certificate.verify(m.certificate.system)


def test_strong_hardness_respects_budget():
    rep = certify_strong_hardness(budget_seconds=0)
    assert not rep.complete and not rep.all_below_one
    assert "budget exhausted" in rep.text()


def test_without_neutrality_is_labelled():
    rep = certify_strong_hardness(budget_seconds=0, axioms=("SP", "EF"))
    assert not rep.theorem_configuration
    assert "non-theorem configuration" in rep.text()


def test_family_profiles():
    p = family_profile(4, ["a1 a2 a3", "a2 a1 a3", "a3 a1 a2"])
    assert p.objects == ("a1", "a2", "a3", "a4")
    assert p[3] == (3, 0, 1, 2)
    assert p[1] == (1, 0, 2, 3)
    q = family_profile(5, [(0, 1, 2)] * 3)
    assert q[4] == (4, 0, 1, 2, 3)
    assert q[3] == (3, 4, 0, 1, 2)
    for bad in ([(0, 1, 2)] * 2, [(0, 1, 3)] * 3, ["a1 a2 a4"] * 3):
        with pytest.raises(ValueError):
            family_profile(4, bad)
    with pytest.raises(ValueError):
        family_profile(3, [(0, 1, 2)] * 3)


def test_block_leakage():
    p = family_profile(4, [(0, 1, 2)] * 3)
    leak = block_leakage(linear_mechanism((F(1, 12), 0, 0, 0))(p))
    assert leak and all(j == 3 for _, j in leak)
    assert block_leakage(RSD(p)) == {}
