import pytest
from pydantic import ValidationError

from arith import FactoredInteger, factor
from exceptions import DomainError
from selmer import (
    PHIHAT_OFFSET_NOTE,
    BsdSet,
    Coverage,
    Family,
    FamilyTag,
    SelmerProfile,
    Verdict,
    analyze,
    bsd_status,
    classify_family,
    selmer_profile,
    selmer_sizes_1mod8,
    selmer_sizes_5mod8,
    selmer_trivial_2mod8,
    selmer_trivial_3mod8,
)


@pytest.mark.parametrize(
    "n, family, verdict",
    [
        (6, Family.HEEGNER, Verdict.CONGRUENT),
        (102, Family.MONSKY, Verdict.CONGRUENT),
        (238, Family.MONSKY, Verdict.CONGRUENT),
        (57, Family.ISKRA, Verdict.NON_CONGRUENT),
        (3, Family.ISKRA, Verdict.NON_CONGRUENT),
        (2091, Family.LAGRANGE, Verdict.NON_CONGRUENT),
        (15, Family.NONE, Verdict.UNKNOWN),
    ],
)
def test_family_spot_checks(sieve, n, family, verdict):
    tag = analyze(n, sieve).family
    assert tag.family == family
    assert tag.verdict == verdict


@pytest.mark.parametrize("n, coverage", [(3, Coverage.THM_2_4), (51, Coverage.THM_2_4), (10, Coverage.THM_2_6), (2091, Coverage.THM_2_4)])
def test_certified_non_congruent(sieve, n, coverage):
    profile = analyze(n, sieve).profile
    assert profile.coverage == coverage
    assert profile.rank_upper_bound == 0
    assert profile.non_congruent_certified
    assert (profile.s_phi, profile.s_phihat) == (0, 0)


def test_heegner_number_is_not_certified(sieve):
    profile = analyze(6, sieve).profile
    assert profile.coverage == Coverage.THM_2_6
    assert profile.rank_upper_bound is None
    assert not profile.non_congruent_certified


def test_bsd_d1_verified(sieve):
    report = analyze(697, sieve)
    assert report.profile.coverage == Coverage.FJ_CASE_2
    assert (report.profile.s_phi, report.profile.s_phihat) == (2, 0)
    assert report.profile.rank_upper_bound == 2
    assert report.bsd.set == BsdSet.D1
    assert report.bsd.verified
    assert report.bsd.delta == 1


def test_bsd_d1_member_not_verified(sieve):
    bsd = analyze(1241, sieve).bsd
    assert bsd.set == BsdSet.D1
    assert bsd.graph_odd
    assert bsd.delta == 0
    assert not bsd.verified


def test_bsd_b3_and_b2(sieve):
    b3 = bsd_status(factor(51, sieve))
    assert b3.set == BsdSet.B3 and b3.verified
    b2 = bsd_status(factor(10, sieve))
    assert b2.set == BsdSet.B2 and b2.verified
    unverified = bsd_status(factor(34, sieve))
    assert unverified.set == BsdSet.B2
    assert not unverified.verified
    assert unverified.graph_odd is False
    assert bsd_status(factor(15, sieve)).set == BsdSet.NONE


def test_two_is_not_a_b2_member(sieve):
    status = bsd_status(factor(2, sieve))
    assert status.set == BsdSet.NONE
    assert not status.verified


def test_sizes_5_mod_8(sieve):
    profile = selmer_sizes_5mod8(factor(205, sieve))
    assert profile.coverage == Coverage.FJ_CASE_1
    assert profile.phi_size_log2 == 2
    assert profile.phihat_size_log2 == 3
    assert profile.s_phihat == 1
    assert PHIHAT_OFFSET_NOTE in profile.notes
    assert selmer_sizes_5mod8(factor(5, sieve)).rank_upper_bound == 1


def test_sizes_outside_hypotheses_stay_absent(sieve):
    assert selmer_sizes_5mod8(factor(65, sieve)).coverage == Coverage.NOT_COVERED
    assert selmer_sizes_1mod8(factor(65, sieve)).phi_size_log2 is None
    profile = selmer_profile(factor(15, sieve))
    assert profile.coverage == Coverage.NOT_COVERED
    assert profile.s_phi is None and profile.rank_upper_bound is None


def test_trivial_3_mod_8_applicability(sieve):
    assert not selmer_trivial_3mod8(factor(7, sieve)).applicable
    check = selmer_trivial_3mod8(factor(5, sieve))
    assert check.applicable and check.trivial is False and not check.pattern_holds
    check = selmer_trivial_3mod8(factor(51, sieve))
    assert check.pattern_holds and check.trivial
    with pytest.raises(DomainError):
        selmer_trivial_3mod8(factor(6, sieve))


def test_trivial_2_mod_8_needs_prime_5_mod_8(sieve):
    check = selmer_trivial_2mod8(factor(6, sieve))
    assert check.graph_odd
    assert check.trivial is False
    assert not check.all_odd_primes_1mod4
    assert selmer_trivial_2mod8(factor(10, sieve)).trivial
    with pytest.raises(DomainError):
        selmer_trivial_2mod8(factor(5, sieve))


def test_profile_invariants_enforced(sieve):
    n = factor(5, sieve)
    with pytest.raises(ValidationError):
        SelmerProfile(n=n, phi_size_log2=1, phihat_size_log2=2, s_phi=1, s_phihat=2, coverage=Coverage.FJ_CASE_1)
    with pytest.raises(ValidationError):
        SelmerProfile(n=n, phi_size_log2=1, s_phi=1)
    with pytest.raises(ValidationError):
        FamilyTag(family=Family.HEEGNER, verdict=Verdict.NON_CONGRUENT)


def test_classify_family_direct(sieve):
    assert classify_family(factor(2091, sieve)).family == Family.LAGRANGE
    assert classify_family(factor(697, sieve)).family == Family.NONE


def test_analysis_document(sieve):
    document = analyze(697, sieve).to_document()
    assert document["factors"] == [17, 41]
    assert document["coverage"] == "FJ_CASE_2"
    assert document["family"] == {"family": "NONE", "verdict": "UNKNOWN"}
    assert document["bsd"]["set"] == "D1"
    assert [graph["kind"] for graph in document["graphs"]] == ["G", "G_NEG"]
    assert list(document) == [
        "n", "factors", "residue_mod8", "phi_size_log2", "phihat_size_log2", "s_phi", "s_phihat",
        "rank_upper_bound", "non_congruent_certified", "coverage", "family", "bsd", "notes", "graphs",
    ]
    assert document["bsd"] == {"set": "D1", "verified": True, "graph_odd": True, "delta": 1}
    assert document["notes"] == [PHIHAT_OFFSET_NOTE]


def test_non_squarefree_document(sieve):
    document = analyze(12, sieve).to_document()
    assert document == {"n": 12, "squarefree": False, "repeated_prime": 2, "residue_mod8": 4}


def test_selmer_exponents_consistent_over_covered_n(sieve):
    covered = {Coverage.FJ_CASE_1: 0, Coverage.FJ_CASE_2: 0}
    for value in range(3, 100_000, 2):
        n = factor(value, sieve)
        if not isinstance(n, FactoredInteger):
            continue
        profile = selmer_profile(n)
        if profile.coverage == Coverage.FJ_CASE_1:
            assert profile.phihat_size_log2 == profile.phi_size_log2 + 1, value
        elif profile.coverage == Coverage.FJ_CASE_2:
            assert profile.phihat_size_log2 == profile.phi_size_log2, value
        else:
            continue
        covered[profile.coverage] += 1
        assert profile.s_phihat >= 0
        status = bsd_status(n)
        if status.set == BsdSet.D1 and status.verified:
            assert (profile.s_phi, profile.s_phihat) == (2, 0), value
    assert all(covered.values())


def test_family_never_contradicts_certificate(sieve):
    for value in range(2, 50_000):
        n = factor(value, sieve)
        if not isinstance(n, FactoredInteger):
            continue
        tag = classify_family(n)
        if selmer_profile(n).non_congruent_certified:
            assert tag.verdict != Verdict.CONGRUENT, value
