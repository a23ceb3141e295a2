"""Decision procedures: additivity, the cancellation conditions, the
row-system claim, and witness replay.

Frozen verdicts on the named structures were established against the
definitional oracles in conftest before being asserted here; the replay
helper re-derives every false verdict from its witness alone.
"""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcsl.conditions import (
    ConditionReport,
    check_additivity,
    check_claim_3_3,
    check_condition_6_1,
    check_m1,
    check_m1_plus,
    check_m1_restricted,
    check_m2,
    derived_m1_plus,
    derived_m2,
    replay,
    row_system,
)
from mcsl.contacts import (
    Multicontact,
    delta_n,
    multicontact_from_family,
    overlap_multicontact,
    overlap_weak_contact,
    weak_contact_additive,
    weak_contact_from_pairs,
)
from mcsl.order import GuardError, StructureError, bits, catalog, mask_of, submasks

from conftest import brute_force_multicontacts, families_on, semilattices


def full_family(s):
    fam = list(submasks(s.poset.nonzero_mask))
    return multicontact_from_family(s.poset, fam, tag="full")


# -- frozen verdicts ------------------------------------------------------------


def test_b2_full_satisfies_everything(b2):
    d = full_family(b2)
    assert check_additivity(b2, d).verdict
    assert check_m1(b2, d).verdict
    assert check_m1_plus(b2, d, 2).verdict
    assert check_m2(b2, d, 2).verdict
    assert check_condition_6_1(b2, d).verdict


def test_n5_overlap_is_additive_but_fails_m1(n5):
    d = overlap_multicontact(n5.poset)
    assert check_additivity(n5, d).verdict
    assert not check_m1(n5, d).verdict
    assert not check_condition_6_1(n5, d).verdict


def test_n5_condition_6_1_fails_in_both_readings(n5):
    mc = overlap_multicontact(n5.poset)
    wc = overlap_weak_contact(n5.poset)
    r_mc = check_condition_6_1(n5, mc)
    r_wc = check_condition_6_1(n5, wc)
    assert not r_mc.verdict and not r_wc.verdict
    assert replay(n5, mc, r_mc)
    assert replay(n5, wc, r_wc)


def test_m3_overlap_fails_additivity_and_m1(m3):
    d = overlap_multicontact(m3.poset)
    r_add = check_additivity(m3, d)
    r_m1 = check_m1(m3, d)
    assert not r_add.verdict and not r_m1.verdict
    # but the necessary modularity condition holds on this modular lattice
    assert check_condition_6_1(m3, d).verdict


def test_m3_additivity_witness_is_the_atom_split(m3):
    d = overlap_multicontact(m3.poset)
    w = check_additivity(m3, d).witness
    p, q, rest = w["p"], w["q"], w["rest"]
    # the join of two distinct atoms is the top, which overlaps everything
    assert m3.join_of(p, q) == m3.poset.top
    assert d.member(1 << m3.join_of(p, q) | rest)
    assert not d.member(1 << p | rest) and not d.member(1 << q | rest)


def test_cardinality_bounded_scan_disagrees_with_full_scan():
    for r, h in ((4, 2), (5, 3)):
        s = catalog("M", r)
        d = delta_n(s.poset, h)
        bounded = check_m1_restricted(s, d, h)
        assert bounded.verdict
        assert bounded.condition == "m1-restricted"
        assert bounded.mode == "bounded" and bounded.bounds == {"set_size": h}
        assert not check_m1(s, d).verdict
        assert not check_additivity(s, d).verdict


# -- witness replay -------------------------------------------------------------


def test_replay_reproduces_every_false_verdict(m3, m4, n5):
    cases = []
    d3 = overlap_multicontact(m3.poset)
    cases.append((m3, d3, check_additivity(m3, d3)))
    cases.append((m3, d3, check_m1(m3, d3)))
    cases.append((m3, d3, check_m1_plus(m3, d3, 2)))
    cases.append((m3, d3, check_m2(m3, d3, 2)))
    cases.append((m3, d3, derived_m1_plus(m3, d3)))
    cases.append((m3, d3, derived_m2(m3, d3)))
    d5 = overlap_multicontact(n5.poset)
    cases.append((n5, d5, check_m1(n5, d5)))
    cases.append((n5, d5, check_condition_6_1(n5, d5)))
    d4 = delta_n(m4.poset, 2)
    cases.append((m4, d4, check_m1(m4, d4)))
    cases.append((m4, d4, check_m1_restricted(m4, d4, 3)))
    for s, d, report in cases:
        assert not report.verdict, report.condition
        assert replay(s, d, report), (report.condition, report.witness)


def test_replay_rejects_true_reports(b2):
    d = full_family(b2)
    with pytest.raises(StructureError, match="false reports"):
        replay(b2, d, check_additivity(b2, d))


def test_replay_rejects_unknown_conditions(b2):
    d = full_family(b2)
    bogus = ConditionReport("no-such-condition", False, {"a": 1})
    with pytest.raises(StructureError, match="unknown condition"):
        replay(b2, d, bogus)


def test_replay_weak_additivity_witness(m4):
    # the two-witness family of the all-pairs relation is not additive,
    # but the relation itself is; build a relation that is not
    i = m4.poset.index
    wc = weak_contact_from_pairs(
        m4.poset, [(i("a1"), i("a2"))])
    report = weak_contact_additive(wc, m4)
    assert not report.verdict
    assert replay(m4, wc, report)


def test_weak_contact_additive_on_reflexive_closure(m3):
    wc = overlap_weak_contact(m3.poset)
    assert weak_contact_additive(wc, m3).verdict is False
    # overlap on a Boolean lattice is additive in the binary reading
    s = catalog("boolean", 2)
    assert weak_contact_additive(overlap_weak_contact(s.poset), s).verdict


# -- derived checkers against bounded scans -------------------------------------


def enumerate_small_families(s):
    return [multicontact_from_family(s.poset, fam)
            for fam in brute_force_multicontacts(s.poset)]


@pytest.mark.parametrize("name,params", [
    ("chain", (3,)), ("boolean", (2,)), ("M", (3,)), ("N5", ())])
def test_m1_plus_rows_equivalent_to_m1_on_all_families(name, params):
    s = catalog(name, *params)
    for d in enumerate_small_families(s):
        m1 = check_m1(s, d).verdict
        for rows in (1, 2):
            assert check_m1_plus(s, d, rows).verdict == m1
        derived = derived_m1_plus(s, d)
        assert derived.verdict == m1
        assert derived.mode == "derived-complete"


@pytest.mark.parametrize("name,params", [
    ("chain", (3,)), ("boolean", (2,)), ("M", (3,)), ("N5", ())])
def test_m2_rows_equivalent_to_additivity_on_all_families(name, params):
    s = catalog(name, *params)
    for d in enumerate_small_families(s):
        add = check_additivity(s, d).verdict
        for rows in (2, 3):
            assert check_m2(s, d, rows).verdict == add
        derived = derived_m2(s, d)
        assert derived.verdict == add
        assert derived.mode == "derived-complete"


def test_derived_m1_plus_wraps_the_m1_witness(n5):
    d = overlap_multicontact(n5.poset)
    base = check_m1(n5, d)
    derived = derived_m1_plus(n5, d)
    assert derived.witness["a"] == base.witness["a"]
    assert derived.witness["b"] == base.witness["b"]
    assert derived.witness["rows"] == (base.witness["set"],)
    assert replay(n5, d, derived)


# -- the row-system claim -------------------------------------------------------


def test_row_system_constructor_validates(m3):
    d = overlap_multicontact(m3.poset)
    a, b, c = (m3.poset.index(x) for x in "abc")
    rs = row_system(d, [{a, b}, [a, c]])
    assert rs.rows == (mask_of([a, b]), mask_of([a, c]))
    with pytest.raises(StructureError, match="nonempty"):
        row_system(d, [0])
    with pytest.raises(StructureError, match="non-members"):
        row_system(d, [m3.poset.up[a]])  # {a, 1} overlaps at a


def test_claim_holds_on_every_system_of_an_additive_family(n5):
    d = overlap_multicontact(n5.poset)
    assert check_additivity(n5, d).verdict
    nz_sets = [m for m in submasks(n5.nonzero_mask) if m]
    for k in (1, 2):
        for rows in itertools.combinations_with_replacement(nz_sets, k):
            assert check_claim_3_3(n5, d, rows).equivalent


def test_claim_fails_without_additivity(m3):
    d = overlap_multicontact(m3.poset)
    i = m3.poset.index
    a, b, c = i("a"), i("b"), i("c")
    rows = [mask_of([a, b]), mask_of([a, c])]
    report = check_claim_3_3(m3, d, rows)
    # neither row is a member, yet every selection sum is a or the top,
    # and {a, 1} overlaps at a
    assert not report.some_row_member
    assert report.selection_sums_member
    assert not report.equivalent
    assert report.selection_sums == (1 << a) | (1 << m3.poset.top)


def test_claim_accepts_row_system_objects(n5):
    d = overlap_multicontact(n5.poset)
    a = n5.poset.index("a")
    rs = row_system(d, [{a, n5.poset.index("d")}])
    assert check_claim_3_3(n5, d, rs).equivalent


def test_claim_rejects_empty_and_zero_rows(n5):
    d = overlap_multicontact(n5.poset)
    with pytest.raises(StructureError, match="nonempty"):
        check_claim_3_3(n5, d, [])
    with pytest.raises(StructureError, match="nonempty"):
        check_claim_3_3(n5, d, [0])


# -- input validation and guards ------------------------------------------------


def test_bound_validation(b2):
    d = full_family(b2)
    with pytest.raises(StructureError, match="at least 1"):
        check_m1_restricted(b2, d, 0)
    with pytest.raises(StructureError, match="at least 1"):
        check_m1_plus(b2, d, 0)
    with pytest.raises(StructureError, match="at least 2"):
        check_m2(b2, d, 1)


def test_base_mismatch_is_rejected(b2, m3):
    d = overlap_multicontact(m3.poset)
    for checker in (check_additivity, check_m1):
        with pytest.raises(StructureError, match="different carriers"):
            checker(b2, d)
    with pytest.raises(StructureError, match="different carriers"):
        check_condition_6_1(b2, d)
    with pytest.raises(StructureError, match="different carriers"):
        check_condition_6_1(b2, overlap_weak_contact(m3.poset))
    with pytest.raises(StructureError, match="different carriers"):
        check_claim_3_3(b2, d, [1 << m3.poset.index("a")])


def test_carrier_guard_fires(m3):
    d = overlap_multicontact(m3.poset)
    with pytest.raises(GuardError, match="guard"):
        check_additivity(m3, d, guard=3)
    with pytest.raises(GuardError, match="guard"):
        check_m1(m3, d, guard=3)
    # an explicit larger guard lets the same call through
    assert check_additivity(m3, d, guard=5).verdict is False


# -- report shape ---------------------------------------------------------------


def test_report_modes_and_bounds(b2, m3):
    d = overlap_multicontact(m3.poset)
    assert check_additivity(m3, d).mode == "exact"
    assert check_m1(m3, d).mode == "exact"
    bounded = check_m1_plus(m3, d, 2)
    assert bounded.mode == "bounded" and bounded.bounds == {"rows": 2}
    bounded2 = check_m2(m3, d, 3)
    assert bounded2.mode == "bounded" and bounded2.bounds == {"rows": 3}
    assert derived_m1_plus(m3, d).bounds is None
    full = full_family(b2)
    assert check_m1_plus(b2, full, 2).verdict
    assert check_m1_plus(b2, full, 2).witness is None


def test_m2_witness_names_a_member_target(m3):
    d = overlap_multicontact(m3.poset)
    report = check_m2(m3, d, 2)
    assert not report.verdict
    assert d.member(report.witness["target"])
    assert all(not d.member(r) for r in report.witness["rows"])


# -- property tests -------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_random_families_equate_bounded_and_derived(data):
    s = data.draw(semilattices(max_n=4))
    d = multicontact_from_family(s.poset, data.draw(families_on(s)))
    assert check_m1_plus(s, d, 2).verdict == check_m1(s, d).verdict
    assert check_m2(s, d, 2).verdict == check_additivity(s, d).verdict


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_random_families_replay_their_witnesses(m3, data):
    fam = data.draw(families_on(m3))
    d = multicontact_from_family(m3.poset, fam)
    for checker in (check_additivity, check_m1):
        report = checker(m3, d)
        if not report.verdict:
            assert replay(m3, d, report)
