"""Multicontact constructions, weak contacts, pre-closures, event structures."""

import pytest
from hypothesis import given, settings

from mcsl.contacts import (
    EventStructure,
    Multicontact,
    PreClosure,
    antichain_generators,
    atom_generated,
    binary_reduct,
    delta_n,
    dominates,
    event_structure_to_poset,
    generate_multicontact,
    is_antichain,
    largest_multicontact,
    multicontact_from_family,
    multicontact_from_oracle,
    overlap_multicontact,
    overlap_weak_contact,
    poset_to_event_structure,
    preclosure_multicontact,
    reduced_antichain_generators,
    smallest_multicontact,
    topological_multicontact,
    validate_event_structure,
    validate_multicontact,
    validate_weak_contact,
    weak_contact_from_pairs,
)
from mcsl.order import (
    StructureError,
    bits,
    catalog,
    mask_of,
    poset_from_relation,
    submasks,
)

from conftest import closure_fixpoint, families_on, semilattices


def _mask(p, *labels):
    return mask_of(p.index(x) for x in labels)


# -- membership conventions ------------------------------------------------------


def test_empty_set_is_member_and_zero_sets_are_not(b2):
    d = overlap_multicontact(b2.poset)
    assert d.member(0)
    assert not d.member(1 << b2.zero)
    assert not d.member(b2.full_mask)
    assert d.contains(["a", "1"])
    assert not d.contains(["a", "b"])


def test_member_accepts_iterables(b2):
    d = overlap_multicontact(b2.poset)
    a = b2.poset.index("a")
    assert d.member([a]) and d.member((a,))
    with pytest.raises(StructureError):
        d.member([99])


def test_equality_is_extensional(b2):
    p = b2.poset
    d1 = overlap_multicontact(p)
    d2 = multicontact_from_family(p, d1.sorted_family)
    assert d1 == d2
    assert d1 != delta_n(p, 2)


# -- overlap -----------------------------------------------------------------------


def test_overlap_family_on_b2(b2):
    p = b2.poset
    d = overlap_multicontact(p)
    got = {p.label_set(m) for m in d.sorted_family if m}
    # every nonzero subset except {a,b} and {a,b,1}
    assert got == {"{a}", "{b}", "{1}", "{a,1}", "{b,1}"}
    assert not d.member(_mask(p, "a", "b"))
    assert not d.member(_mask(p, "a", "b", "1"))
    assert validate_multicontact(d).ok


def test_overlap_matches_common_lower_bound_definition(m3):
    p = m3.poset
    d = overlap_multicontact(p)
    for f in submasks(p.nonzero_mask):
        expected = f == 0 or any(
            all(p.leq(x, y) for y in bits(f)) for x in bits(p.nonzero_mask))
        assert d.member(f) == expected


# -- generated closure ---------------------------------------------------------------


def test_generate_equals_definitional_fixpoint(m3, n5):
    for s in (m3, n5):
        p = s.poset
        nz = [m for m in submasks(p.nonzero_mask) if m]
        seeds = [nz[1] | nz[0], p.nonzero_mask ^ (p.nonzero_mask & -p.nonzero_mask)]
        d = generate_multicontact(p, seeds)
        assert d.family == closure_fixpoint(p, seeds)
        assert validate_multicontact(d).ok


def test_generate_is_least(b2):
    p = b2.poset
    ab = _mask(p, "a", "b")
    d = generate_multicontact(p, [ab])
    assert d.member(ab)
    assert d.generators == (ab,)
    # least: any multicontact containing the generators contains the closure
    full = multicontact_from_family(
        p, [m for m in submasks(p.nonzero_mask) if m])
    assert d.family <= full.family


def test_generate_rejects_zero_in_generator(b2):
    with pytest.raises(StructureError, match="zero"):
        generate_multicontact(b2.poset, [{b2.zero, b2.poset.index("a")}])


def test_generate_nothing_gives_overlap_only_when_order_forces_it(chain4):
    # on a chain every nonzero subset has a least element, so the empty
    # generating set already yields the overlap family
    p = chain4.poset
    assert generate_multicontact(p, []) == overlap_multicontact(p)


# -- cardinality bound ----------------------------------------------------------------


def test_delta_n_on_m4(m4):
    p = m4.poset
    d2 = delta_n(p, 2)
    a = [p.index(f"a{i}") for i in (1, 2, 3, 4)]
    assert d2.member(mask_of(a[:2]))
    assert not d2.member(mask_of(a[:3]))  # three atoms need three witnesses
    assert d2.member(mask_of(a[:2]) | (1 << p.top))  # the top rides along
    d3 = delta_n(p, 3)
    assert d3.member(mask_of(a[:3]))
    assert not d3.member(mask_of(a))
    for d in (d2, d3):
        assert validate_multicontact(d).ok


def test_delta_n_definition_direct(m4):
    # F is a member iff some <= n nonzero elements dominate it from below
    import itertools
    p = m4.poset
    n = 2
    d = delta_n(p, n)
    nz = list(bits(p.nonzero_mask))
    for f in submasks(p.nonzero_mask):
        expected = f == 0 or any(
            all(any(p.leq(c, y) for c in combo) for y in bits(f))
            for size in range(1, n + 1)
            for combo in itertools.combinations(nz, size))
        assert d.member(f) == expected


def test_delta_n_rejects_bad_bound(b2):
    with pytest.raises(StructureError):
        delta_n(b2.poset, 0)


# -- explicit families and validation ---------------------------------------------------


def test_validation_witnesses_name_the_violation(b2):
    p = b2.poset
    a, b, one = p.index("a"), p.index("b"), p.index("1")
    # missing subset {a}
    d = multicontact_from_family(p, [(1 << a) | (1 << b), 1 << b, 1 << one])
    rep = validate_multicontact(d)
    assert not rep.ok
    failed = {c.axiom for c in rep.failures()}
    assert "Sub" in failed or "Ref" in failed
    sub = next(c for c in rep.checks if c.axiom == "Sub")
    if not sub.ok:
        assert d.member(sub.witness["set"])
        assert not d.member(sub.witness["missing"])


def test_validation_catches_mon_violation(b2):
    p = b2.poset
    fam = [m for m in submasks(p.nonzero_mask) if m
           and m != _mask(p, "a", "1")]
    d = multicontact_from_family(p, fam)
    rep = validate_multicontact(d)
    assert not rep.ok
    mon = next(c for c in rep.checks if c.axiom == "Mon")
    assert not mon.ok


def test_validation_emp_from_raw_family(b2):
    p = b2.poset
    d = multicontact_from_family(p, [1 << p.zero, 1 << p.index("a")])
    emp = next(c for c in validate_multicontact(d).checks if c.axiom == "Emp")
    assert not emp.ok


def test_oracle_wrapper_rejects_nothing_up_front(b2):
    d = multicontact_from_oracle(b2.poset, lambda m: True, tag="everything")
    assert validate_multicontact(d).ok


# -- weak contacts ----------------------------------------------------------------------


def test_weak_contact_from_pairs_closes(m3):
    p = m3.poset
    a, b, one = p.index("a"), p.index("b"), p.index("1")
    w = weak_contact_from_pairs(p, [(a, b)])
    assert w.related(a, b) and w.related(b, a)
    assert w.related(a, one)  # raised
    assert w.related(a, a)    # reflexive on nonzero
    assert validate_weak_contact(w).ok


def test_weak_contact_explicit_validates(m3):
    p = m3.poset
    a, b = p.index("a"), p.index("b")
    with pytest.raises(StructureError):
        # not closed under raising b to 1
        weak_contact_from_pairs(
            p, [(x, x) for x in bits(p.nonzero_mask)] + [(a, b)], close=False)


def test_overlap_weak_contact_is_binary_reduct_of_overlap(n5):
    p = n5.poset
    assert overlap_weak_contact(p).rel == binary_reduct(overlap_multicontact(p)).rel


def test_largest_and_smallest_sandwich(m3):
    p = m3.poset
    a, b, c = p.index("a"), p.index("b"), p.index("c")
    w = weak_contact_from_pairs(p, [(a, b), (a, c)])
    lo, hi = smallest_multicontact(w), largest_multicontact(w)
    assert validate_multicontact(lo).ok and validate_multicontact(hi).ok
    assert lo.family <= hi.family
    assert binary_reduct(lo).rel == w.rel == binary_reduct(hi).rel
    # {a,b,c} is pairwise related through a only in the largest
    abc = mask_of([a, b, c])
    assert not hi.member(abc)  # b and c are unrelated
    w_all = weak_contact_from_pairs(p, [(a, b), (a, c), (b, c)])
    assert largest_multicontact(w_all).member(abc)
    assert not smallest_multicontact(w_all).member(abc)


def test_smallest_needs_two_witnesses(m4):
    p = m4.poset
    atoms_ = [p.index(f"a{i}") for i in (1, 2, 3, 4)]
    w = weak_contact_from_pairs(p, [(x, y) for x in atoms_ for y in atoms_])
    d = smallest_multicontact(w)
    assert d.member(mask_of(atoms_[:2]) | (1 << p.top))
    assert not d.member(mask_of(atoms_[:3]))


# -- atom-generated -----------------------------------------------------------------------


def test_atom_generated_on_b3(b3):
    p = b3.poset
    a1, a2, a3 = (p.index(f"a{i}") for i in (1, 2, 3))
    fam = [set(), {a1}, {a2}, {a3}, {a1, a2}]
    d = atom_generated(b3, fam)
    assert validate_multicontact(d).ok
    assert d.member({a1, a2})
    assert d.contains(["a1", "c3"])            # c3 = a1+a2 dominates a2
    assert not d.contains(["a1", "a2", "a3"])  # a3 is above neither listed atom
    assert not d.member({a1, a3})              # {a1,a3} was not listed


def test_atom_generated_input_validation(b3):
    p = b3.poset
    a1, a2, a3 = (p.index(f"a{i}") for i in (1, 2, 3))
    singles = [set(), {a1}, {a2}, {a3}]
    with pytest.raises(StructureError, match="non-atom"):
        atom_generated(b3, singles + [{p.index("c1")}])
    with pytest.raises(StructureError, match="misses the singleton"):
        atom_generated(b3, [set(), {a1}, {a2}])
    with pytest.raises(StructureError, match="subset-closed"):
        atom_generated(b3, singles + [{a1, a2, a3}])


# -- pre-closures ---------------------------------------------------------------------------


def test_preclosure_validation(chain4):
    p = chain4.poset
    ident = PreClosure(p, tuple(range(p.n)))
    assert ident.is_extensive and ident.is_idempotent
    assert ident.is_additive(chain4)
    with pytest.raises(StructureError, match="zero"):
        PreClosure(p, (1,) + tuple(range(1, p.n)))
    with pytest.raises(StructureError, match="isotone"):
        PreClosure(p, (0, p.n - 1) + tuple(1 for _ in range(2, p.n)))


def test_preclosure_multicontact_on_chain(chain4):
    s = chain4
    p = s.poset
    # k maps everything nonzero up to the top: weakly extensive, additive
    top = p.n - 1
    k = PreClosure(p, (0,) + tuple(top for _ in range(1, p.n)))
    assert k.is_weakly_extensive and k.is_additive(s)
    d = preclosure_multicontact(k)
    assert validate_multicontact(d).ok
    # all images share the top, so every nonzero-subset is a member
    assert d.member(p.nonzero_mask)


def test_preclosure_multicontact_requires_weak_extensivity(chain4):
    p = chain4.poset
    # collapse the two lowest nonzero elements to zero: isotone and
    # zero-fixed, but not weakly extensive
    k = PreClosure(p, (0, 0, 0, p.n - 1))
    assert not k.is_weakly_extensive
    with pytest.raises(StructureError, match="extensiv"):
        preclosure_multicontact(k)


def test_atom_swap_preclosure_is_weakly_extensive(b2):
    # weak extensivity asks only that nonzero elements stay nonzero
    p = b2.poset
    a, b = p.index("a"), p.index("b")
    k = PreClosure(p, (0, b, a, p.index("1")))
    assert k.is_weakly_extensive and not k.is_extensive
    d = preclosure_multicontact(k)
    assert validate_multicontact(d).ok
    # a and b map to each other, so their images overlap at nothing: the
    # pair {a,b} has images {b,a} with no common nonzero lower bound
    assert not d.member(mask_of([a, b]))
    assert d.member(mask_of([a]))


# -- topological ------------------------------------------------------------------------------


def test_topological_multicontact_discrete():
    s, d = topological_multicontact({"p": ["p"], "q": ["q"]})
    assert validate_multicontact(d).ok
    p_, q_ = s.poset.index("p"), s.poset.index("q")
    assert d.member([p_])
    assert not d.member([p_, q_])  # disjoint closures never meet
    assert d.member([s.poset.index("p+q"), p_])


def test_topological_multicontact_specialization():
    # closure of q contains p: the sets {p} and {q} touch through q's closure
    s, d = topological_multicontact({"p": ["p"], "q": ["p", "q"]})
    p_, q_ = s.poset.index("p"), s.poset.index("q")
    assert d.member([p_, q_])
    assert validate_multicontact(d).ok


def test_topological_rejects_bad_closures():
    with pytest.raises(StructureError):
        topological_multicontact({"p": ["q"], "q": ["q"]})  # p not in cl(p)
    with pytest.raises(StructureError):
        topological_multicontact({"p": ["p", "zz"]})


# -- event structures ---------------------------------------------------------------------------


def _three_event_structure():
    # x <= y causally; consistency: subsets of {x, y} plus {z}
    labels = ("x", "y", "z")
    order = (0b011, 0b010, 0b100)
    con = frozenset({0, 0b001, 0b010, 0b100, 0b011})
    return EventStructure(labels, order, con)


def test_event_structure_validates():
    e = _three_event_structure()
    assert validate_event_structure(e).ok


def test_event_structure_rejects_inconsistent_families():
    labels = ("x", "y")
    order = (0b11, 0b10)
    # {y} consistent but its causal predecessor x cannot join: Mon fails
    bad = EventStructure(labels, order, frozenset({0, 0b01, 0b10}))
    rep = validate_event_structure(bad)
    assert not rep.ok
    assert {c.axiom for c in rep.failures()} == {"predecessor-closed"}


def test_event_structure_poset_round_trip():
    e = _three_event_structure()
    p, d = event_structure_to_poset(e)
    assert p.n == e.n + 1
    assert validate_multicontact(d).ok
    # order is reversed: x <= y causally means y below x in the poset
    x, y = p.index("x"), p.index("y")
    assert p.leq(y, x)
    back = poset_to_event_structure(p, d)
    assert back == e


def test_event_structure_label_zero_collision():
    e = EventStructure(("0",), (0b1,), frozenset({0, 1}))
    with pytest.raises(StructureError, match="0"):
        event_structure_to_poset(e)


# -- antichain helpers -----------------------------------------------------------------------------


def test_antichain_and_domination(n5):
    p = n5.poset
    a, b, d_ = p.index("a"), p.index("b"), p.index("d")
    assert is_antichain(p, mask_of([a, d_]))
    assert not is_antichain(p, mask_of([a, b]))
    # every element of {b,d} is above some element of {a,d}
    assert dominates(p, mask_of([a, d_]), mask_of([b, d_]))
    assert not dominates(p, mask_of([b, d_]), mask_of([a, d_]))


def test_antichain_generators_regenerate(m3):
    p = m3.poset
    d = overlap_multicontact(p)
    gens = antichain_generators(d)
    assert all(is_antichain(p, g) for g in gens)
    assert generate_multicontact(p, gens) == d
    reduced = reduced_antichain_generators(d)
    assert set(reduced) <= set(gens)
    assert generate_multicontact(p, reduced) == d
    # the top's singleton is dominated by each atom's singleton
    assert len(reduced) < len(gens)


# -- properties -------------------------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(semilattices(max_n=4).flatmap(
    lambda s: families_on(s).map(lambda fam: (s, fam))))
def test_random_closures_satisfy_axioms(pair):
    s, fam = pair
    d = multicontact_from_family(s.poset, [m for m in fam if m])
    assert validate_multicontact(d).ok


@settings(max_examples=40, deadline=None)
@given(semilattices(max_n=4))
def test_constructions_always_validate(s):
    p = s.poset
    assert validate_multicontact(overlap_multicontact(p)).ok
    assert validate_multicontact(delta_n(p, 2)).ok
    w = overlap_weak_contact(p)
    assert validate_multicontact(largest_multicontact(w)).ok
    assert validate_multicontact(smallest_multicontact(w)).ok


@settings(max_examples=40, deadline=None)
@given(semilattices(max_n=4))
def test_sandwich_property_for_overlap(s):
    p = s.poset
    w = overlap_weak_contact(p)
    lo, hi = smallest_multicontact(w), largest_multicontact(w)
    assert lo.family <= overlap_multicontact(p).family <= hi.family
