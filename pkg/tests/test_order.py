"""Posets, join semilattices, structural predicates, and the base catalog."""

import pytest
from hypothesis import given, settings

from mcsl.order import (
    GuardError,
    JoinSemilattice,
    Poset,
    StructureError,
    atoms,
    bits,
    catalog,
    mask_of,
    poset_from_relation,
    powerset_semilattice,
    semilattice_from_poset,
    structural_predicates,
    submasks,
)

from conftest import posets_with_zero, semilattices


# -- bit utilities -------------------------------------------------------------


def test_bits_and_mask_of_are_inverse():
    assert list(bits(0b101101)) == [0, 2, 3, 5]
    assert mask_of([0, 2, 3, 5]) == 0b101101
    assert mask_of([3, 3, 3]) == 0b1000  # duplicates collapse


def test_submasks_ascending_and_complete():
    subs = list(submasks(0b1010))
    assert subs == sorted(subs)
    assert set(subs) == {0, 0b0010, 0b1000, 0b1010}
    assert list(submasks(0)) == [0]


# -- poset construction ---------------------------------------------------------


def test_poset_from_relation_closes_transitively():
    p = poset_from_relation(4, [(0, 1), (1, 2), (2, 3)])
    assert p.leq(0, 3) and p.leq(1, 3)
    assert p.covers == ((0, 1), (1, 2), (2, 3))


def test_poset_rejects_cycles_and_missing_zero():
    with pytest.raises(StructureError, match="cycle"):
        poset_from_relation(3, [(0, 1), (1, 2), (2, 1)])
    with pytest.raises(StructureError, match="least"):
        poset_from_relation(2, [])


def test_poset_zero_hint_checked():
    with pytest.raises(StructureError, match="not the least"):
        poset_from_relation(2, [(0, 1)], zero_hint=1)
    assert poset_from_relation(2, [(0, 1)], zero_hint=0).zero == 0


def test_poset_rejects_duplicate_labels():
    with pytest.raises(StructureError, match="unique"):
        poset_from_relation(2, [(0, 1)], labels=["x", "x"])


def test_poset_guard():
    with pytest.raises(GuardError):
        poset_from_relation(40, [(0, i) for i in range(1, 40)], guard=16)


def test_poset_queries(b2):
    p = b2.poset
    a, b, one = p.index("a"), p.index("b"), p.index("1")
    assert p.lt(a, one) and not p.lt(a, a)
    assert p.top == one
    assert p.down[a] == (1 << p.zero) | (1 << a)
    assert p.label_set((1 << a) | (1 << b)) == "{a,b}"
    with pytest.raises(StructureError, match="unknown element"):
        p.index("zz")


def test_poset_permuted_preserves_order(b2):
    p = b2.poset
    perm = [1, 0, 3, 2]
    q = p.permuted(perm)
    for i in range(p.n):
        for j in range(p.n):
            assert p.leq(i, j) == q.leq(perm[i], perm[j])
    assert q.labels[perm[0]] == p.labels[0]


# -- join semilattices -----------------------------------------------------------


def test_semilattice_join_table(b2):
    a, b, one = (b2.poset.index(x) for x in "ab1")
    assert b2.join_of(a, b) == one
    assert b2.join_of(a, b2.zero) == a
    assert b2.join_mask(0) == b2.zero
    assert b2.join_mask((1 << a) | (1 << b)) == one


def test_semilattice_rejects_joinless_poset():
    # two incomparable maxima: {a, b} has no upper bound
    p = poset_from_relation(3, [(0, 1), (0, 2)])
    with pytest.raises(StructureError, match="no upper bound"):
        semilattice_from_poset(p)


def test_semilattice_rejects_ambiguous_join():
    # a, b below both c, d: upper bounds exist, least one does not
    p = poset_from_relation(5, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4)])
    with pytest.raises(StructureError, match="no least upper bound"):
        semilattice_from_poset(p)


def test_join_table_validated():
    p = poset_from_relation(2, [(0, 1)])
    with pytest.raises(StructureError, match="least upper bound"):
        JoinSemilattice(p, ((0, 1), (1, 0)))


def test_meet_mask(m3, b2):
    a, b = m3.poset.index("a"), m3.poset.index("b")
    assert m3.meet_mask((1 << a) | (1 << b)) == m3.zero
    assert b2.meet_mask(1 << b2.poset.index("a")) == b2.poset.index("a")
    with pytest.raises(StructureError):
        b2.meet_mask(0)


# -- structural predicates --------------------------------------------------------


def test_predicates_on_catalog(b2, b3, m3, n5):
    assert structural_predicates(b2).is_distributive_lattice
    assert structural_predicates(b3).is_distributive_lattice
    f_m3 = structural_predicates(m3)
    assert f_m3.is_modular_lattice and not f_m3.is_distributive_lattice
    # b and c both meet a at zero, yet b+c is the top, which meets a at a
    assert not f_m3.is_semidistributive_at_zero
    f_n5 = structural_predicates(n5)
    assert f_n5.is_lattice and not f_n5.is_modular_lattice
    # for each r only one nonzero element meets r at zero, so the
    # semidistributive-at-zero premises never combine two of them
    assert f_n5.is_semidistributive_at_zero


def test_distributive_implies_modular_and_sd0(b3):
    f = structural_predicates(b3)
    assert f.is_modular_lattice and f.is_semidistributive_at_zero
    assert f.is_distributive_join_semilattice


@settings(max_examples=40, deadline=None)
@given(semilattices(max_n=5))
def test_finite_join_semilattice_with_zero_is_lattice(s):
    # the meet is the join of all common lower bounds, which exists here
    assert s.is_lattice
    for a in range(s.n):
        for b in range(s.n):
            assert s.meet_mask((1 << a) | (1 << b)) is not None


def test_atoms(b3, n5):
    summary = atoms(b3)
    assert {b3.labels[i] for i in summary.atoms} == {"a1", "a2", "a3"}
    assert summary.atomic
    s5 = atoms(n5)
    assert {n5.labels[i] for i in s5.atoms} == {"a", "d"}
    assert s5.atomic  # b is above a, 1 above both


# -- catalog --------------------------------------------------------------------


def test_catalog_names_and_shapes():
    assert catalog("chain", 3).n == 3
    assert catalog("boolean", 3).n == 8
    assert catalog("M", 5).n == 7
    assert catalog("N5").n == 5
    assert catalog("powerset", 3).n == 8
    prod = catalog("product", 2, 3)
    assert prod.n == 6 and prod.top is not None
    with pytest.raises(StructureError):
        catalog("nonesuch")


def test_powerset_semilattice_is_boolean():
    s = powerset_semilattice(("p", "q"))
    assert s.n == 4
    flags = structural_predicates(s)
    assert flags.is_distributive_lattice
    p, q = s.poset.index("p"), s.poset.index("q")
    assert s.labels[s.join_of(p, q)] == "p+q"
    with pytest.raises(StructureError, match="collides"):
        powerset_semilattice(("0", "x"))


def test_boolean_three_coatom_labels(b3):
    # each coatom is the join of the two other atoms
    idx = b3.poset.index
    assert b3.join_of(idx("a1"), idx("a2")) == idx("c3")
    assert b3.join_of(idx("a1"), idx("a3")) == idx("c2")
    assert b3.join_of(idx("a2"), idx("a3")) == idx("c1")


# -- properties -----------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(posets_with_zero(max_n=5))
def test_random_posets_validate(p):
    assert p.up[p.zero] == p.full_mask
    for i in range(p.n):
        for j in bits(p.up[i]):
            assert not p.up[j] & ~p.up[i]  # transitive
            assert i == j or not p.up[j] >> i & 1  # antisymmetric


@settings(max_examples=60, deadline=None)
@given(semilattices(max_n=5))
def test_random_semilattice_join_is_lub(s):
    for a in range(s.n):
        for b in range(s.n):
            j = s.join_of(a, b)
            assert s.leq(a, j) and s.leq(b, j)
            for u in bits(s.poset.up[a] & s.poset.up[b]):
                assert s.leq(j, u)
