"""Shared fixtures and definitional oracles.

The oracles re-derive results by brute force straight from the
definitions, independently of the library's hull- and bitmask-based
kernels, so agreement is meaningful.
"""

from __future__ import annotations

import pytest
from hypothesis import assume
from hypothesis import strategies as st

from mcsl.order import (
    JoinSemilattice,
    Poset,
    StructureError,
    bits,
    catalog,
    poset_from_relation,
    semilattice_from_poset,
    submasks,
)


# -- definitional oracles ------------------------------------------------------


def closure_fixpoint(p: Poset, seeds) -> frozenset[int]:
    """Least family containing all nonzero singletons and the seed masks,
    closed under element deletion and under adding a dominating element.
    Pure fixpoint iteration; no hull shortcuts."""
    fam = {0} | {1 << x for x in bits(p.nonzero_mask)} | {m for m in seeds}
    changed = True
    while changed:
        changed = False
        for f in list(fam):
            for x in bits(f):
                down = f ^ (1 << x)
                if down not in fam:
                    fam.add(down)
                    changed = True
                for b in bits(p.up[x]):
                    upf = f | (1 << b)
                    if upf not in fam:
                        fam.add(upf)
                        changed = True
    return frozenset(fam)


def family_satisfies_axioms(p: Poset, fam: frozenset[int]) -> bool:
    """Direct definitional test: nonzero singletons present, closed under
    element deletion and under adding dominating elements."""
    for x in bits(p.nonzero_mask):
        if (1 << x) not in fam:
            return False
    for f in fam:
        for x in bits(f):
            if f ^ (1 << x) not in fam:
                return False
            for b in bits(p.up[x]):
                if f | (1 << b) not in fam:
                    return False
    return True


def brute_force_multicontacts(p: Poset) -> list[frozenset[int]]:
    """Every multicontact family on ``p`` by filtering all subset
    families; exponential in 2^(nonzero count), so keep bases tiny."""
    nz_sets = [m for m in submasks(p.nonzero_mask) if m]
    out = []
    for pick in submasks((1 << len(nz_sets)) - 1):
        fam = frozenset({nz_sets[i] for i in bits(pick)} | {0})
        if family_satisfies_axioms(p, fam):
            out.append(fam)
    return out


def brute_force_weak_contacts(p: Poset) -> list[frozenset[tuple[int, int]]]:
    """Every weak contact on ``p`` by filtering all symmetric relations
    on nonzero elements for reflexivity and raising closure."""
    nz = list(bits(p.nonzero_mask))
    free = [(a, b) for a in nz for b in nz if a < b]
    out = []
    for pick in submasks((1 << len(free)) - 1):
        rel = {(a, a) for a in nz} | {pr for i in bits(pick)
                                      for pr in (free[i], free[i][::-1])}
        ok = True
        for a, b in list(rel):
            for c in bits(p.up[b]):
                if c != p.zero and (a, c) not in rel:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(frozenset(pr for pr in rel if pr[0] <= pr[1]))
    return out


# -- hypothesis strategies -----------------------------------------------------


@st.composite
def posets_with_zero(draw, max_n: int = 5) -> Poset:
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(0, i) for i in range(1, n)]
    for lo in range(1, n):
        for hi in range(lo + 1, n):
            if draw(st.booleans()):
                pairs.append((lo, hi))
    return poset_from_relation(n, pairs)


@st.composite
def semilattices(draw, max_n: int = 5) -> JoinSemilattice:
    p = draw(posets_with_zero(max_n))
    try:
        return semilattice_from_poset(p)
    except StructureError:
        pass
    # glue a top above everything; pairs whose minimal upper bounds were
    # already ambiguous stay ambiguous, so reject those draws
    up = tuple(row | 1 << p.n for row in p.up) + ((1 << p.n),)
    q = Poset(p.n + 1, up, p.zero, p.labels + (f"e{p.n}",))
    try:
        return semilattice_from_poset(q)
    except StructureError:
        assume(False)


@st.composite
def families_on(draw, s: JoinSemilattice):
    """A random multicontact family on a fixed carrier, through closure."""
    nz_sets = [m for m in submasks(s.nonzero_mask) if m]
    seeds = (draw(st.lists(st.sampled_from(nz_sets), max_size=4))
             if nz_sets else [])
    return closure_fixpoint(s.poset, seeds)


# -- fixtures -------------------------------------------------------------------


@pytest.fixture(scope="session")
def b2() -> JoinSemilattice:
    return catalog("boolean", 2)


@pytest.fixture(scope="session")
def b3() -> JoinSemilattice:
    return catalog("boolean", 3)


@pytest.fixture(scope="session")
def m3() -> JoinSemilattice:
    return catalog("M", 3)


@pytest.fixture(scope="session")
def m4() -> JoinSemilattice:
    return catalog("M", 4)


@pytest.fixture(scope="session")
def n5() -> JoinSemilattice:
    return catalog("N5")


@pytest.fixture(scope="session")
def chain4() -> JoinSemilattice:
    return catalog("chain", 4)
