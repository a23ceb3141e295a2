"""Named example structures with frozen expected verdicts.

Each entry builds a small semilattice with a contact structure and
carries the verdicts the library is expected to reproduce: axiom
validity, memberships, condition checks, embedding outcomes, expansion
counts.  ``run_catalog_checks`` replays every entry and reports
mismatches; it backs the ``catalog`` harness suite.

``M<r>-D<h>`` names are parametrized: the r-atom modular lattice of
height two with the family generated by the sets of at most h nonzero
elements.  Expected verdicts are recorded for r >= h + 2, where the
bounded and unbounded scans disagree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional

from .conditions import (
    check_additivity,
    check_condition_6_1,
    check_m1,
    check_m1_restricted,
)
from .contacts import (
    Multicontact,
    WeakContact,
    binary_reduct,
    delta_n,
    largest_multicontact,
    multicontact_from_family,
    overlap_multicontact,
    overlap_weak_contact,
    smallest_multicontact,
    validate_multicontact,
    validate_weak_contact,
    weak_contact_additive,
    weak_contact_from_pairs,
)
from .embedding import canonical_embedding
from .order import JoinSemilattice, StructureError, catalog, submasks


@dataclass(frozen=True)
class CatalogStructures:
    semilattice: JoinSemilattice
    multicontact: Optional[Multicontact] = None
    weakcontact: Optional[WeakContact] = None


@dataclass(frozen=True)
class CatalogCheck:
    kind: str
    expected: object
    params: tuple = ()


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    summary: str
    build: Callable[[], CatalogStructures]
    checks: tuple[CatalogCheck, ...]
    guard: int = 4  # nonzero-carrier bound used by expansion checks
    contact_kind: Optional[str] = None  # how the family is written in DSL form


def _b2_overlap() -> CatalogStructures:
    s = catalog("boolean", 2)
    return CatalogStructures(s, overlap_multicontact(s.poset))


def _b2_full() -> CatalogStructures:
    s = catalog("boolean", 2)
    fam = list(submasks(s.poset.nonzero_mask))
    return CatalogStructures(s, multicontact_from_family(s.poset, fam, tag="full"))


def _m3_overlap() -> CatalogStructures:
    s = catalog("M", 3)
    return CatalogStructures(s, overlap_multicontact(s.poset))


def _m3_delta() -> CatalogStructures:
    s = catalog("M", 3)
    i = s.poset.index
    wc = weak_contact_from_pairs(s.poset, [(i("a"), i("b")), (i("a"), i("c"))])
    return CatalogStructures(s, weakcontact=wc)


def _m4_smallest() -> CatalogStructures:
    s = catalog("M", 4)
    pairs = [(x, y) for x in range(1, s.n) for y in range(x, s.n)]
    wc = weak_contact_from_pairs(s.poset, pairs, close=False)
    return CatalogStructures(s, smallest_multicontact(wc), wc)


def _n5_overlap() -> CatalogStructures:
    s = catalog("N5")
    return CatalogStructures(s, overlap_multicontact(s.poset),
                             overlap_weak_contact(s.poset))


def _b8_largest() -> CatalogStructures:
    s = catalog("boolean", 3)
    wc = overlap_weak_contact(s.poset)
    return CatalogStructures(s, largest_multicontact(wc), wc)


def _b8_partial() -> CatalogStructures:
    s = catalog("boolean", 3)
    i = s.poset.index
    drop = {frozenset((i("a1"), i("a3"))), frozenset((i("a2"), i("a3")))}
    nz = [x for x in range(s.n) if x != s.poset.zero]
    pairs = [(x, y) for k, x in enumerate(nz) for y in nz[k:]
             if frozenset((x, y)) not in drop]
    return CatalogStructures(
        s, weakcontact=weak_contact_from_pairs(s.poset, pairs, close=False))


def _mr_dh(r: int, h: int) -> Callable[[], CatalogStructures]:
    def build() -> CatalogStructures:
        s = catalog("M", r)
        return CatalogStructures(s, delta_n(s.poset, h))
    return build


def _B(kind: str, expected: object, *params) -> CatalogCheck:
    return CatalogCheck(kind, expected, tuple(params))


_ENTRIES: dict[str, CatalogEntry] = {}


def _register(entry: CatalogEntry) -> None:
    _ENTRIES[entry.name] = entry


_register(CatalogEntry(
    "B2-overlap",
    "four-element Boolean lattice with the overlap family",
    _b2_overlap,
    (_B("mc-valid", True),
     _B("member", False, "a", "b"),
     _B("additive", True),
     _B("m1", True),
     _B("overlap-embeds", True),
     _B("smallest-embeds", True)),
    contact_kind="overlap"))

_register(CatalogEntry(
    "B2-full",
    "four-element Boolean lattice with every nonzero subset a member",
    _b2_full,
    (_B("mc-valid", True),
     _B("member", True, "a", "b"),
     _B("additive", True),
     _B("m1", True),
     _B("overlap-embeds", True),
     _B("smallest-embeds", True)),
    contact_kind="explicit"))

_register(CatalogEntry(
    "M3-overlap",
    "height-two modular lattice with three atoms, overlap family; "
    "additivity and the m1 condition both fail",
    _m3_overlap,
    (_B("mc-valid", True),
     _B("member", False, "a", "b"),
     _B("member", True, "a", "1"),
     _B("additive", False),
     _B("m1", False),
     _B("condition-6.1-mc", True),
     _B("overlap-embeds", False),
     _B("smallest-embeds", False)),
    contact_kind="overlap"))

_register(CatalogEntry(
    "M3-delta",
    "three-atom modular lattice; a touches b and c but b and c stay "
    "apart; the single expansion fails the m1 condition",
    _m3_delta,
    (_B("wc-valid", True),
     _B("weak-additive", True),
     _B("expansion-count", 1),
     _B("expansions-m1", False),
     _B("expansions-additive", True))))

_register(CatalogEntry(
    "M4-smallest",
    "four-atom modular lattice, two-witness family of the all-pairs "
    "relation; the relation is additive but the family is not",
    _m4_smallest,
    (_B("mc-valid", True),
     _B("wc-valid", True),
     _B("weak-additive", True),
     _B("member", True, "a1", "a2", "1"),
     _B("member", False, "a1", "a2", "a3"),
     _B("additive", False),
     _B("m1", False),
     _B("reduct-roundtrip", True),
     _B("overlap-embeds", False),
     _B("smallest-embeds", False)),
    contact_kind="smallest-of"))

_register(CatalogEntry(
    "N5-overlap",
    "five-element non-modular lattice with the overlap family; the "
    "modular-embedding necessary condition fails",
    _n5_overlap,
    (_B("mc-valid", True),
     _B("wc-valid", True),
     _B("additive", True),
     _B("m1", False),
     _B("condition-6.1-mc", False),
     _B("condition-6.1-wc", False),
     _B("overlap-embeds", False),
     _B("smallest-embeds", False)),
    contact_kind="overlap"))

_register(CatalogEntry(
    "B8-largest",
    "eight-element Boolean lattice, pairwise-overlap family; the three "
    "coatoms are a member though their meet is zero, so additivity "
    "fails while the m1 condition holds",
    _b8_largest,
    (_B("mc-valid", True),
     _B("wc-valid", True),
     _B("weak-additive", True),
     _B("member", True, "c1", "c2", "c3"),
     _B("additive", False),
     _B("m1", True),
     _B("overlap-embeds", False),
     _B("smallest-embeds", True)),
    guard=7, contact_kind="largest-of"))

_register(CatalogEntry(
    "B8-partial",
    "eight-element Boolean lattice; the third atom stays apart from the "
    "other two; every expansion satisfies m1, none is additive",
    _b8_partial,
    (_B("wc-valid", True),
     _B("expansion-count", 1),
     _B("expansions-m1", True),
     _B("expansions-additive", False)),
    guard=7))


_PARAM_RE = re.compile(r"^M(\d+)-D(\d+)$")


def _mr_dh_entry(r: int, h: int) -> CatalogEntry:
    if h < 1:
        raise StructureError("the cardinality bound must be at least 1")
    if r < h + 2:
        raise StructureError(
            f"M{r}-D{h}: expected verdicts are recorded only for at least "
            f"{h + 2} atoms, where the bounded scan at {h} disagrees with "
            f"the full one")
    return CatalogEntry(
        f"M{r}-D{h}",
        f"modular lattice with {r} atoms, family generated by the sets "
        f"of at most {h} nonzero elements; the scan bounded at {h} "
        f"passes while the full one fails",
        _mr_dh(r, h),
        (_B("mc-valid", True),
         _B("m1-restricted", True, h),
         _B("m1", False),
         _B("additive", False),
         _B("overlap-embeds", False),
         _B("smallest-embeds", False)),
        guard=r, contact_kind=f"cardinality:{h}")


CATALOG_CONTACT_NAMES = tuple(sorted(_ENTRIES)) + ("M4-D2", "M5-D3")


def catalog_entries() -> tuple[CatalogEntry, ...]:
    """The fixed entries, sorted by name.  Parametrized M<r>-D<h> entries
    exist for every r >= h+2 and come from :func:`resolve_catalog`."""
    return tuple(_ENTRIES[k] for k in sorted(_ENTRIES))


def resolve_catalog(name: str) -> CatalogEntry:
    """Look up a named entry; M<r>-D<h> names are built on demand."""
    if name in _ENTRIES:
        return _ENTRIES[name]
    m = _PARAM_RE.match(name)
    if m:
        return _mr_dh_entry(int(m.group(1)), int(m.group(2)))
    raise StructureError(
        f"unknown catalog entry {name!r}; known: "
        f"{', '.join(CATALOG_CONTACT_NAMES)} and M<r>-D<h> with r >= h+2")


def _actual(entry: CatalogEntry, st: CatalogStructures, check: CatalogCheck):
    s, mc, wc = st.semilattice, st.multicontact, st.weakcontact
    kind = check.kind
    if kind == "mc-valid":
        return validate_multicontact(mc).ok
    if kind == "wc-valid":
        return validate_weak_contact(wc).ok
    if kind == "member":
        return mc.contains(check.params)
    if kind == "additive":
        return check_additivity(s, mc).verdict
    if kind == "m1":
        return check_m1(s, mc).verdict
    if kind == "m1-restricted":
        return check_m1_restricted(s, mc, check.params[0]).verdict
    if kind == "condition-6.1-mc":
        return check_condition_6_1(s, mc).verdict
    if kind == "condition-6.1-wc":
        return check_condition_6_1(s, wc).verdict
    if kind == "weak-additive":
        return weak_contact_additive(wc, s).verdict
    if kind == "overlap-embeds":
        return canonical_embedding(s, mc, "overlap").verify().is_embedding
    if kind == "smallest-embeds":
        return canonical_embedding(s, mc, "smallest").verify().is_embedding
    if kind == "reduct-roundtrip":
        return binary_reduct(mc).rel == wc.rel
    from .explorer import expansions
    if kind == "expansion-count":
        return sum(1 for _ in expansions(wc, guard=entry.guard))
    if kind == "expansions-m1":
        return _uniform(entry, st, lambda e: check_m1(s, e).verdict)
    if kind == "expansions-additive":
        return _uniform(entry, st, lambda e: check_additivity(s, e).verdict)
    raise StructureError(f"unknown catalog check {kind!r}")


def _uniform(entry: CatalogEntry, st: CatalogStructures,
             probe: Callable[[Multicontact], bool]):
    """The probe's verdict when it agrees on every expansion, else "mixed"."""
    from .explorer import expansions
    verdicts = {probe(e) for e in expansions(st.weakcontact, guard=entry.guard)}
    return verdicts.pop() if len(verdicts) == 1 else "mixed"


def evaluate_entry(entry: CatalogEntry) -> list[dict]:
    st = entry.build()
    out = []
    for check in entry.checks:
        got = _actual(entry, st, check)
        if got != check.expected:
            out.append({"entry": entry.name, "check": check.kind,
                        "params": list(check.params),
                        "expected": check.expected, "got": got})
    return out


def run_catalog_checks(jobs: int = 1) -> tuple[int, list[dict]]:
    """Replay every recorded verdict; returns (checks run, mismatches)."""
    from .explorer import _map_ordered
    names = CATALOG_CONTACT_NAMES
    results = _map_ordered([resolve_catalog(n) for n in names],
                           evaluate_entry, jobs)
    examined = sum(len(resolve_catalog(n).checks) for n in names)
    discrepancies = [d for part in results for d in part]
    return examined, discrepancies
