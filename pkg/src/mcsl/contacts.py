"""Multicontact families, weak contacts, pre-closures and event structures.

A multicontact on a poset with zero is a family of finite subsets of
nonzero elements that contains every singleton, is closed under subsets,
and is closed under adding elements that dominate a member's element.
Membership here is an oracle over subset masks; two conventions are
baked into the oracle wrapper: the empty set is always a member, and any
set containing zero never is.

Every construction in this module returns a structure that satisfies
the axioms by design; :func:`validate_multicontact` re-checks any
family, explicit or oracle-backed, and reports per-axiom witnesses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from .order import (
    GuardError,
    JoinSemilattice,
    Poset,
    StructureError,
    atoms,
    bits,
    check_guard,
    mask_of,
    powerset_semilattice,
    submasks,
)

MATERIALIZE_GUARD = 20   # max nonzero elements for family materialization
POINT_GUARD = 4          # max points for powerset-of-a-space constructions


def _as_mask(base: Poset, elems: int | Iterable[int]) -> int:
    mask = elems if isinstance(elems, int) else mask_of(elems)
    if mask & ~base.full_mask or mask < 0:
        raise StructureError("subset mentions elements outside the carrier")
    return mask


@dataclass(frozen=True, eq=False)
class Multicontact:
    """A multicontact family over ``base``, queried through ``member``.

    ``raw_family`` is kept for explicitly listed families so validation
    can see exactly what was declared (including illegal sets that the
    oracle conventions would silently reject).
    """

    base: Poset
    kernel: Callable[[int], bool]
    tag: str = ""
    raw_family: Optional[tuple[int, ...]] = None
    generators: Optional[tuple[int, ...]] = None

    def member(self, mask: int | Iterable[int]) -> bool:
        """Decide membership of a subset of the carrier.

        The empty set is a member by convention; sets containing zero
        are never members.
        """
        mask = _as_mask(self.base, mask)
        if mask == 0:
            return True
        if mask >> self.base.zero & 1:
            return False
        return bool(self.kernel(mask))

    def contains(self, labels: Iterable[str]) -> bool:
        """Label-level membership, for tests and reporting."""
        return self.member(mask_of(self.base.index(x) for x in labels))

    @cached_property
    def family(self) -> frozenset[int]:
        """All member masks over nonzero elements, the empty mask included."""
        nz = self.base.nonzero_mask
        check_guard(nz.bit_count(), MATERIALIZE_GUARD, "nonzero carrier")
        return frozenset(m for m in submasks(nz) if self.member(m))

    @cached_property
    def sorted_family(self) -> tuple[int, ...]:
        return tuple(sorted(self.family))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multicontact):
            return NotImplemented
        return self.base == other.base and self.family == other.family

    def __repr__(self) -> str:
        tag = self.tag or "oracle"
        return f"Multicontact({tag} on {self.base!r})"


def multicontact_from_family(
    base: Poset, sets: Iterable[int | Iterable[int]], tag: str = "explicit"
) -> Multicontact:
    """Wrap an explicitly listed family.  Nothing is closed or repaired;
    run :func:`validate_multicontact` to check the axioms."""
    raw = tuple(sorted({_as_mask(base, s) for s in sets}))
    members = frozenset(raw)
    return Multicontact(base, members.__contains__, tag=tag, raw_family=raw)


def multicontact_from_oracle(base: Poset, fn: Callable[[int], bool],
                             tag: str = "oracle") -> Multicontact:
    return Multicontact(base, fn, tag=tag)


# -- axiom validation ---------------------------------------------------

@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    ok: bool
    witness: Optional[dict] = None


@dataclass(frozen=True)
class ValidationReport:
    structure: str
    checks: tuple[AxiomCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> tuple[AxiomCheck, ...]:
        return tuple(c for c in self.checks if not c.ok)


def _dominated_hull(base: Poset, mask: int) -> int:
    """Everything that dominates some element of ``mask``."""
    out = 0
    for p in bits(mask):
        out |= base.up[p]
    return out


def validate_multicontact(d: Multicontact) -> ValidationReport:
    """Check the defining axioms and the derived closure properties.

    Subset closure is checked through one-element deletions, which is
    complete by induction on the set difference.  Given subset closure,
    closure under domination only needs the full dominated hull of each
    member; the hull equivalence is exact, not a heuristic.
    """
    base = d.base
    fam = d.family
    checks: list[AxiomCheck] = []

    emp_w = None
    if d.raw_family is not None:
        for m in d.raw_family:
            if m >> base.zero & 1:
                emp_w = {"set": m}
                break
    checks.append(AxiomCheck("Emp", emp_w is None, emp_w))

    sub_w = None
    for f in sorted(fam):
        for x in bits(f):
            if f ^ (1 << x) not in fam:
                sub_w = {"set": f, "missing": f ^ (1 << x)}
                break
        if sub_w:
            break
    checks.append(AxiomCheck("Sub", sub_w is None, sub_w))

    mon_w = None
    for f in sorted(fam):
        for a in bits(f):
            for b in bits(base.up[a]):
                if f | (1 << b) not in fam:
                    mon_w = {"set": f, "element": a, "dominating": b}
                    break
            if mon_w:
                break
        if mon_w:
            break
    checks.append(AxiomCheck("Mon", mon_w is None, mon_w))

    ref_w = None
    for p in bits(base.nonzero_mask):
        if (1 << p) not in fam:
            ref_w = {"element": p}
            break
    checks.append(AxiomCheck("Ref", ref_w is None, ref_w))

    ov_w = None
    for p in bits(base.nonzero_mask):
        if base.up[p] not in fam:
            ov_w = {"element": p, "missing": base.up[p]}
            break
    checks.append(AxiomCheck("Ov", ov_w is None, ov_w))

    cof_w = None
    if sub_w is not None:
        cof_w = {"set": sub_w["set"], "missing": sub_w["missing"]}
    else:
        for f in sorted(fam):
            hull = _dominated_hull(base, f)
            if hull not in fam:
                cof_w = {"set": f, "missing": hull}
                break
    checks.append(AxiomCheck("Cof", cof_w is None, cof_w))

    ext_w = None
    for f in sorted(fam):
        for a in bits(f):
            for b in bits(base.up[a]):
                g = (f ^ (1 << a)) | (1 << b)
                if g not in fam:
                    ext_w = {"set": f, "element": a, "replacement": b, "missing": g}
                    break
            if ext_w:
                break
        if ext_w:
            break
    checks.append(AxiomCheck("Ext", ext_w is None, ext_w))

    return ValidationReport(d.tag or "multicontact", tuple(checks))


# -- basic constructions -------------------------------------------------

def overlap_multicontact(p: Poset) -> Multicontact:
    """Members are the sets with a common nonzero lower bound."""
    ups = p.up
    nz = p.nonzero_mask

    def kernel(mask: int) -> bool:
        return any(not mask & ~ups[x] for x in bits(nz))

    return Multicontact(p, kernel, tag="overlap")


def generate_multicontact(p: Poset, generators: Iterable[int | Iterable[int]]
                          ) -> Multicontact:
    """Least multicontact whose members include the generator sets.

    A set belongs to the closure iff some generator or nonzero singleton
    dominates it from below; that single pass is the whole closure
    because domination is transitive and stable under taking subsets.
    """
    gens = tuple(sorted({_as_mask(p, g) for g in generators}))
    for g in gens:
        if g >> p.zero & 1:
            raise StructureError(f"generator {p.label_set(g)} contains the zero element")
    hulls = sorted({_dominated_hull(p, g) for g in gens if g}
                   | {p.up[x] for x in bits(p.nonzero_mask)})

    def kernel(mask: int) -> bool:
        return any(not mask & ~h for h in hulls)

    return Multicontact(p, kernel, tag=f"generated({len(gens)} sets)",
                        generators=gens)


def delta_n(p: Poset, n: int) -> Multicontact:
    """Members are the sets dominated by at most ``n`` nonzero elements."""
    if n < 1:
        raise StructureError("witness bound must be at least 1")
    nz = list(bits(p.nonzero_mask))
    hulls = sorted({_dominated_hull(p, mask_of(c))
                    for size in range(1, n + 1)
                    for c in itertools.combinations(nz, size)})

    def kernel(mask: int) -> bool:
        return any(not mask & ~h for h in hulls)

    return Multicontact(p, kernel, tag=f"cardinality({n})")


# -- weak contacts --------------------------------------------------------

@dataclass(frozen=True)
class WeakContact:
    """A symmetric relation on nonzero elements, reflexive on nonzero
    elements and closed under raising either side."""

    base: Poset
    rel: tuple[int, ...]

    def related(self, a: int, b: int) -> bool:
        return bool(self.rel[a] >> b & 1)

    def related_labels(self, x: str, y: str) -> bool:
        return self.related(self.base.index(x), self.base.index(y))

    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Related unordered pairs (i <= j), sorted."""
        return tuple((i, j) for i in range(self.base.n)
                     for j in bits(self.rel[i]) if j >= i)

    def __repr__(self) -> str:
        return f"WeakContact({len(self.pairs())} pairs on {self.base!r})"


def weak_contact_from_pairs(p: Poset, pairs: Iterable[tuple[int, int]],
                            close: bool = True) -> WeakContact:
    """Build a weak contact from seed pairs.

    With ``close`` the seeds are completed: reflexivity on nonzero
    elements, symmetry, and closure under raising either side.  Without
    it the pairs are taken literally and validated.
    """
    n = p.n
    rel = [0] * n
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise StructureError(f"pair ({a},{b}) outside the carrier")
        if close and p.zero in (a, b):
            raise StructureError("seed pairs may not involve the zero element")
        rel[a] |= 1 << b
        rel[b] |= 1 << a
    if close:
        for x in bits(p.nonzero_mask):
            rel[x] |= 1 << x
        closed = [0] * n
        for a in range(n):
            for b in bits(rel[a]):
                for a1 in bits(p.up[a]):
                    closed[a1] |= p.up[b]
                    for b1 in bits(p.up[b]):
                        closed[b1] |= 1 << a1
        out = WeakContact(p, tuple(closed))
    else:
        out = WeakContact(p, tuple(rel))
        report = validate_weak_contact(out)
        if not report.ok:
            fail = report.failures()[0]
            raise StructureError(f"explicit pairs violate {fail.axiom}: {fail.witness}")
    return out


def validate_weak_contact(d: WeakContact) -> ValidationReport:
    base = d.base
    checks: list[AxiomCheck] = []

    zero_w = None
    zbit = 1 << base.zero
    if d.rel[base.zero] != 0:
        zero_w = {"element": base.zero}
    else:
        for a in range(base.n):
            if d.rel[a] & zbit:
                zero_w = {"element": a}
                break
    checks.append(AxiomCheck("zero-isolated", zero_w is None, zero_w))

    refl_w = None
    for a in bits(base.nonzero_mask):
        if not d.rel[a] >> a & 1:
            refl_w = {"element": a}
            break
    checks.append(AxiomCheck("reflexive", refl_w is None, refl_w))

    sym_w = None
    for a in range(base.n):
        for b in bits(d.rel[a]):
            if not d.rel[b] >> a & 1:
                sym_w = {"pair": (a, b)}
                break
        if sym_w:
            break
    checks.append(AxiomCheck("symmetric", sym_w is None, sym_w))

    ext_w = None
    for a in range(base.n):
        for b in bits(d.rel[a]):
            for a1 in bits(base.up[a]):
                if base.up[b] & ~d.rel[a1]:
                    b1 = next(bits(base.up[b] & ~d.rel[a1]))
                    ext_w = {"pair": (a, b), "raised": (a1, b1)}
                    break
            if ext_w:
                break
        if ext_w:
            break
    checks.append(AxiomCheck("Ext", ext_w is None, ext_w))

    return ValidationReport("weak contact", tuple(checks))


def overlap_weak_contact(p: Poset) -> WeakContact:
    """a related to b iff they have a common nonzero lower bound."""
    down = p.down
    zbit = 1 << p.zero
    rel = tuple(mask_of(b for b in bits(p.nonzero_mask)
                        if down[a] & down[b] & ~zbit)
                if a != p.zero else 0
                for a in range(p.n))
    return WeakContact(p, rel)


def weak_contact_additive(d: WeakContact, s: JoinSemilattice):
    """a related to b+c only when a relates to b or to c; witness otherwise."""
    from .conditions import ConditionReport  # local import to avoid a cycle
    if s.poset != d.base:
        raise StructureError("weak contact and semilattice have different carriers")
    for a in bits(d.base.nonzero_mask):
        for b in range(s.n):
            for c in range(s.n):
                bc = s.join_of(b, c)
                if d.related(a, bc) and not (d.related(a, b) or d.related(a, c)):
                    return ConditionReport(
                        "weak-additivity", False,
                        {"a": a, "b": b, "c": c, "join": bc})
    return ConditionReport("weak-additivity", True, None)


def largest_multicontact(d: WeakContact) -> Multicontact:
    """Largest multicontact with binary reduct ``d``: pairwise related sets."""
    rel = d.rel

    def kernel(mask: int) -> bool:
        ms = list(bits(mask))
        return all(rel[a] >> b & 1 for a in ms for b in ms)

    return Multicontact(d.base, kernel, tag="largest(weak contact)")


def smallest_multicontact(d: WeakContact) -> Multicontact:
    """Smallest multicontact with binary reduct ``d``: sets dominated by a
    related pair (the two witnesses may coincide)."""
    base = d.base
    hulls = sorted({base.up[a] | base.up[b]
                    for a in bits(base.nonzero_mask)
                    for b in bits(d.rel[a])})

    def kernel(mask: int) -> bool:
        return any(not mask & ~h for h in hulls)

    return Multicontact(base, kernel, tag="smallest(weak contact)")


def binary_reduct(d: Multicontact) -> WeakContact:
    """The weak contact of two-element (and singleton) memberships."""
    base = d.base
    rel = [0] * base.n
    for a in bits(base.nonzero_mask):
        for b in bits(base.nonzero_mask):
            if b >= a and d.member((1 << a) | (1 << b)):
                rel[a] |= 1 << b
                rel[b] |= 1 << a
    return WeakContact(base, tuple(rel))


# -- atom-generated families ----------------------------------------------

def atom_generated(s: JoinSemilattice, delta_a: Iterable[int | Iterable[int]]
                   ) -> Multicontact:
    """Lift a family of atom sets to the whole carrier: a set belongs iff
    some listed atom set has, below every element, at least one atom.

    Requires an atomic carrier; ``delta_a`` must contain every atom
    singleton and be subset-closed.
    """
    summary = atoms(s)
    if not summary.atomic:
        raise StructureError("carrier is not atomic; some nonzero element "
                             "dominates no atom")
    atom_mask = mask_of(summary.atoms)
    fam = sorted({_as_mask(s.poset, y) for y in delta_a})
    for y in fam:
        if y & ~atom_mask:
            raise StructureError(f"atom family set {s.poset.label_set(y)} "
                                 f"contains a non-atom")
    fam_set = set(fam)
    for a in summary.atoms:
        if (1 << a) not in fam_set:
            raise StructureError(f"atom family misses the singleton "
                                 f"{{{s.labels[a]}}}")
    for y in fam:
        for x in bits(y):
            if y ^ (1 << x) not in fam_set:
                raise StructureError(f"atom family is not subset-closed at "
                                     f"{s.poset.label_set(y)}")
    hulls = sorted({_dominated_hull(s.poset, y) for y in fam if y})

    def kernel(mask: int) -> bool:
        return any(not mask & ~h for h in hulls)

    return Multicontact(s.poset, kernel, tag=f"atoms({len(fam)} sets)")


# -- pre-closures -----------------------------------------------------------

@dataclass(frozen=True)
class PreClosureFlags:
    is_extensive: bool
    is_weakly_extensive: bool
    is_idempotent: bool
    is_additive: Optional[bool]


@dataclass(frozen=True)
class PreClosure:
    """An isotone map on the carrier keeping zero fixed.

    Extensivity, weak extensivity and idempotence are derived flags;
    additivity needs the join table, so it is evaluated against a
    semilattice on demand.
    """

    base: Poset
    k: tuple[int, ...]

    def __post_init__(self) -> None:
        base, k = self.base, self.k
        if len(k) != base.n or any(not 0 <= x < base.n for x in k):
            raise StructureError("closure table must map the carrier to itself")
        if k[base.zero] != base.zero:
            raise StructureError("closure must keep zero fixed")
        for a in range(base.n):
            for b in bits(base.up[a]):
                if not base.leq(k[a], k[b]):
                    raise StructureError(
                        f"closure is not isotone at {base.labels[a]} <= {base.labels[b]}")

    @cached_property
    def is_extensive(self) -> bool:
        return all(self.base.leq(a, self.k[a]) for a in range(self.base.n))

    @cached_property
    def is_weakly_extensive(self) -> bool:
        return all(self.k[a] != self.base.zero for a in bits(self.base.nonzero_mask))

    @cached_property
    def is_idempotent(self) -> bool:
        return all(self.k[self.k[a]] == self.k[a] for a in range(self.base.n))

    def is_additive(self, s: JoinSemilattice) -> bool:
        if s.poset != self.base:
            raise StructureError("closure and semilattice have different carriers")
        return all(self.k[s.join_of(a, b)] == s.join_of(self.k[a], self.k[b])
                   for a in range(s.n) for b in range(s.n))

    def flags(self, s: Optional[JoinSemilattice] = None) -> PreClosureFlags:
        return PreClosureFlags(
            self.is_extensive, self.is_weakly_extensive, self.is_idempotent,
            self.is_additive(s) if s is not None else None)


def preclosure_multicontact(kc: PreClosure) -> Multicontact:
    """Members are the sets whose closure images share a nonzero lower bound."""
    if not kc.is_weakly_extensive:
        bad = next(a for a in bits(kc.base.nonzero_mask)
                   if kc.k[a] == kc.base.zero)
        raise StructureError(f"closure sends nonzero {kc.base.labels[bad]} to zero; "
                             f"weak extensivity is required")
    base, k = kc.base, kc.k
    ups = base.up
    nz = base.nonzero_mask

    def kernel(mask: int) -> bool:
        closed = mask_of(k[a] for a in bits(mask))
        return any(not closed & ~ups[x] for x in bits(nz))

    return Multicontact(base, kernel, tag="preclosure")


def topological_multicontact(
    point_closures: Mapping[str, Iterable[str]],
    guard: int = POINT_GUARD,
) -> tuple[JoinSemilattice, Multicontact]:
    """The powerset of a finite space with membership by intersecting
    closures: a family of sets belongs iff the closures of its members
    meet.

    ``point_closures`` maps each point to its one-point closure; every
    point must belong to its own closure.  The result is additive by
    construction (closure of a union is the union of closures).
    """
    pts = sorted(point_closures)
    check_guard(len(pts), guard, "point set")
    idx = {q: i for i, q in enumerate(pts)}
    cls = [0] * len(pts)
    for q, closure in point_closures.items():
        m = 0
        for r in closure:
            if r not in idx:
                raise StructureError(f"closure of {q!r} mentions unknown point {r!r}")
            m |= 1 << idx[r]
        if not m >> idx[q] & 1:
            raise StructureError(f"point {q!r} is not in its own closure")
        cls[idx[q]] = m
    s = powerset_semilattice(pts)
    # element i of the powerset carrier is the subset of points with mask i
    table = []
    for m in range(1 << len(pts)):
        closed = 0
        for q in bits(m):
            closed |= cls[q]
        table.append(closed)
    kc = PreClosure(s.poset, tuple(table))
    d = preclosure_multicontact(kc)
    return s, Multicontact(s.poset, d.kernel, tag="topological")


# -- event structures -------------------------------------------------------

@dataclass(frozen=True)
class EventStructure:
    """Events with a causality order and a consistency family.

    The consistency family contains every singleton, is subset-closed,
    and stays consistent when a causal predecessor of a member event is
    added.
    """

    labels: tuple[str, ...]
    order: tuple[int, ...]   # order[e] = mask of events f with e <= f
    con: frozenset[int]

    def __post_init__(self) -> None:
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise StructureError("event labels must be unique")
        if len(self.order) != n:
            raise StructureError("order table must match the event count")
        full = (1 << n) - 1
        for e, row in enumerate(self.order):
            if row & ~full or not row >> e & 1:
                raise StructureError("event order must be reflexive on the events")
            for f in bits(row):
                if e != f and self.order[f] >> e & 1:
                    raise StructureError("event order has a cycle")
                if self.order[f] & ~row:
                    raise StructureError("event order is not transitive")
        for c in self.con:
            if c & ~full:
                raise StructureError("consistent set mentions unknown events")

    @property
    def n(self) -> int:
        return len(self.labels)


def validate_event_structure(e: EventStructure) -> ValidationReport:
    checks: list[AxiomCheck] = []
    full = (1 << e.n) - 1

    ref_w = None
    for x in range(e.n):
        if (1 << x) not in e.con:
            ref_w = {"event": x}
            break
    checks.append(AxiomCheck("singletons", ref_w is None, ref_w))

    sub_w = None
    for c in sorted(e.con):
        for x in bits(c):
            if c ^ (1 << x) not in e.con:
                sub_w = {"set": c, "missing": c ^ (1 << x)}
                break
        if sub_w:
            break
    checks.append(AxiomCheck("subset-closed", sub_w is None, sub_w))

    # down[f] in the event order = causal predecessors
    down = [0] * e.n
    for x in range(e.n):
        for f in bits(e.order[x]):
            down[f] |= 1 << x
    mon_w = None
    for c in sorted(e.con):
        for x in bits(c):
            for b in bits(down[x]):
                if c | (1 << b) not in e.con:
                    mon_w = {"set": c, "event": x, "predecessor": b}
                    break
            if mon_w:
                break
        if mon_w:
            break
    checks.append(AxiomCheck("predecessor-closed", mon_w is None, mon_w))

    return ValidationReport("event structure", tuple(checks))


def event_structure_to_poset(e: EventStructure) -> tuple[Poset, Multicontact]:
    """Reverse the causality order, adjoin a fresh zero, and read the
    consistency family as the membership family."""
    report = validate_event_structure(e)
    if not report.ok:
        fail = report.failures()[0]
        raise StructureError(f"consistency family violates {fail.axiom}: {fail.witness}")
    if "0" in e.labels:
        raise StructureError('event label "0" collides with the adjoined zero')
    n = e.n + 1
    up = [0] * n
    up[0] = (1 << n) - 1
    for x in range(e.n):
        # converse order: x is below y in the new poset iff y <= x causally
        up[x + 1] = mask_of(y + 1 for y in range(e.n) if e.order[y] >> x & 1)
    p = Poset(n, tuple(up), 0, ("0",) + e.labels)
    fam = frozenset(c << 1 for c in e.con) | {0}
    return p, Multicontact(p, fam.__contains__, tag="event structure",
                           raw_family=tuple(sorted(fam)))


def poset_to_event_structure(p: Poset, d: Multicontact) -> EventStructure:
    """Inverse of :func:`event_structure_to_poset`: drop zero, reverse the
    order, and take the members as the consistency family."""
    if p != d.base:
        raise StructureError("multicontact lives on a different poset")
    idx = [i for i in range(p.n) if i != p.zero]
    pos = {e: k for k, e in enumerate(idx)}
    order = tuple(mask_of(pos[j] for j in idx if p.up[j] >> e & 1) for e in idx)
    labels = tuple(p.labels[e] for e in idx)
    con = frozenset(mask_of(pos[j] for j in bits(m)) for m in d.family)
    return EventStructure(labels, order, con)


# -- antichain generators ----------------------------------------------------

def is_antichain(p: Poset, mask: int) -> bool:
    ms = list(bits(mask))
    return all(not p.leq(a, b) for a in ms for b in ms if a != b)


def dominates(p: Poset, f: int, g: int) -> bool:
    """Every element of ``g`` dominates some element of ``f``."""
    return not g & ~_dominated_hull(p, f)


def antichain_generators(d: Multicontact) -> tuple[int, ...]:
    """The antichain members of the family, ascending.

    A set belongs to the family iff its minimal elements do, so this
    tuple determines the whole family.
    """
    base = d.base
    return tuple(m for m in d.sorted_family if is_antichain(base, m))


def reduced_antichain_generators(d: Multicontact) -> tuple[int, ...]:
    """Antichain members not dominated by a different antichain member;
    regenerating from them reproduces the family."""
    base = d.base
    chains = antichain_generators(d)
    return tuple(g for g in chains
                 if not any(f != g and dominates(base, f, g) for f in chains))
