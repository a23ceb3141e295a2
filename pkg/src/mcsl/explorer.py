"""Exhaustive enumeration of small structures and the verification harness.

Enumeration is labeled with the designated zero fixed at index 0 (event
structures have no zero and permute freely); ``up_to_iso`` keeps one
representative per relabeling class via naive permutation
canonicalization.  Multicontact families on a base are enumerated
through their antichain members: a family is determined by which
antichains of nonzero elements it contains, and the admissible antichain
sets are exactly the domination-closed ones containing every singleton.

``verify_theorem`` replays a named equivalence over every enumerated
structure up to a size bound and reports discrepancies; an empty
discrepancy list is the verified claim.  Reports are deterministic:
parallel runs partition the same ordered stream and merge in order.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

from .conditions import (
    check_additivity,
    check_m1,
    check_m1_plus,
    check_m2,
)
from .contacts import (
    EventStructure,
    Multicontact,
    PreClosure,
    WeakContact,
    binary_reduct,
    delta_n,
    is_antichain,
    largest_multicontact,
    multicontact_from_family,
    overlap_multicontact,
    overlap_weak_contact,
    preclosure_multicontact,
    smallest_multicontact,
    validate_event_structure,
    validate_weak_contact,
    _dominated_hull,
)
from .embedding import canonical_embedding, smallest_extension
from .order import (
    JoinSemilattice,
    Poset,
    StructureError,
    bits,
    check_guard,
    mask_of,
    semilattice_from_poset,
    submasks,
)

SEMILATTICE_GUARD = 5
FAMILY_GUARD = 4  # nonzero carrier bound for contact-family enumeration
EVENT_GUARD = 3


@dataclass(frozen=True)
class EnumerationRequest:
    """What to enumerate: a kind, a base or a size, and the guards."""

    kind: str  # multicontacts | weak-contacts | semilattices | event-structures
    size: Optional[int] = None
    base: Optional[JoinSemilattice | Poset] = None
    guard: Optional[int] = None
    up_to_iso: bool = False


@dataclass(frozen=True)
class HarnessReport:
    theorem: str
    examined: int
    discrepancies: tuple
    elapsed: float

    @property
    def ok(self) -> bool:
        return not self.discrepancies


# -- poset and semilattice enumeration --------------------------------------

def _orders_on(n: int, fix_zero: bool) -> Iterator[tuple[int, ...]]:
    """All up-mask tables of partial orders on 0..n-1, optionally with 0
    as the least element.  Candidates per element stay within 2^(n-1),
    so this is exact and cheap at the guarded sizes."""
    full = (1 << n) - 1
    first = range(1, n) if fix_zero else range(n)
    choices = []
    for i in first:
        opts = [m | (1 << i) for m in submasks(full ^ (1 << i))]
        if fix_zero:
            opts = [m for m in opts if not m & 1]
        choices.append(sorted(opts))
    for combo in itertools.product(*choices):
        up = [0] * n
        if fix_zero:
            up[0] = full
            rest = list(range(1, n))
        else:
            rest = list(range(n))
        for i, m in zip(rest, combo):
            up[i] = m
        ok = True
        for i in rest:
            row = up[i]
            for j in bits(row):
                if i != j and up[j] >> i & 1:
                    ok = False
                    break
                if up[j] & ~row:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield tuple(up)


def _poset_canonical_key(up: tuple[int, ...], fix_zero: bool) -> tuple[int, ...]:
    n = len(up)
    movable = range(1, n) if fix_zero else range(n)
    best = None
    for perm_rest in itertools.permutations(movable):
        perm = ((0,) + perm_rest) if fix_zero else perm_rest
        image = [0] * n
        for i in range(n):
            image[perm[i]] = mask_of(perm[j] for j in bits(up[i]))
        key = tuple(image)
        if best is None or key < best:
            best = key
    return best


def enumerate_semilattices(n: int, guard: int = SEMILATTICE_GUARD,
                           up_to_iso: bool = False) -> Iterator[JoinSemilattice]:
    """All join semilattices with zero on n labeled elements, zero at
    index 0, as posets filtered for join completeness."""
    if n < 1:
        raise StructureError("carrier must be nonempty")
    check_guard(n, guard, "carrier")
    labels = tuple(f"e{i}" for i in range(n))
    seen = set()
    for up in _orders_on(n, fix_zero=True):
        try:
            s = semilattice_from_poset(Poset(n, up, 0, labels))
        except StructureError:
            continue
        if up_to_iso:
            key = _poset_canonical_key(up, fix_zero=True)
            if key in seen:
                continue
            seen.add(key)
        yield s


# -- contact-family enumeration ----------------------------------------------

def _as_poset(base: Poset | JoinSemilattice) -> Poset:
    return base.poset if isinstance(base, JoinSemilattice) else base


def _automorphisms(p: Poset) -> list[tuple[int, ...]]:
    out = []
    movable = [i for i in range(p.n) if i != p.zero]
    for perm_rest in itertools.permutations(movable):
        perm = [0] * p.n
        perm[p.zero] = p.zero
        for i, j in zip(movable, perm_rest):
            perm[i] = j
        image = [0] * p.n
        for i in range(p.n):
            image[perm[i]] = mask_of(perm[j] for j in bits(p.up[i]))
        if tuple(image) == p.up:
            out.append(tuple(perm))
    return out


def _min_elements(p: Poset, mask: int) -> int:
    out = mask
    for x in bits(mask):
        for y in bits(mask):
            if y != x and p.leq(y, x):
                out &= ~(1 << x)
                break
    return out


def enumerate_multicontacts(base: Poset | JoinSemilattice,
                            guard: int = FAMILY_GUARD,
                            up_to_iso: bool = False) -> Iterator[Multicontact]:
    """All multicontact families on the base.

    A family is the up-set of its antichain members in the domination
    order, so enumeration walks domination-closed sets of antichains
    containing the mandatory ones (those with a common nonzero lower
    bound).  Cross-checked against a raw axiom filter in the tests.
    """
    p = _as_poset(base)
    nz = p.nonzero_mask
    check_guard(nz.bit_count(), guard, "nonzero carrier")
    chains = [m for m in submasks(nz) if m and is_antichain(p, m)]
    mandatory = [m for m in chains
                 if any(not m & ~p.up[x] for x in bits(nz))]
    free = [m for m in chains if m not in set(mandatory)]
    check_guard(len(free), 20, "free antichain family")
    # F generates G when every element of G dominates one of F
    gen = {f: [g for g in free if g != f and not g & ~_dominated_hull(p, f)]
           for f in free}
    base_sets = set(mandatory)
    autos = _automorphisms(p) if up_to_iso else []
    seen = set()
    for pick_mask in submasks((1 << len(free)) - 1):
        picked = [free[i] for i in bits(pick_mask)]
        picked_set = set(picked)
        if any(g not in picked_set for f in picked for g in gen[f]):
            continue
        allowed = base_sets | picked_set
        fam = [m for m in submasks(nz) if _min_elements(p, m) in allowed or m == 0]
        if up_to_iso:
            key = min(tuple(sorted(mask_of(perm[i] for i in bits(m)) for m in fam))
                      for perm in autos)
            if key in seen:
                continue
            seen.add(key)
        yield multicontact_from_family(p, fam, tag="enumerated")


def enumerate_weak_contacts(base: Poset | JoinSemilattice,
                            guard: int = FAMILY_GUARD,
                            up_to_iso: bool = False) -> Iterator[WeakContact]:
    """All weak contacts on the base: overlap pairs are mandatory, the
    choices among the rest are filtered for closure under raising."""
    p = _as_poset(base)
    nz = p.nonzero_mask
    check_guard(nz.bit_count(), guard, "nonzero carrier")
    ov = overlap_weak_contact(p)
    free_pairs = [(a, b) for a in bits(nz) for b in bits(nz)
                  if a < b and not ov.related(a, b)]
    autos = _automorphisms(p) if up_to_iso else []
    seen = set()
    for pick in submasks((1 << len(free_pairs)) - 1):
        rel = list(ov.rel)
        for i in bits(pick):
            a, b = free_pairs[i]
            rel[a] |= 1 << b
            rel[b] |= 1 << a
        cand = WeakContact(p, tuple(rel))
        if not validate_weak_contact(cand).ok:
            continue
        if up_to_iso:
            key = min(tuple(mask_of(perm[x] for x in bits(rel[perm.index(i)]))
                            for i in range(p.n))
                      for perm in autos)
            if key in seen:
                continue
            seen.add(key)
        yield cand


def expansions(delta: WeakContact, guard: int = FAMILY_GUARD
               ) -> Iterator[Multicontact]:
    """Multicontacts on the same base whose binary reduct is ``delta``."""
    for d in enumerate_multicontacts(delta.base, guard):
        if binary_reduct(d).rel == delta.rel:
            yield d


def enumerate_preclosures(s: JoinSemilattice, guard: int = FAMILY_GUARD
                          ) -> Iterator[PreClosure]:
    """All isotone, zero-fixing, weakly extensive self-maps of the carrier."""
    check_guard(s.n - 1, guard, "nonzero carrier")
    p = s.poset
    nz = list(bits(p.nonzero_mask))
    for images in itertools.product(nz, repeat=len(nz)):
        k = [0] * s.n
        k[p.zero] = p.zero
        for x, img in zip(nz, images):
            k[x] = img
        if all(p.leq(k[a], k[b]) for a in range(s.n) for b in bits(p.up[a])):
            yield PreClosure(p, tuple(k))


def enumerate_event_structures(k: int, guard: int = EVENT_GUARD
                               ) -> Iterator[EventStructure]:
    """All labeled event structures on k events."""
    if k < 1:
        raise StructureError("at least one event is needed")
    check_guard(k, guard, "event set")
    labels = tuple(f"e{i + 1}" for i in range(k))
    full = (1 << k) - 1
    singletons = {1 << i for i in range(k)}
    nonsingle = [m for m in submasks(full) if m and m not in singletons]
    for order in _orders_on(k, fix_zero=False):
        for pick in submasks((1 << len(nonsingle)) - 1):
            con = frozenset({0} | singletons
                            | {nonsingle[i] for i in bits(pick)})
            cand = EventStructure(labels, order, con)
            if validate_event_structure(cand).ok:
                yield cand


# -- harness -----------------------------------------------------------------

def _encode_pair(s: JoinSemilattice, d: Optional[Multicontact]) -> dict:
    out = {"n": s.n, "up": list(s.poset.up)}
    if d is not None:
        out["family"] = sorted(d.family)
    return out


def _map_ordered(items: Sequence, fn: Callable, jobs: int) -> list:
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _sweep_pairs(max_n: int, jobs: int,
                 probe: Callable[[JoinSemilattice, Multicontact], Optional[dict]]
                 ) -> tuple[int, list[dict]]:
    bases = [s for n in range(1, max_n + 1)
             for s in enumerate_semilattices(n, guard=max(max_n, SEMILATTICE_GUARD))]

    def work(s: JoinSemilattice) -> tuple[int, list[dict]]:
        count, bad = 0, []
        for d in enumerate_multicontacts(s.poset, guard=max(FAMILY_GUARD, s.n - 1)):
            count += 1
            r = probe(s, d)
            if r is not None:
                r["structure"] = _encode_pair(s, d)
                bad.append(r)
        return count, bad

    examined, discrepancies = 0, []
    for count, bad in _map_ordered(bases, work, jobs):
        examined += count
        discrepancies.extend(bad)
    return examined, discrepancies


def _suite_overlap_embedding(max_n: int, jobs: int) -> tuple[int, list[dict]]:
    def probe(s, d):
        expected = (check_additivity(s, d).verdict and check_m1(s, d).verdict)
        got = canonical_embedding(s, d, "overlap").verify().is_embedding
        if expected != got:
            return {"expected": expected, "got": got}
        return None
    return _sweep_pairs(max_n, jobs, probe)


def _suite_smallest_embedding(max_n: int, jobs: int) -> tuple[int, list[dict]]:
    def probe(s, d):
        expected = check_m1(s, d).verdict
        got = canonical_embedding(s, d, "smallest").verify().is_embedding
        if expected != got:
            return {"expected": expected, "got": got}
        return None
    return _sweep_pairs(max_n, jobs, probe)


def _suite_additivity_m2(max_n: int, jobs: int) -> tuple[int, list[dict]]:
    def probe(s, d):
        add = check_additivity(s, d).verdict
        for rows in (2, 3):
            got = check_m2(s, d, rows).verdict
            if got != add:
                return {"expected": add, "got": got, "rows": rows}
        return None
    return _sweep_pairs(max_n, jobs, probe)


def _suite_m1_plus(max_n: int, jobs: int) -> tuple[int, list[dict]]:
    def probe(s, d):
        m1 = check_m1(s, d).verdict
        if check_m1_plus(s, d, 1).verdict != m1:
            return {"expected": m1, "got": not m1, "rows": 1}
        if m1:
            for rows in (2, 3):
                if not check_m1_plus(s, d, rows).verdict:
                    return {"expected": True, "got": False, "rows": rows}
        return None
    return _sweep_pairs(max_n, jobs, probe)


def _suite_semidistributive_overlap(max_n: int, jobs: int) -> tuple[int, list[dict]]:
    examined, discrepancies = 0, []
    for n in range(1, max_n + 1):
        for s in enumerate_semilattices(n, guard=max(max_n, SEMILATTICE_GUARD)):
            examined += 1
            if not s.is_semidistributive_at_zero:
                continue
            if not check_additivity(s, overlap_multicontact(s.poset)).verdict:
                discrepancies.append(
                    {"expected": True, "got": False,
                     "structure": _encode_pair(s, None)})
    return examined, discrepancies


def _suite_preclosure_additive(max_n: int, jobs: int) -> tuple[int, list[dict]]:
    examined, discrepancies = 0, []
    for n in range(1, max_n + 1):
        for s in enumerate_semilattices(n, guard=max(max_n, SEMILATTICE_GUARD)):
            if not s.is_distributive_lattice:
                continue
            for kc in enumerate_preclosures(s, guard=max(FAMILY_GUARD, s.n - 1)):
                if not kc.is_additive(s):
                    continue
                examined += 1
                d = preclosure_multicontact(kc)
                if not check_additivity(s, d).verdict:
                    discrepancies.append(
                        {"expected": True, "got": False, "closure": list(kc.k),
                         "structure": _encode_pair(s, d)})
    return examined, discrepancies


def _suite_distributive_m1(max_n: int, jobs: int) -> tuple[int, list[dict]]:
    def probe(s, d):
        if not s.is_distributive_lattice:
            return None
        if not check_m1(s, d).verdict:
            return {"expected": True, "got": False}
        return None
    return _sweep_pairs(max_n, jobs, probe)


def _suite_overlap_m1_additive(max_n: int, jobs: int) -> tuple[int, list[dict]]:
    examined, discrepancies = 0, []
    for n in range(1, max_n + 1):
        for s in enumerate_semilattices(n, guard=max(max_n, SEMILATTICE_GUARD)):
            examined += 1
            d = overlap_multicontact(s.poset)
            if check_m1(s, d).verdict and not check_additivity(s, d).verdict:
                discrepancies.append({"expected": True, "got": False,
                                      "structure": _encode_pair(s, d)})
    return examined, discrepancies


def _suite_sandwich(max_n: int, jobs: int) -> tuple[int, list[dict]]:
    bases = [s for n in range(1, max_n + 1)
             for s in enumerate_semilattices(n, guard=max(max_n, SEMILATTICE_GUARD))]

    def work(s: JoinSemilattice) -> tuple[int, list[dict]]:
        count, bad = 0, []
        p = s.poset
        guard = max(FAMILY_GUARD, s.n - 1)
        smallest_by_rel, largest_by_rel = {}, {}
        for wc in enumerate_weak_contacts(p, guard):
            count += 1
            lo, hi = smallest_multicontact(wc), largest_multicontact(wc)
            if binary_reduct(lo).rel != wc.rel or binary_reduct(hi).rel != wc.rel:
                bad.append({"kind": "reduct", "rel": list(wc.rel),
                            "structure": _encode_pair(s, None)})
                continue
            smallest_by_rel[wc.rel] = lo.family
            largest_by_rel[wc.rel] = hi.family
        ov = overlap_weak_contact(p)
        if smallest_multicontact(ov) != overlap_multicontact(p):
            bad.append({"kind": "smallest-of-overlap", "structure": _encode_pair(s, None)})
        if delta_n(p, 1) != overlap_multicontact(p):
            bad.append({"kind": "cardinality-1", "structure": _encode_pair(s, None)})
        for d in enumerate_multicontacts(p, guard):
            rel = binary_reduct(d).rel
            lo, hi = smallest_by_rel.get(rel), largest_by_rel.get(rel)
            if lo is None or not (lo <= d.family <= hi):
                bad.append({"kind": "sandwich",
                            "structure": _encode_pair(s, d)})
        return count, bad

    examined, discrepancies = 0, []
    for count, bad in _map_ordered(bases, work, jobs):
        examined += count
        discrepancies.extend(bad)
    return examined, discrepancies


def _suite_smallest_extension_minimal(max_n: int, jobs: int
                                      ) -> tuple[int, list[dict]]:
    cap = min(max_n, 3)
    examined, discrepancies = 0, []
    targets = []
    for n in range(1, cap + 1):
        labels = tuple(f"q{i}" for i in range(n))
        for up in _orders_on(n, fix_zero=True):
            targets.append(Poset(n, up, 0, labels))
    for n in range(1, cap + 1):
        for s in enumerate_semilattices(n):
            for d in enumerate_multicontacts(s.poset, guard=max(FAMILY_GUARD, s.n - 1)):
                for q in targets:
                    nzq = list(bits(q.nonzero_mask))
                    if s.n > 1 and not nzq:
                        continue
                    pools = [[q.zero] if a == s.zero else nzq
                             for a in range(s.n)]
                    for kappa in itertools.product(*pools):
                        if not all(q.leq(kappa[a], kappa[b])
                                   for a in range(s.n) for b in bits(s.poset.up[a])):
                            continue
                        examined += 1
                        ext = smallest_extension(kappa, d, q)
                        if not all(ext.member(mask_of(kappa[i] for i in bits(f)))
                                   for f in d.sorted_family):
                            discrepancies.append(
                                {"kind": "not-a-hom", "kappa": list(kappa),
                                 "structure": _encode_pair(s, d)})
                            continue
                        for e in enumerate_multicontacts(q, guard=max(FAMILY_GUARD, q.n - 1)):
                            if all(e.member(mask_of(kappa[i] for i in bits(f)))
                                   for f in d.sorted_family):
                                if not ext.family <= e.family:
                                    discrepancies.append(
                                        {"kind": "not-least", "kappa": list(kappa),
                                         "structure": _encode_pair(s, d)})
                                    break
    return examined, discrepancies


def _suite_catalog(max_n: int, jobs: int) -> tuple[int, list[dict]]:
    from .catalog import run_catalog_checks
    return run_catalog_checks(jobs)


THEOREM_SUITES: dict[str, tuple[str, Callable[[int, int], tuple[int, list[dict]]]]] = {
    "4.2": ("overlap-mode canonical embedding verifies exactly when the "
            "family is additive and the m1 check passes",
            _suite_overlap_embedding),
    "5.2": ("smallest-mode canonical embedding verifies exactly when the "
            "m1 check passes", _suite_smallest_embedding),
    "3.3": ("additivity agrees with the bounded m2 check at 2 and 3 rows",
            _suite_additivity_m2),
    "3.1": ("the one-row m1-plus fragment is m1 and m1 forces every "
            "bounded m1-plus verdict", _suite_m1_plus),
    "3.4a": ("semidistributivity at zero makes the overlap family additive",
             _suite_semidistributive_overlap),
    "3.4b": ("additive pre-closures on distributive lattices give additive "
             "families", _suite_preclosure_additive),
    "3.5": ("on distributive lattices every family passes m1",
            _suite_distributive_m1),
    "3.6": ("overlap families passing m1 are additive",
            _suite_overlap_m1_additive),
    "2.2h": ("every family sits between the smallest and largest expansions "
             "of its binary reduct, and both bounds are attained",
             _suite_sandwich),
    "5.1-min": ("the smallest extension along a zero-reflecting monotone map "
                "is least among membership-preserving targets",
                _suite_smallest_extension_minimal),
    "catalog": ("recorded verdicts of the named catalog structures reproduce",
                _suite_catalog),
}


def verify_theorem(theorem: str, max_n: int = 4, jobs: int = 1) -> HarnessReport:
    """Run one named verification suite over all structures up to ``max_n``."""
    if theorem not in THEOREM_SUITES:
        raise StructureError(f"unknown suite {theorem!r}; known: "
                             f"{', '.join(sorted(THEOREM_SUITES))}")
    start = time.perf_counter()
    examined, discrepancies = THEOREM_SUITES[theorem][1](max_n, jobs)
    return HarnessReport(theorem, examined, tuple(discrepancies),
                         time.perf_counter() - start)


def run_catalog_regressions(jobs: int = 1) -> HarnessReport:
    return verify_theorem("catalog", jobs=jobs)
