"""Canonical embeddings into powersets of a carved-down carrier.

``phi`` sends an element to the set of carrier points it is not below.
Intersections of ``phi``-images of minimal non-member sets are excised
from the base set; the image of everything else survives in ``t_mask``
and the map ``kappa`` lands in the powerset of that set.  The target
membership is either overlap (nonempty intersection) or the least
extension generated by the source family.

The construction is total: it always returns the data, and
:meth:`CanonicalEmbedding.verify` reports which embedding properties
actually hold, with witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence

from .contacts import Multicontact
from .order import (
    DEFAULT_CARRIER_GUARD,
    JoinSemilattice,
    Poset,
    StructureError,
    bits,
    check_guard,
    mask_of,
    submasks,
)

MODES = ("overlap", "smallest")


def phi(s: JoinSemilattice, a: int) -> int:
    """Mask of carrier points ``x`` with ``a`` not below ``x``."""
    return s.poset.full_mask & ~s.poset.up[a]


def phi_table(s: JoinSemilattice) -> tuple[int, ...]:
    return tuple(phi(s, a) for a in range(s.n))


def minimal_non_members(d: Multicontact,
                        guard: int = DEFAULT_CARRIER_GUARD) -> tuple[int, ...]:
    """Inclusion-minimal nonempty non-member subsets of nonzero elements,
    ascending.  Every non-member contains one of these, so they suffice
    to carve the excision set."""
    check_guard(d.base.n, guard, "carrier")
    non = [m for m in submasks(d.base.nonzero_mask) if m and not d.member(m)]
    non_set = set(non)
    return tuple(m for m in non
                 if not any((m ^ (1 << x)) in non_set for x in bits(m)))


@dataclass(frozen=True)
class EmbeddingVerdict:
    is_order_embedding: bool
    preserves_join: bool
    preserves_zero: bool
    delta_only_if: bool   # members map to target members
    delta_if: bool        # target membership reflects back
    witnesses: dict
    preserves_top: Optional[bool] = None  # bounded mode only

    @property
    def is_embedding(self) -> bool:
        core = (self.is_order_embedding and self.preserves_join
                and self.preserves_zero and self.delta_only_if and self.delta_if)
        if self.preserves_top is None:
            return core
        return core and self.preserves_top


@dataclass(frozen=True)
class CanonicalEmbedding:
    """The carved powerset embedding of a multicontact semilattice."""

    source: JoinSemilattice
    contact: Multicontact
    mode: str
    bounded: bool
    base_mask: int
    excised: int           # union of minimal non-member phi-intersections
    t_mask: int
    kappa: tuple[int, ...]
    minimal_non_members: tuple[int, ...]

    def target_member(self, images: Sequence[int]) -> bool:
        """Membership of a set of target elements (masks inside t_mask)."""
        if not images:
            return True
        if self.mode == "overlap":
            common = self.t_mask
            for m in images:
                common &= m
            return common != 0
        common = self.t_mask
        for m in images:
            common &= m
        if common:
            return True
        # least extension: some source member set sits below every image
        for member in self.contact.sorted_family:
            if member and all(any(not self.kappa[a] & ~img for a in bits(member))
                              for img in images):
                return True
        return False

    def verify(self) -> EmbeddingVerdict:
        s, d = self.source, self.contact
        kap = self.kappa
        witnesses: dict = {}

        order_ok = True
        for a in range(s.n):
            for b in range(s.n):
                if s.leq(a, b) != (not kap[a] & ~kap[b]):
                    witnesses["order"] = {"a": a, "b": b}
                    order_ok = False
                    break
            if not order_ok:
                break

        join_ok = True
        for a in range(s.n):
            for b in range(s.n):
                if kap[s.join_of(a, b)] != kap[a] | kap[b]:
                    witnesses["join"] = {"a": a, "b": b}
                    join_ok = False
                    break
            if not join_ok:
                break

        zero_ok = kap[s.zero] == 0
        if not zero_ok:
            witnesses["zero"] = {"kappa": kap[s.zero]}

        only_if_ok = True
        if_ok = True
        for f in submasks(s.nonzero_mask):
            images = [kap[p] for p in bits(f)]
            src = d.member(f)
            tgt = self.target_member(images)
            if src and not tgt and only_if_ok:
                witnesses["delta_only_if"] = {"set": f}
                only_if_ok = False
            if tgt and not src and if_ok:
                witnesses["delta_if"] = {"set": f}
                if_ok = False
            if not (only_if_ok or if_ok):
                break

        top_ok: Optional[bool] = None
        if self.bounded:
            top_ok = kap[s.top] == self.t_mask
            if not top_ok:
                witnesses["top"] = {"kappa": kap[s.top], "t": self.t_mask}

        return EmbeddingVerdict(order_ok, join_ok, zero_ok, only_if_ok, if_ok,
                                witnesses, top_ok)

    def t_labels(self) -> tuple[str, ...]:
        return tuple(self.source.labels[i] for i in bits(self.t_mask))

    def kappa_labels(self) -> dict[str, tuple[str, ...]]:
        lbl = self.source.labels
        return {lbl[a]: tuple(lbl[x] for x in bits(self.kappa[a]))
                for a in range(self.source.n)}


def canonical_embedding(s: JoinSemilattice, d: Multicontact,
                        mode: str = "overlap", bounded: bool = False,
                        guard: int = DEFAULT_CARRIER_GUARD) -> CanonicalEmbedding:
    """Build the canonical powerset embedding data for ``(s, d)``.

    ``bounded`` drops the top element from the base set (the carrier
    must have one) and adds top preservation to the verification.
    The construction never fails on valid inputs; whether it is an
    embedding is what :meth:`CanonicalEmbedding.verify` decides.
    """
    if mode not in MODES:
        raise StructureError(f"unknown embedding mode {mode!r}; known: {MODES}")
    if d.base != s.poset:
        raise StructureError("multicontact and semilattice have different carriers")
    check_guard(s.n, guard, "carrier")
    base_mask = s.poset.full_mask
    if bounded:
        if s.top is None:
            raise StructureError("bounded mode needs a top element")
        base_mask ^= 1 << s.top
    phis = phi_table(s)
    minima = minimal_non_members(d, guard)
    excised = 0
    for f in minima:
        common = base_mask
        for c in bits(f):
            common &= phis[c]
        excised |= common
    t_mask = base_mask & ~excised
    kappa = tuple((phis[a] & t_mask) for a in range(s.n))
    return CanonicalEmbedding(s, d, mode, bounded, base_mask, excised,
                              t_mask, kappa, minima)


def verify_embedding(kappa: Sequence[int],
                     source: tuple[JoinSemilattice, Multicontact],
                     target: tuple[JoinSemilattice, Multicontact]
                     ) -> EmbeddingVerdict:
    """Verify an explicit element map between two multicontact semilattices.

    Same five checks as the canonical verification: order embedding,
    join and zero preservation, and the two membership halves quantified
    over source subsets of nonzero elements.
    """
    s, d = source
    t, e = target
    if len(kappa) != s.n or any(not 0 <= x < t.n for x in kappa):
        raise StructureError("map table must send the source carrier into the target")
    witnesses: dict = {}

    order_ok = True
    for a in range(s.n):
        for b in range(s.n):
            if s.leq(a, b) != t.leq(kappa[a], kappa[b]):
                witnesses["order"] = {"a": a, "b": b}
                order_ok = False
                break
        if not order_ok:
            break

    join_ok = True
    for a in range(s.n):
        for b in range(s.n):
            if kappa[s.join_of(a, b)] != t.join_of(kappa[a], kappa[b]):
                witnesses["join"] = {"a": a, "b": b}
                join_ok = False
                break
        if not join_ok:
            break

    zero_ok = kappa[s.zero] == t.zero
    if not zero_ok:
        witnesses["zero"] = {"kappa": kappa[s.zero]}

    only_if_ok = True
    if_ok = True
    for f in submasks(s.nonzero_mask):
        image = mask_of(kappa[p] for p in bits(f))
        src = d.member(f)
        tgt = e.member(image)
        if src and not tgt and only_if_ok:
            witnesses["delta_only_if"] = {"set": f}
            only_if_ok = False
        if tgt and not src and if_ok:
            witnesses["delta_if"] = {"set": f}
            if_ok = False
        if not (only_if_ok or if_ok):
            break

    return EmbeddingVerdict(order_ok, join_ok, zero_ok, only_if_ok, if_ok,
                            witnesses)


def smallest_extension(kappa: Sequence[int], d: Multicontact,
                       target: Poset) -> Multicontact:
    """Least multicontact on ``target`` making ``kappa`` membership-preserving.

    A target set belongs iff it has a common nonzero lower bound, or
    some source member's image sits below every one of its elements.
    ``kappa`` must be order-preserving and send exactly zero to zero.
    """
    base = d.base
    if len(kappa) != base.n or any(not 0 <= x < target.n for x in kappa):
        raise StructureError("map table must send the source carrier into the target")
    for a in range(base.n):
        for b in bits(base.up[a]):
            if not target.leq(kappa[a], kappa[b]):
                raise StructureError(
                    f"map is not order-preserving at "
                    f"{base.labels[a]} <= {base.labels[b]}")
    for a in range(base.n):
        if (kappa[a] == target.zero) != (a == base.zero):
            raise StructureError(
                f"map must send exactly zero to zero; offender {base.labels[a]}")

    ups = target.up
    nz = target.nonzero_mask
    members = [m for m in d.sorted_family if m]
    image_hulls = []
    for m in members:
        hull = 0
        for a in bits(m):
            hull |= ups[kappa[a]]
        image_hulls.append(hull)
    image_hulls = sorted(set(image_hulls))

    def kernel(mask: int) -> bool:
        if any(not mask & ~ups[x] for x in bits(nz)):
            return True
        return any(not mask & ~h for h in image_hulls)

    return Multicontact(target, kernel, tag="smallest extension")


@dataclass(frozen=True)
class FiniteSpaceModel:
    """A finite space plus the set-valued rendering of the source."""

    points: tuple[str, ...]
    closures: dict[str, tuple[str, ...]]
    image: dict[str, tuple[str, ...]]


def as_topological_model(e: CanonicalEmbedding) -> FiniteSpaceModel:
    """Read a verified overlap-mode embedding as a finite space model.

    Points are the surviving carrier elements with discrete one-point
    closures; each source element becomes the point set ``kappa`` gives
    it.  The space's intersection-based membership, restricted to the
    image, agrees with the source family (checked here).
    """
    if e.mode != "overlap":
        raise StructureError("topological models come from overlap mode")
    verdict = e.verify()
    if not verdict.is_embedding:
        raise StructureError("not a verified overlap-mode embedding; "
                             f"failing checks: {sorted(verdict.witnesses)}")
    s, d = e.source, e.contact
    # discrete closures: membership by intersection of kappa images,
    # which is exactly the verified delta agreement
    for f in submasks(s.nonzero_mask):
        common = e.t_mask
        for p in bits(f):
            common &= e.kappa[p]
        if f and d.member(f) != bool(common):
            raise StructureError("space membership disagrees with the source")
    points = e.t_labels()
    return FiniteSpaceModel(
        points=points,
        closures={q: (q,) for q in points},
        image=e.kappa_labels(),
    )
