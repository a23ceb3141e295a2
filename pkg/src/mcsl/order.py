"""Finite posets and join semilattices on dense integer carriers.

Elements are the indices ``0..n-1`` and every subset of the carrier is a
Python int used as a bitmask, so subset sweeps are exact.  Construction
refuses carriers larger than a configurable guard; exceeding a guard is
an explicit error, never silence.

All structures here are immutable value objects.  Lazily computed
attributes (top, meets, structural flags) are cached compute-once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

DEFAULT_CARRIER_GUARD = 16


class StructureError(ValueError):
    """An input failed a structural precondition."""


class GuardError(StructureError):
    """A carrier or subset family exceeds the configured size guard."""


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    """Bitmask holding the given element indices."""
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in ascending integer order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def check_guard(value: int, guard: int, what: str) -> None:
    if value > guard:
        raise GuardError(f"{what} has size {value}, above the guard {guard}; "
                         f"raise the guard explicitly to proceed")


@dataclass(frozen=True)
class Poset:
    """A finite poset with least element, stored as reflexive up-set masks.

    ``up[i]`` is the bitmask of every ``j`` with ``i <= j`` and ``zero``
    is the least element.  Construction validates reflexivity,
    antisymmetry, transitivity, minimality of ``zero`` and label
    uniqueness, so downstream code may rely on the order blindly.
    """

    n: int
    up: tuple[int, ...]
    zero: int
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        n = self.n
        if n < 1:
            raise StructureError("carrier must be nonempty")
        if len(self.up) != n or len(self.labels) != n:
            raise StructureError("up table and labels must match the carrier size")
        if len(set(self.labels)) != n:
            raise StructureError("element labels must be unique")
        full = (1 << n) - 1
        for i, row in enumerate(self.up):
            if row & ~full:
                raise StructureError(f"up[{i}] mentions elements outside the carrier")
            if not row >> i & 1:
                raise StructureError(f"order is not reflexive at {self.labels[i]}")
            for j in bits(row):
                if i != j and self.up[j] >> i & 1:
                    raise StructureError(
                        f"order has a cycle through {self.labels[i]} and {self.labels[j]}")
                if self.up[j] & ~row:
                    raise StructureError(
                        f"order is not transitive at {self.labels[i]} <= {self.labels[j]}")
        if self.up[self.zero] != full:
            raise StructureError(f"{self.labels[self.zero]} is not a least element")

    # -- basic queries ------------------------------------------------

    def leq(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def nonzero_mask(self) -> int:
        return self.full_mask ^ (1 << self.zero)

    @cached_property
    def down(self) -> tuple[int, ...]:
        """``down[j]`` is the bitmask of every ``i`` with ``i <= j``."""
        cols = [0] * self.n
        for i, row in enumerate(self.up):
            for j in bits(row):
                cols[j] |= 1 << i
        return tuple(cols)

    @cached_property
    def top(self) -> Optional[int]:
        for t in range(self.n):
            if self.down[t] == self.full_mask:
                return t
        return None

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Covering pairs ``(i, j)`` with no element strictly between."""
        out = []
        for i in range(self.n):
            strict = self.up[i] ^ (1 << i)
            for j in bits(strict):
                if not any(k != j and self.up[k] >> j & 1 for k in bits(strict)):
                    out.append((i, j))
        return tuple(sorted(out))

    def index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise StructureError(f"unknown element label {label!r}") from None

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {lbl: i for i, lbl in enumerate(self.labels)}

    def label_set(self, mask: int) -> str:
        """Render a subset mask with element labels, for messages."""
        return "{" + ",".join(self.labels[i] for i in bits(mask)) + "}"

    def permuted(self, perm: Sequence[int]) -> "Poset":
        """Relabel through ``perm``: element ``i`` becomes ``perm[i]``."""
        up = [0] * self.n
        labels = [""] * self.n
        for i in range(self.n):
            up[perm[i]] = mask_of(perm[j] for j in bits(self.up[i]))
            labels[perm[i]] = self.labels[i]
        return Poset(self.n, tuple(up), perm[self.zero], tuple(labels))

    def __repr__(self) -> str:
        return f"Poset({self.n} elements, zero={self.labels[self.zero]})"


def poset_from_relation(
    n: int,
    pairs: Iterable[tuple[int, int]],
    zero_hint: Optional[int] = None,
    labels: Optional[Sequence[str]] = None,
    guard: int = DEFAULT_CARRIER_GUARD,
) -> Poset:
    """Build a poset from generating pairs ``(lo, hi)`` meaning lo <= hi.

    Takes the reflexive-transitive closure, rejects cycles with a witness
    pair, and requires a least element (checked against ``zero_hint``
    when given).
    """
    check_guard(n, guard, "carrier")
    if n < 1:
        raise StructureError("carrier must be nonempty")
    lab = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(n))
    if len(lab) != n:
        raise StructureError("labels must match the carrier size")
    up = [1 << i for i in range(n)]
    for lo, hi in pairs:
        if not (0 <= lo < n and 0 <= hi < n):
            raise StructureError(f"order pair ({lo},{hi}) outside the carrier")
        up[lo] |= 1 << hi
    for k in range(n):
        for i in range(n):
            if up[i] >> k & 1:
                up[i] |= up[k]
    for i in range(n):
        for j in bits(up[i]):
            if i != j and up[j] >> i & 1:
                raise StructureError(
                    f"order pairs create a cycle through {lab[i]} and {lab[j]}")
    full = (1 << n) - 1
    minima = [i for i in range(n) if up[i] == full]
    if not minima:
        raise StructureError("order has no least element")
    zero = minima[0]
    if zero_hint is not None and zero_hint != zero:
        raise StructureError(
            f"declared zero {lab[zero_hint]} is not the least element {lab[zero]}")
    return Poset(n, tuple(up), zero, lab)


@dataclass(frozen=True)
class StructureFlags:
    """Cached structural verdicts; ``None`` marks a not-yet-computed flag."""

    is_lattice: Optional[bool] = None
    is_distributive_lattice: Optional[bool] = None
    is_modular_lattice: Optional[bool] = None
    is_semidistributive_at_zero: Optional[bool] = None
    is_distributive_join_semilattice: Optional[bool] = None


@dataclass(frozen=True)
class JoinSemilattice:
    """A finite join semilattice with zero: a :class:`Poset` plus its join table.

    Construction verifies that ``join[a][b]`` is the least upper bound of
    each pair, which forces commutativity, associativity, idempotence and
    ``a + 0 = a``.
    """

    poset: Poset
    join: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        p = self.poset
        if len(self.join) != p.n or any(len(r) != p.n for r in self.join):
            raise StructureError("join table must be n x n")
        for a in range(p.n):
            for b in range(p.n):
                j = self.join[a][b]
                uppers = p.up[a] & p.up[b]
                if not (uppers >> j & 1) or uppers & ~p.up[j]:
                    raise StructureError(
                        f"join table entry for ({p.labels[a]},{p.labels[b]}) "
                        f"is not the least upper bound")

    # -- delegation ---------------------------------------------------

    @property
    def n(self) -> int:
        return self.poset.n

    @property
    def zero(self) -> int:
        return self.poset.zero

    @property
    def labels(self) -> tuple[str, ...]:
        return self.poset.labels

    @property
    def full_mask(self) -> int:
        return self.poset.full_mask

    @property
    def nonzero_mask(self) -> int:
        return self.poset.nonzero_mask

    @property
    def top(self) -> Optional[int]:
        return self.poset.top

    def leq(self, a: int, b: int) -> bool:
        return self.poset.leq(a, b)

    def join_of(self, a: int, b: int) -> int:
        return self.join[a][b]

    def join_mask(self, mask: int) -> int:
        """Join of a subset given as a mask; the empty join is zero."""
        out = self.zero
        for i in bits(mask):
            out = self.join[out][i]
        return out

    # -- meets --------------------------------------------------------

    @cached_property
    def _meet_cache(self) -> dict[int, Optional[int]]:
        return {}

    def meet_mask(self, mask: int) -> Optional[int]:
        """Greatest lower bound of a nonempty subset mask, or None."""
        if mask == 0:
            raise StructureError("meet of the empty set is not defined here")
        cache = self._meet_cache
        if mask in cache:
            return cache[mask]
        down = self.poset.down
        lowers = self.poset.full_mask
        for i in bits(mask):
            lowers &= down[i]
        found: Optional[int] = None
        for g in bits(lowers):
            if not lowers & ~down[g]:
                found = g
                break
        cache[mask] = found
        return found

    # -- structural predicates -----------------------------------------

    @cached_property
    def is_lattice(self) -> bool:
        return all(self.meet_mask((1 << a) | (1 << b)) is not None
                   for a in range(self.n) for b in range(a + 1, self.n))

    @cached_property
    def is_distributive_lattice(self) -> bool:
        if not self.is_lattice:
            return False
        meet = lambda a, b: self.meet_mask((1 << a) | (1 << b))
        rng = range(self.n)
        return all(meet(a, self.join[b][c]) == self.join[meet(a, b)][meet(a, c)]
                   for a in rng for b in rng for c in rng)

    @cached_property
    def is_modular_lattice(self) -> bool:
        if not self.is_lattice:
            return False
        meet = lambda a, b: self.meet_mask((1 << a) | (1 << b))
        rng = range(self.n)
        return all(self.join[a][meet(c, b)] == meet(self.join[a][c], b)
                   for a in rng for b in rng if self.leq(a, b) for c in rng)

    @cached_property
    def is_semidistributive_at_zero(self) -> bool:
        """Whenever the meets of {p} u R and {q} u R exist and are zero, the
        meet of {p+q} u R exists and is zero.

        R ranges over subsets of the carrier, which is complete because
        meets depend only on the underlying set, not on listing order or
        repetition.
        """
        zero = self.zero
        for rest in submasks(self.full_mask):
            for p in range(self.n):
                if self.meet_mask(rest | (1 << p)) != zero:
                    continue
                for q in range(self.n):
                    if self.meet_mask(rest | (1 << q)) != zero:
                        continue
                    if self.meet_mask(rest | (1 << self.join[p][q])) != zero:
                        return False
        return True

    @cached_property
    def is_distributive_join_semilattice(self) -> bool:
        """Every a <= b + c splits as a = b* + c* with b* <= b, c* <= c."""
        down = self.poset.down
        for b in range(self.n):
            for c in range(self.n):
                bc = self.join[b][c]
                for a in bits(self.poset.down[bc]):
                    if any(self.join[bs][cs] == a
                           for bs in bits(down[b]) for cs in bits(down[c])):
                        continue
                    return False
        return True

    def __repr__(self) -> str:
        return f"JoinSemilattice({self.n} elements, zero={self.labels[self.zero]})"


def semilattice_from_poset(p: Poset) -> JoinSemilattice:
    """Compute the join table of ``p``; error names the first offending pair."""
    join = []
    for a in range(p.n):
        row = []
        for b in range(p.n):
            uppers = p.up[a] & p.up[b]
            least = None
            for u in bits(uppers):
                if not uppers & ~p.up[u]:
                    least = u
                    break
            if least is None:
                kind = "no upper bound" if uppers == 0 else "no least upper bound"
                raise StructureError(
                    f"{kind} for ({p.labels[a]},{p.labels[b]}); not a join semilattice")
            row.append(least)
        join.append(tuple(row))
    return JoinSemilattice(p, tuple(join))


def structural_predicates(s: JoinSemilattice) -> StructureFlags:
    """Evaluate all structural flags of ``s`` (each cached on the instance)."""
    return StructureFlags(
        is_lattice=s.is_lattice,
        is_distributive_lattice=s.is_distributive_lattice,
        is_modular_lattice=s.is_modular_lattice,
        is_semidistributive_at_zero=s.is_semidistributive_at_zero,
        is_distributive_join_semilattice=s.is_distributive_join_semilattice,
    )


@dataclass(frozen=True)
class AtomSummary:
    atoms: tuple[int, ...]
    atomic: bool  # every nonzero element dominates an atom


def atoms(p: Poset | JoinSemilattice) -> AtomSummary:
    """Atoms of the order plus whether every nonzero element dominates one."""
    base = p.poset if isinstance(p, JoinSemilattice) else p
    found = tuple(a for a in bits(base.nonzero_mask)
                  if base.down[a] == (1 << base.zero) | (1 << a))
    covered = 0
    for a in found:
        covered |= base.up[a]
    return AtomSummary(found, not (base.nonzero_mask & ~covered))


# -- catalog ----------------------------------------------------------

def _letters(k: int) -> list[str]:
    out = []
    for i in range(k):
        q, r = divmod(i, 26)
        out.append(chr(ord("a") + r) + (str(q) if q else ""))
    return out


def _chain(k: int) -> JoinSemilattice:
    labels = ["0"] + _letters(k - 1)
    pairs = [(i, i + 1) for i in range(k - 1)]
    return semilattice_from_poset(poset_from_relation(k, pairs, labels=labels))


def _boolean_labels(k: int) -> list[str]:
    if k == 0:
        return ["0"]
    if k == 1:
        return ["0", "1"]
    if k == 2:
        return ["0", "a", "b", "1"]
    names = []
    for m in range(1 << k):
        if m == 0:
            names.append("0")
        elif m == (1 << k) - 1:
            names.append("1")
        elif k == 3 and m.bit_count() == 2:
            # coatom c_i is the join of the two atoms other than a_i
            names.append(f"c{(7 ^ m).bit_length()}")
        else:
            names.append("+".join(f"a{i + 1}" for i in bits(m)))
    return names


def _subset_semilattice(k: int, labels: Sequence[str]) -> JoinSemilattice:
    n = 1 << k
    up = tuple(mask_of(b for b in range(n) if not m & ~b) for m in range(n))
    return semilattice_from_poset(
        Poset(n, up, 0, tuple(labels)))


def _boolean(k: int) -> JoinSemilattice:
    return _subset_semilattice(k, _boolean_labels(k))


def _powerset(k: int) -> JoinSemilattice:
    labels = ["0" if m == 0 else "".join(str(i + 1) for i in bits(m))
              for m in range(1 << k)]
    return _subset_semilattice(k, labels)


def powerset_semilattice(points: Sequence[str]) -> JoinSemilattice:
    """Powerset of a labeled point set, ordered by inclusion.

    Subset labels are "+"-joined point labels with "0" for the empty
    set, so point labels may not be "0" or contain "+".
    """
    pts = list(points)
    if len(set(pts)) != len(pts):
        raise StructureError("point labels must be unique")
    for q in pts:
        if q == "0" or "+" in q:
            raise StructureError(f"point label {q!r} collides with subset labels")
    check_guard(1 << len(pts), DEFAULT_CARRIER_GUARD, "powerset carrier")
    labels = ["0" if m == 0 else "+".join(pts[i] for i in bits(m))
              for m in range(1 << len(pts))]
    return _subset_semilattice(len(pts), labels)


def _m_lattice(r: int) -> JoinSemilattice:
    labels = ["0"] + (["a", "b", "c"] if r == 3 else [f"a{i + 1}" for i in range(r)]) + ["1"]
    pairs = [(0, i) for i in range(1, r + 1)] + [(i, r + 1) for i in range(1, r + 1)]
    return semilattice_from_poset(poset_from_relation(r + 2, pairs, labels=labels))


def _n5() -> JoinSemilattice:
    labels = ["0", "a", "b", "d", "1"]
    pairs = [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]
    return semilattice_from_poset(poset_from_relation(5, pairs, labels=labels))


def _product(sizes: Sequence[int]) -> JoinSemilattice:
    if not sizes or any(k < 1 for k in sizes):
        raise StructureError("product factors must be chains of size >= 1")
    n = 1
    for k in sizes:
        n *= k
    check_guard(n, DEFAULT_CARRIER_GUARD, "carrier")
    coords = list(itertools.product(*(range(k) for k in sizes)))
    index = {c: i for i, c in enumerate(coords)}
    up = tuple(mask_of(index[d] for d in coords
                       if all(x <= y for x, y in zip(c, d)))
               for c in coords)
    labels = tuple(".".join(str(x) for x in c) for c in coords)
    return semilattice_from_poset(Poset(n, up, index[tuple(0 for _ in sizes)], labels))


CATALOG_NAMES = ("chain", "boolean", "M", "N5", "powerset", "product")


def catalog(name: str, *params: int) -> JoinSemilattice:
    """Named small structures: chain(k), boolean(k), M(r), N5, powerset(k),
    product(k1,...,km).

    Labeling: chains use 0,a,b,...; boolean(2) is 0,a,b,1; boolean(3) is
    0,a1,a2,a3,c1,c2,c3,1 with c_i the join of the other two atoms; M(3)
    has atoms a,b,c and M(r) otherwise a1..ar; N5 is 0<a<b<1 with d
    satisfying d+a=1 and meet(d,b)=0.
    """
    if name == "chain":
        if len(params) != 1 or params[0] < 1:
            raise StructureError("chain(k) needs one parameter k >= 1")
        check_guard(params[0], DEFAULT_CARRIER_GUARD, "carrier")
        return _chain(params[0])
    if name == "boolean":
        if len(params) != 1 or not 0 <= params[0] <= 4:
            raise StructureError("boolean(k) needs one parameter 0 <= k <= 4")
        return _boolean(params[0])
    if name == "M":
        if len(params) != 1 or params[0] < 1:
            raise StructureError("M(r) needs one parameter r >= 1")
        check_guard(params[0] + 2, DEFAULT_CARRIER_GUARD, "carrier")
        return _m_lattice(params[0])
    if name == "N5":
        if params:
            raise StructureError("N5 takes no parameters")
        return _n5()
    if name == "powerset":
        if len(params) != 1 or not 0 <= params[0] <= 4:
            raise StructureError("powerset(k) needs one parameter 0 <= k <= 4")
        return _powerset(params[0])
    if name == "product":
        if not params:
            raise StructureError("product needs at least one chain size")
        return _product(params)
    raise StructureError(f"unknown catalog name {name!r}; "
                         f"known: {', '.join(CATALOG_NAMES)}")
