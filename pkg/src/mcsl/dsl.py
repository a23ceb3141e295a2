"""Line-oriented text format for small ordered structures and contacts.

A file is a sequence of blocks.  A block starts with a header line and
is followed by property lines; ``#`` starts a comment, blank lines are
ignored, indentation is free.  Grammar::

    semilattice NAME            (or: poset NAME)
      elements LBL LBL ...
      zero LBL                  (optional; inferred as the unique minimum)
      order LO<HI LO<HI ...     (any pairs; closed reflexively/transitively)

    multicontact NAME on BASE kind=KIND
      sets {x,y} {z} ...        (for kinds that take sets)

    weakcontact NAME on BASE pairs (x,y) ...           (seed pairs, closed)
    weakcontact NAME on BASE explicit-pairs (x,y) ...  (validated as written)

    preclosure NAME on BASE map x->y y->y ...

    eventstructure NAME
      events LBL LBL ...
      order LO<HI ...           (causality; no zero element)
      con {x} {x,y} ...         (the empty set is implicit)

KIND is one of ``overlap``, ``generators`` (sets are closure seeds),
``explicit`` (sets are the whole family, validated), ``atoms``,
``cardinality:<n>``, ``largest-of:<weakcontact>``,
``smallest-of:<weakcontact>``, ``preclosure:<preclosure>``.  Set and
pair tokens may sit on the header line or on continuation lines
repeating the keyword.

Serialization is canonical: elements in carrier order, covering pairs
only, families sorted, weak contacts written as ``explicit-pairs`` of
the full relation.  ``parse(serialize(f))`` rebuilds equal structures,
and ``serialize(parse(text))`` is idempotent on any valid input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .catalog import CatalogStructures, resolve_catalog
from .contacts import (
    EventStructure,
    Multicontact,
    PreClosure,
    WeakContact,
    atom_generated,
    delta_n,
    generate_multicontact,
    largest_multicontact,
    multicontact_from_family,
    overlap_multicontact,
    preclosure_multicontact,
    smallest_multicontact,
    validate_event_structure,
    validate_multicontact,
    weak_contact_from_pairs,
)
from .order import (
    DEFAULT_CARRIER_GUARD,
    JoinSemilattice,
    Poset,
    StructureError,
    bits,
    check_guard,
    mask_of,
    poset_from_relation,
    semilattice_from_poset,
)


class ParseError(StructureError):
    """A malformed or inconsistent structure file; carries the line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Declaration:
    kind: str
    name: str
    base: Optional[str]
    value: object
    meta: tuple = field(default=(), compare=False)  # canonical source data


@dataclass(frozen=True)
class StructureFile:
    declarations: tuple[Declaration, ...]

    def get(self, name: str) -> Declaration:
        for d in self.declarations:
            if d.name == name:
                return d
        raise StructureError(f"no declaration named {name!r}")

    def contacts(self) -> tuple[Declaration, ...]:
        return tuple(d for d in self.declarations
                     if d.kind in ("multicontact", "weakcontact"))

    def names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.declarations)


_HEADERS = ("semilattice", "poset", "multicontact", "weakcontact",
            "preclosure", "eventstructure")
_LABEL_RE = re.compile(r"^[^\s<>{}(),#]+$")
_SET_RE = re.compile(r"^\{([^{}]*)\}$")
_PAIR_RE = re.compile(r"^\(([^\s(),]+),([^\s(),]+)\)$")
_MAP_RE = re.compile(r"^([^\s<>{}(),#]+)->([^\s<>{}(),#]+)$")
_KIND_RE = re.compile(r"^kind=([a-z-]+)(?::([A-Za-z0-9_.-]+))?$")


def _check_label(line: int, label: str) -> str:
    if not _LABEL_RE.match(label) or "->" in label:
        raise ParseError(line, f"bad element label {label!r}")
    return label


def _split_order_token(line: int, token: str) -> tuple[str, str]:
    if token.count("<") != 1:
        raise ParseError(line, f"order token {token!r} is not LO<HI")
    lo, hi = token.split("<")
    return _check_label(line, lo), _check_label(line, hi)


def _set_token(line: int, labels: Sequence[str], token: str) -> int:
    m = _SET_RE.match(token)
    if not m:
        raise ParseError(line, f"set token {token!r} is not {{x,y,...}}")
    body = m.group(1)
    if not body:
        return 0
    idx = {x: i for i, x in enumerate(labels)}
    out = 0
    for part in body.split(","):
        if part not in idx:
            raise ParseError(line, f"unknown element label {part!r}")
        out |= 1 << idx[part]
    return out


def _blocks(text: str) -> Iterator[list[tuple[int, list[str]]]]:
    cur: Optional[list] = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] in _HEADERS:
            if cur:
                yield cur
            cur = [(no, toks)]
        elif cur is None:
            raise ParseError(no, f"expected a block header, got {toks[0]!r}")
        else:
            cur.append((no, toks))
    if cur:
        yield cur


def _gather(block: list, keyword: str, header_rest: list[str],
            header_no: int) -> list[tuple[int, str]]:
    """Tokens after ``keyword`` on the header plus on continuation lines."""
    out = [(header_no, t) for t in header_rest]
    for no, toks in block[1:]:
        if toks[0] == keyword:
            out.extend((no, t) for t in toks[1:])
    return out


def _wrap(no: int, err: StructureError) -> ParseError:
    return ParseError(no, str(err))


def _parse_order_block(block: list, guard: int) -> Declaration:
    no, header = block[0]
    if len(header) != 2:
        raise ParseError(no, f"usage: {header[0]} NAME")
    kind, name = header
    labels: Optional[list[str]] = None
    zero: Optional[str] = None
    pairs: list[tuple[int, str, str]] = []
    for pno, toks in block[1:]:
        if toks[0] == "elements":
            if labels is not None:
                raise ParseError(pno, "duplicate elements line")
            labels = [_check_label(pno, t) for t in toks[1:]]
            if len(set(labels)) != len(labels):
                raise ParseError(pno, "element labels must be unique")
        elif toks[0] == "zero":
            if len(toks) != 2 or zero is not None:
                raise ParseError(pno, "zero takes exactly one label")
            zero = toks[1]
        elif toks[0] == "order":
            pairs.extend((pno, *_split_order_token(pno, t)) for t in toks[1:])
        else:
            raise ParseError(pno, f"unknown property {toks[0]!r} in a "
                                  f"{kind} block")
    if not labels:
        raise ParseError(no, f"{kind} {name!r} has no elements line")
    check_guard(len(labels), guard, "carrier")
    idx = {x: i for i, x in enumerate(labels)}
    rel = []
    for pno, lo, hi in pairs:
        if lo not in idx or hi not in idx:
            missing = lo if lo not in idx else hi
            raise ParseError(pno, f"unknown element label {missing!r}")
        rel.append((idx[lo], idx[hi]))
    if zero is not None and zero not in idx:
        raise ParseError(no, f"unknown zero label {zero!r}")
    try:
        p = poset_from_relation(len(labels), rel,
                                zero_hint=None if zero is None else idx[zero],
                                labels=labels, guard=guard)
        value: object = p if kind == "poset" else semilattice_from_poset(p)
    except StructureError as err:
        raise _wrap(no, err) from None
    return Declaration(kind, name, None, value)


def _base_poset(decl: Declaration) -> Poset:
    v = decl.value
    return v.poset if isinstance(v, JoinSemilattice) else v


def _parse_multicontact(block: list, ns: dict) -> Declaration:
    no, header = block[0]
    if len(header) < 5 or header[2] != "on":
        raise ParseError(no, "usage: multicontact NAME on BASE kind=KIND ...")
    name, base_name = header[1], header[3]
    m = _KIND_RE.match(header[4])
    if not m:
        raise ParseError(no, f"bad kind token {header[4]!r}")
    kind, param = m.group(1), m.group(2)
    if base_name not in ns or ns[base_name].kind not in ("semilattice", "poset"):
        raise ParseError(no, f"unknown base {base_name!r}")
    base_decl = ns[base_name]
    p = _base_poset(base_decl)
    raw_sets = _gather(block, "sets", header[5:], no)
    if raw_sets and raw_sets[0][1] == "sets":
        raw_sets = raw_sets[1:]
    sets = tuple(_set_token(sno, p.labels, t) for sno, t in raw_sets)
    needs_sets = kind in ("generators", "explicit", "atoms")
    if sets and not needs_sets:
        raise ParseError(no, f"kind={kind} takes no sets")

    try:
        if kind == "overlap":
            value = overlap_multicontact(p)
        elif kind == "generators":
            value = generate_multicontact(p, sets)
            sets = value.generators
        elif kind == "explicit":
            value = multicontact_from_family(p, sets)
            report = validate_multicontact(value)
            if not report.ok:
                fail = report.failures()[0]
                raise ParseError(no, f"explicit family violates {fail.axiom}: "
                                     f"{_witness_text(p, fail.witness)}")
            sets = value.raw_family
        elif kind == "atoms":
            if not isinstance(base_decl.value, JoinSemilattice):
                raise ParseError(no, "kind=atoms needs a semilattice base")
            value = atom_generated(base_decl.value, sets)
            sets = tuple(sorted(set(sets)))
        elif kind == "cardinality":
            if param is None or not param.isdigit():
                raise ParseError(no, "kind=cardinality:<n> needs an integer")
            value = delta_n(p, int(param))
        elif kind in ("largest-of", "smallest-of"):
            if param is None or param not in ns or ns[param].kind != "weakcontact":
                raise ParseError(no, f"kind={kind}:<name> needs a declared "
                                     f"weak contact")
            wc = ns[param].value
            if wc.base != p:
                raise ParseError(no, f"weak contact {param!r} lives on a "
                                     f"different base")
            value = (largest_multicontact if kind == "largest-of"
                     else smallest_multicontact)(wc)
        elif kind == "preclosure":
            if param is None or param not in ns or ns[param].kind != "preclosure":
                raise ParseError(no, "kind=preclosure:<name> needs a declared "
                                     "pre-closure")
            kc = ns[param].value
            if kc.base != p:
                raise ParseError(no, f"pre-closure {param!r} lives on a "
                                     f"different base")
            value = preclosure_multicontact(kc)
        else:
            raise ParseError(no, f"unknown multicontact kind {kind!r}")
    except ParseError:
        raise
    except StructureError as err:
        raise _wrap(no, err) from None
    token = kind if param is None else f"{kind}:{param}"
    return Declaration("multicontact", name, base_name, value, (token, sets))


def _parse_weakcontact(block: list, ns: dict) -> Declaration:
    no, header = block[0]
    if len(header) < 5 or header[2] != "on" or header[4] not in (
            "pairs", "explicit-pairs"):
        raise ParseError(no, "usage: weakcontact NAME on BASE "
                             "pairs|explicit-pairs (x,y) ...")
    name, base_name, mode = header[1], header[3], header[4]
    if base_name not in ns or ns[base_name].kind not in ("semilattice", "poset"):
        raise ParseError(no, f"unknown base {base_name!r}")
    p = _base_poset(ns[base_name])
    pairs = []
    for pno, t in _gather(block, mode, header[5:], no):
        m = _PAIR_RE.match(t)
        if not m:
            raise ParseError(pno, f"pair token {t!r} is not (x,y)")
        try:
            pairs.append((p.index(m.group(1)), p.index(m.group(2))))
        except StructureError as err:
            raise _wrap(pno, err) from None
    try:
        value = weak_contact_from_pairs(p, pairs, close=mode == "pairs")
    except StructureError as err:
        raise _wrap(no, err) from None
    return Declaration("weakcontact", name, base_name, value, (mode,))


def _parse_preclosure(block: list, ns: dict) -> Declaration:
    no, header = block[0]
    if len(header) < 4 or header[2] != "on":
        raise ParseError(no, "usage: preclosure NAME on BASE map x->y ...")
    name, base_name = header[1], header[3]
    if base_name not in ns or ns[base_name].kind not in ("semilattice", "poset"):
        raise ParseError(no, f"unknown base {base_name!r}")
    p = _base_poset(ns[base_name])
    rest = header[4:]
    if rest and rest[0] == "map":
        rest = rest[1:]
    table: dict[int, int] = {}
    for pno, t in _gather(block, "map", rest, no):
        m = _MAP_RE.match(t)
        if not m:
            raise ParseError(pno, f"map token {t!r} is not x->y")
        try:
            a, b = p.index(m.group(1)), p.index(m.group(2))
        except StructureError as err:
            raise _wrap(pno, err) from None
        if a in table:
            raise ParseError(pno, f"duplicate image for {m.group(1)!r}")
        table[a] = b
    table.setdefault(p.zero, p.zero)
    missing = [p.labels[a] for a in range(p.n) if a not in table]
    if missing:
        raise ParseError(no, f"elements lack an image: {', '.join(missing)}")
    try:
        value = PreClosure(p, tuple(table[a] for a in range(p.n)))
    except StructureError as err:
        raise _wrap(no, err) from None
    return Declaration("preclosure", name, base_name, value)


def _parse_eventstructure(block: list) -> Declaration:
    no, header = block[0]
    if len(header) != 2:
        raise ParseError(no, "usage: eventstructure NAME")
    name = header[1]
    labels: Optional[list[str]] = None
    pairs: list[tuple[int, str, str]] = []
    con_masks: list[int] = []
    con_lines: list[tuple[int, str]] = []
    for pno, toks in block[1:]:
        if toks[0] == "events":
            if labels is not None:
                raise ParseError(pno, "duplicate events line")
            labels = [_check_label(pno, t) for t in toks[1:]]
            if len(set(labels)) != len(labels):
                raise ParseError(pno, "event labels must be unique")
        elif toks[0] == "order":
            pairs.extend((pno, *_split_order_token(pno, t)) for t in toks[1:])
        elif toks[0] == "con":
            con_lines.extend((pno, t) for t in toks[1:])
        else:
            raise ParseError(pno, f"unknown property {toks[0]!r} in an "
                                  f"eventstructure block")
    if not labels:
        raise ParseError(no, f"eventstructure {name!r} has no events line")
    k = len(labels)
    idx = {x: i for i, x in enumerate(labels)}
    order = [1 << e for e in range(k)]
    for pno, lo, hi in pairs:
        if lo not in idx or hi not in idx:
            missing = lo if lo not in idx else hi
            raise ParseError(pno, f"unknown event label {missing!r}")
        order[idx[lo]] |= 1 << idx[hi]
    changed = True             # reflexive-transitive closure of the causality
    while changed:
        changed = False
        for e in range(k):
            row = order[e]
            for f in bits(row):
                if order[f] & ~row:
                    order[e] = row = row | order[f]
                    changed = True
    for pno, t in con_lines:
        con_masks.append(_set_token(pno, labels, t))
    try:
        value = EventStructure(tuple(labels), tuple(order),
                               frozenset(con_masks) | {0})
    except StructureError as err:
        raise _wrap(no, err) from None
    report = validate_event_structure(value)
    if not report.ok:
        fail = report.failures()[0]
        shown = {}
        for key, v in (fail.witness or {}).items():
            if key in ("set", "missing"):
                shown[key] = "{" + ",".join(labels[i] for i in bits(v)) + "}"
            else:
                shown[key] = labels[v]
        raise ParseError(no, f"consistency family violates {fail.axiom}: "
                             f"{shown}")
    return Declaration("eventstructure", name, None, value)


def parse(text: str, guard: int = DEFAULT_CARRIER_GUARD) -> StructureFile:
    """Parse a structure file; errors carry the offending line number."""
    ns: dict[str, Declaration] = {}
    decls: list[Declaration] = []
    for block in _blocks(text):
        no, header = block[0]
        kind = header[0]
        if kind in ("semilattice", "poset"):
            d = _parse_order_block(block, guard)
        elif kind == "multicontact":
            d = _parse_multicontact(block, ns)
        elif kind == "weakcontact":
            d = _parse_weakcontact(block, ns)
        elif kind == "preclosure":
            d = _parse_preclosure(block, ns)
        else:
            d = _parse_eventstructure(block)
        if d.name in ns:
            raise ParseError(no, f"duplicate name {d.name!r}")
        ns[d.name] = d
        decls.append(d)
    return StructureFile(tuple(decls))


def _witness_text(p: Poset, witness: Optional[dict]) -> str:
    if witness is None:
        return ""
    parts = []
    for key, v in witness.items():
        if key in ("set", "missing"):
            parts.append(f"{key}={p.label_set(v)}")
        else:
            parts.append(f"{key}={p.labels[v]}" if isinstance(v, int) else
                         f"{key}={v}")
    return " ".join(parts)


# -- serialization -----------------------------------------------------------

def _order_lines(kind: str, name: str, p: Poset) -> list[str]:
    out = [f"{kind} {name}",
           "  elements " + " ".join(p.labels),
           f"  zero {p.labels[p.zero]}"]
    if p.covers:
        out.append("  order " + " ".join(
            f"{p.labels[a]}<{p.labels[b]}" for a, b in p.covers))
    return out


def _serialize_decl(d: Declaration) -> list[str]:
    if d.kind in ("semilattice", "poset"):
        return _order_lines(d.kind, d.name, _base_poset(d))
    if d.kind == "multicontact":
        token, sets = d.meta
        p = d.value.base
        out = [f"multicontact {d.name} on {d.base} kind={token}"]
        if sets:
            out.append("  sets " + " ".join(p.label_set(m) for m in sorted(sets)))
        return out
    if d.kind == "weakcontact":
        wc: WeakContact = d.value
        pairs = " ".join(f"({wc.base.labels[a]},{wc.base.labels[b]})"
                         for a, b in wc.pairs())
        return [f"weakcontact {d.name} on {d.base} explicit-pairs {pairs}".rstrip()]
    if d.kind == "preclosure":
        kc: PreClosure = d.value
        p = kc.base
        entries = " ".join(f"{p.labels[a]}->{p.labels[kc.k[a]]}"
                           for a in range(p.n) if a != p.zero)
        return [f"preclosure {d.name} on {d.base} map {entries}".rstrip()]
    e: EventStructure = d.value
    out = [f"eventstructure {d.name}", "  events " + " ".join(e.labels)]
    covers = []
    for x in range(e.n):
        strict = e.order[x] ^ (1 << x)
        for y in bits(strict):
            if not any(z != y and e.order[z] >> y & 1 for z in bits(strict)):
                covers.append((x, y))
    if covers:
        out.append("  order " + " ".join(
            f"{e.labels[a]}<{e.labels[b]}" for a, b in sorted(covers)))
    cons = [m for m in sorted(e.con) if m]
    if cons:
        out.append("  con " + " ".join(
            "{" + ",".join(e.labels[i] for i in bits(m)) + "}" for m in cons))
    return out


def serialize(sf: StructureFile) -> str:
    """Canonical text for a structure file."""
    chunks = ["\n".join(_serialize_decl(d)) for d in sf.declarations]
    return "\n\n".join(chunks) + "\n"


# -- catalog emission --------------------------------------------------------

def catalog_structure_file(name: str) -> StructureFile:
    """The named catalog entry as declarations (base, relation, family)."""
    entry = resolve_catalog(name)
    st: CatalogStructures = entry.build()
    base_name = entry.name.split("-")[0]
    decls = [Declaration("semilattice", base_name, None, st.semilattice)]
    if st.weakcontact is not None:
        decls.append(Declaration("weakcontact", "w", base_name,
                                 st.weakcontact, ("explicit-pairs",)))
    if st.multicontact is not None:
        kind = entry.contact_kind or "explicit"
        if kind in ("largest-of", "smallest-of"):
            token: str = f"{kind}:w"
            sets: tuple[int, ...] = ()
        elif kind == "explicit":
            token = "explicit"
            fam = st.multicontact.raw_family
            sets = fam if fam is not None else st.multicontact.sorted_family
        else:
            token = kind
            sets = ()
        decls.append(Declaration("multicontact", "D", base_name,
                                 st.multicontact, (token, sets)))
    return StructureFile(tuple(decls))


def emit_catalog(name: str) -> str:
    return serialize(catalog_structure_file(name))
