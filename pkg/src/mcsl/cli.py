"""Command line interface.

Subcommands: ``check``, ``embed``, ``enumerate``, ``catalog``,
``verify-theorems``, ``convert``.  Structure arguments are file paths or
``catalog:NAME`` references.  Exit codes: 0 when every requested check
passes, 1 when some check is false (witnesses are printed), 2 on input
or guard errors.  ``--json`` selects the machine-readable report, which
serializes identically across repeated serial and parallel runs.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Optional

from . import reports
from .catalog import catalog_entries, resolve_catalog
from .conditions import (
    check_additivity,
    check_condition_6_1,
    check_m1,
    check_m1_plus,
    check_m2,
)
from .contacts import (
    EventStructure,
    Multicontact,
    WeakContact,
    event_structure_to_poset,
    poset_to_event_structure,
    validate_multicontact,
    validate_weak_contact,
    weak_contact_additive,
)
from .dsl import (
    Declaration,
    ParseError,
    StructureFile,
    catalog_structure_file,
    parse,
    serialize,
)
from .embedding import MODES, as_topological_model, canonical_embedding
from .explorer import (
    EVENT_GUARD,
    FAMILY_GUARD,
    SEMILATTICE_GUARD,
    THEOREM_SUITES,
    enumerate_event_structures,
    enumerate_multicontacts,
    enumerate_semilattices,
    enumerate_weak_contacts,
    verify_theorem,
)
from .order import (
    DEFAULT_CARRIER_GUARD,
    GuardError,
    JoinSemilattice,
    Poset,
    StructureError,
    bits,
    semilattice_from_poset,
)

ENUM_KINDS = ("semilattices", "multicontacts", "weak-contacts",
              "event-structures")


def _load(ref: str, guard: int) -> StructureFile:
    if ref.startswith("catalog:"):
        return catalog_structure_file(ref[len("catalog:"):])
    try:
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise StructureError(f"cannot read {ref!r}: {err.strerror}") from None
    return parse(text, guard=guard)


def _order_decls(sf: StructureFile) -> list[Declaration]:
    return [d for d in sf.declarations if d.kind in ("semilattice", "poset")]


def _semilattice_for(sf: StructureFile, base: Poset
                     ) -> Optional[JoinSemilattice]:
    for d in sf.declarations:
        if d.kind == "semilattice" and d.value.poset == base:
            return d.value
    try:
        return semilattice_from_poset(base)
    except StructureError:
        return None


def _contact_decls(sf: StructureFile) -> list[Declaration]:
    out = [d for d in sf.declarations
           if d.kind in ("multicontact", "weakcontact")]
    if not out:
        raise StructureError("no multicontact or weakcontact declaration found")
    return out


# -- check ---------------------------------------------------------------------


def _check_one(sf: StructureFile, decl: Declaration,
               m1_rows: int, m2_rows: int) -> dict:
    contact = decl.value
    base = contact.base
    labels = base.labels
    s = _semilattice_for(sf, base)
    section: dict = {
        "name": decl.name,
        "base": reports.base_payload(base),
        "contact": reports.contact_payload(contact),
    }
    conditions = []
    note = None
    if isinstance(contact, Multicontact):
        ax = validate_multicontact(contact)
        if s is None:
            note = ("condition checks skipped: the base is not a join "
                    "semilattice")
        else:
            conditions = [
                check_additivity(s, contact),
                check_m1(s, contact),
                check_m1_plus(s, contact, n_max=m1_rows),
                check_m2(s, contact, n_max=m2_rows),
                check_condition_6_1(s, contact),
            ]
    else:
        ax = validate_weak_contact(contact)
        if s is None:
            note = ("condition checks skipped: the base is not a join "
                    "semilattice")
        else:
            conditions = [
                weak_contact_additive(contact, s),
                check_condition_6_1(s, contact),
            ]
    section["axioms"] = reports.validation_payload(ax, labels)
    section["conditions"] = [reports.condition_payload(c, labels)
                             for c in conditions]
    if note:
        section["note"] = note
    section["ok"] = ax.ok and all(c.verdict for c in conditions)
    return section


def _cmd_check(args: argparse.Namespace) -> int:
    sf = _load(args.source, args.guard)
    sections = [_check_one(sf, d, args.m1_plus_rows, args.m2_rows)
                for d in _contact_decls(sf)]
    ok = all(sec["ok"] for sec in sections)
    payload = reports.report("check-report", source=args.source,
                             results=sections, ok=ok)
    if args.json:
        sys.stdout.write(reports.json_text(payload))
    else:
        sys.stdout.write(reports.render_check_text(payload))
    return 0 if ok else 1


# -- embed ---------------------------------------------------------------------


def _cmd_embed(args: argparse.Namespace) -> int:
    sf = _load(args.source, args.guard)
    mcs = [d for d in sf.declarations if d.kind == "multicontact"]
    if not mcs:
        raise StructureError("no multicontact declaration found")
    decl = mcs[0]
    contact: Multicontact = decl.value
    s = _semilattice_for(sf, contact.base)
    if s is None:
        raise StructureError("embedding needs a join semilattice base; "
                             f"{decl.base!r} is not one")
    emb = canonical_embedding(s, contact, mode=args.mode,
                              bounded=args.bounded, guard=args.guard)
    verdict = emb.verify()
    payload = reports.report("embed-report", source=args.source,
                             name=decl.name,
                             embedding=reports.embedding_payload(emb, verdict),
                             ok=verdict.is_embedding)
    if args.topology:
        try:
            model = as_topological_model(emb)
            payload["topology"] = {
                "points": list(model.points),
                "closures": {q: list(v) for q, v in model.closures.items()},
                "image": {a: list(v) for a, v in model.image.items()},
            }
        except StructureError as err:
            payload["topology_error"] = str(err)
    if args.json:
        sys.stdout.write(reports.json_text(payload))
    else:
        text = reports.render_embed_text(payload)
        if "topology_error" in payload:
            text += f"topology: unavailable ({payload['topology_error']})\n"
        sys.stdout.write(text)
    return 0 if verdict.is_embedding else 1


# -- enumerate -----------------------------------------------------------------


def _order_line(p: Poset) -> str:
    cov = " ".join(f"{p.labels[a]}<{p.labels[b]}" for a, b in p.covers)
    return ("elements " + " ".join(p.labels)
            + (f"; order {cov}" if cov else ""))


def _family_line(d: Multicontact) -> str:
    return " ".join("{" + ",".join(d.base.labels[i] for i in bits(m)) + "}"
                    for m in d.sorted_family if m)


def _pairs_line(w: WeakContact) -> str:
    return " ".join(f"({w.base.labels[a]},{w.base.labels[b]})"
                    for a, b in w.pairs())


def _event_line(e: EventStructure) -> str:
    rel = [f"{e.labels[a]}<{e.labels[b]}" for a in range(e.n)
           for b in bits(e.order[a]) if a != b]
    con = " ".join("{" + ",".join(e.labels[i] for i in bits(c)) + "}"
                   for c in sorted(e.con) if c)
    head = "events " + " ".join(e.labels)
    if rel:
        head += "; order " + " ".join(rel)
    return head + (f"; con {con}" if con else "; con (only the empty set)")


def _cmd_enumerate(args: argparse.Namespace) -> int:
    kind = args.kind
    request: dict = {"kind": kind, "up_to_iso": args.up_to_iso}
    if kind in ("semilattices", "event-structures"):
        if args.size is None:
            raise StructureError(f"enumerating {kind} needs --size")
        request["size"] = args.size
        if kind == "semilattices":
            guard = args.guard if args.guard is not None else SEMILATTICE_GUARD
            items = list(enumerate_semilattices(args.size, guard=guard,
                                                up_to_iso=args.up_to_iso))
            structures = [reports.base_payload(s.poset) for s in items]
            lines = [_order_line(s.poset) for s in items]
        else:
            guard = args.guard if args.guard is not None else EVENT_GUARD
            items = list(enumerate_event_structures(args.size, guard=guard))
            structures = [{"events": list(e.labels),
                           "order": [[e.labels[a], e.labels[b]]
                                     for a in range(e.n)
                                     for b in bits(e.order[a]) if a != b],
                           "con": [[e.labels[i] for i in bits(c)]
                                   for c in sorted(e.con)]}
                          for e in items]
            lines = [_event_line(e) for e in items]
    else:
        if args.base is None:
            raise StructureError(f"enumerating {kind} needs --base")
        sf = _load(args.base, args.guard or DEFAULT_CARRIER_GUARD)
        orders = _order_decls(sf)
        if not orders:
            raise StructureError("the base file declares no poset or "
                                 "semilattice")
        base_decl = orders[0]
        v = base_decl.value
        p = v.poset if isinstance(v, JoinSemilattice) else v
        request["base"] = base_decl.name
        guard = args.guard if args.guard is not None else FAMILY_GUARD
        if kind == "multicontacts":
            items = list(enumerate_multicontacts(p, guard=guard,
                                                 up_to_iso=args.up_to_iso))
            structures = [{"family": [[p.labels[i] for i in bits(m)]
                                      for m in d.sorted_family if m]}
                          for d in items]
            lines = [_family_line(d) for d in items]
        else:
            items = list(enumerate_weak_contacts(p, guard=guard,
                                                 up_to_iso=args.up_to_iso))
            structures = [{"pairs": [[p.labels[a], p.labels[b]]
                                     for a, b in w.pairs()]}
                          for w in items]
            lines = [_pairs_line(w) for w in items]
    payload = reports.report("enumerate-report", request=request,
                             count=len(structures), structures=structures)
    if args.json:
        sys.stdout.write(reports.json_text(payload))
    else:
        out = [f"count: {len(lines)}"]
        out += [f"  {i}: {line}" for i, line in enumerate(lines)]
        sys.stdout.write("\n".join(out) + "\n")
    return 0


# -- catalog -------------------------------------------------------------------


def _cmd_catalog(args: argparse.Namespace) -> int:
    if args.name is None:
        entries = [{"name": e.name, "summary": e.summary}
                   for e in catalog_entries()]
        payload = reports.report("catalog-report", entries=entries)
        if args.json:
            sys.stdout.write(reports.json_text(payload))
        else:
            width = max(len(e["name"]) for e in entries)
            for e in entries:
                sys.stdout.write(f"{e['name']:<{width}}  {e['summary']}\n")
            sys.stdout.write("parametrized: M<r>-D<h> for r >= h+2 "
                             "(cardinality-bounded families)\n")
        return 0
    entry = resolve_catalog(args.name)
    if args.emit:
        text = serialize(catalog_structure_file(entry.name))
        if args.json:
            payload = reports.report("catalog-report", name=entry.name,
                                     summary=entry.summary, dsl=text)
            sys.stdout.write(reports.json_text(payload))
        else:
            sys.stdout.write(text)
        return 0
    checks = [{"check": c.kind,
               "params": [list(x) if isinstance(x, (tuple, list, set, frozenset))
                          else x for x in c.params],
               "expected": c.expected}
              for c in entry.checks]
    payload = reports.report("catalog-report", name=entry.name,
                             summary=entry.summary, checks=checks)
    if args.json:
        sys.stdout.write(reports.json_text(payload))
    else:
        sys.stdout.write(f"{entry.name}: {entry.summary}\n")
        for c in checks:
            params = ", ".join(str(x) for x in c["params"])
            sys.stdout.write(f"  {c['check']}"
                             + (f"({params})" if params else "")
                             + f" -> {c['expected']}\n")
    return 0


# -- verify-theorems -----------------------------------------------------------


def _cmd_verify(args: argparse.Namespace) -> int:
    ids = [args.theorem] if args.theorem else sorted(THEOREM_SUITES)
    suites = []
    elapsed = {}
    for t in ids:
        t0 = time.perf_counter()
        r = verify_theorem(t, max_n=args.max, jobs=args.jobs)
        elapsed[t] = time.perf_counter() - t0
        suites.append(reports.harness_payload(r))
    ok = all(s["ok"] for s in suites)
    payload = reports.report("harness-report", max_n=args.max,
                             suites=suites, ok=ok)
    if args.json:
        sys.stdout.write(reports.json_text(payload))
    else:
        sys.stdout.write(reports.render_harness_text(payload, elapsed))
    return 0 if ok else 1


# -- convert -------------------------------------------------------------------


def _cmd_convert(args: argparse.Namespace) -> int:
    sf = _load(args.source, args.guard)
    if args.to == "event-structure":
        mcs = [d for d in sf.declarations if d.kind == "multicontact"]
        if not mcs:
            raise StructureError("no multicontact declaration to convert")
        decl = mcs[0]
        es = poset_to_event_structure(decl.value.base, decl.value)
        out_sf = StructureFile((Declaration("eventstructure", decl.name,
                                            None, es),))
    else:
        ess = [d for d in sf.declarations if d.kind == "eventstructure"]
        if not ess:
            raise StructureError("no eventstructure declaration to convert")
        decl = ess[0]
        p, d = event_structure_to_poset(decl.value)
        base_name = f"{decl.name}_base"
        out_sf = StructureFile((
            Declaration("poset", base_name, None, p),
            Declaration("multicontact", decl.name, base_name, d,
                        meta=("explicit",
                              tuple(m for m in d.raw_family if m))),
        ))
    text = serialize(out_sf)
    if args.json:
        payload = reports.report("convert-report", source=args.source,
                                 to=args.to, dsl=text)
        sys.stdout.write(reports.json_text(payload))
    else:
        sys.stdout.write(text)
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mcsl",
        description="Finite multicontact posets and join semilattices: "
                    "check, embed, enumerate, convert, and verify.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_guard(p, default=DEFAULT_CARRIER_GUARD):
        p.add_argument("--guard", type=int, default=default,
                       help="carrier size bound (default %(default)s)")

    p = sub.add_parser("check", help="axioms and decision conditions "
                                     "with witnesses")
    p.add_argument("source", help="structure file or catalog:NAME")
    p.add_argument("--m1-plus-rows", type=int, default=3, metavar="N",
                   help="row bound for the refinement condition "
                        "(default %(default)s)")
    p.add_argument("--m2-rows", type=int, default=3, metavar="N",
                   help="row bound for the system condition "
                        "(default %(default)s)")
    p.add_argument("--json", action="store_true")
    add_guard(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("embed", help="canonical powerset embedding")
    p.add_argument("source", help="structure file or catalog:NAME")
    p.add_argument("--mode", choices=MODES, default="overlap")
    p.add_argument("--bounded", action="store_true",
                   help="drop the top element and require its preservation")
    p.add_argument("--topology", action="store_true",
                   help="also render the finite-space model (overlap mode)")
    p.add_argument("--json", action="store_true")
    add_guard(p)
    p.set_defaults(fn=_cmd_embed)

    p = sub.add_parser("enumerate", help="exhaustive small-structure lists")
    p.add_argument("--kind", choices=ENUM_KINDS, required=True)
    p.add_argument("--size", type=int, help="carrier or event count "
                                            "(semilattices, event-structures)")
    p.add_argument("--base", help="structure file or catalog:NAME "
                                  "(multicontacts, weak-contacts)")
    p.add_argument("--up-to-iso", action="store_true")
    p.add_argument("--guard", type=int, default=None,
                   help="override the per-kind size bound")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("catalog", help="list or emit the named structures")
    p.add_argument("name", nargs="?", help="entry name, e.g. M3-overlap")
    p.add_argument("--emit", action="store_true",
                   help="print the entry as a structure file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_catalog)

    p = sub.add_parser("verify-theorems", help="run the exhaustive harness")
    p.add_argument("--max", type=int, default=4, metavar="N",
                   help="largest carrier size (default %(default)s)")
    p.add_argument("--theorem", choices=sorted(THEOREM_SUITES),
                   help="run a single suite")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes (default %(default)s)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("convert", help="between multicontacts and "
                                       "event structures")
    p.add_argument("source", help="structure file or catalog:NAME")
    p.add_argument("--to", choices=("event-structure", "multicontact"),
                   required=True)
    p.add_argument("--json", action="store_true")
    add_guard(p)
    p.set_defaults(fn=_cmd_convert)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, GuardError, StructureError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
