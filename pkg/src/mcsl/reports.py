"""Report payloads: one dict shape rendered as JSON or text.

JSON output is deterministic byte-for-byte across repeated and parallel
runs: keys are sorted, indentation fixed, and no timestamps or timings
are embedded.  Text rendering carries the same verdicts and witnesses
and may add timing.  Witness values appear twice, as raw indices and as
element labels.
"""

from __future__ import annotations

import json
from importlib import metadata
from typing import Mapping, Optional, Sequence

from .conditions import ConditionReport
from .contacts import Multicontact, ValidationReport, WeakContact
from .embedding import CanonicalEmbedding, EmbeddingVerdict
from .explorer import HarnessReport
from .order import Poset, bits

try:
    VERSION = metadata.version("mcsl")
except metadata.PackageNotFoundError:  # running from a source tree
    VERSION = "0.dev"

_MASK_KEYS = frozenset(("set", "missing", "rest", "target", "kappa", "t",
                        "sums"))
_INDEX_TUPLE_KEYS = frozenset(("pair", "raised"))
_MASK_TUPLE_KEYS = frozenset(("rows",))


def _label_mask(labels: Sequence[str], mask: int) -> list[str]:
    return [labels[i] for i in bits(mask)]


def witness_payload(labels: Sequence[str], witness: Optional[Mapping]
                    ) -> Optional[dict]:
    """A witness as raw indices plus the label rendering."""
    if witness is None:
        return None
    shown = {}
    for key, v in witness.items():
        if key in _MASK_KEYS:
            shown[key] = _label_mask(labels, v)
        elif key in _MASK_TUPLE_KEYS:
            shown[key] = [_label_mask(labels, m) for m in v]
        elif key in _INDEX_TUPLE_KEYS:
            shown[key] = [labels[i] for i in v]
        elif isinstance(v, int):
            shown[key] = labels[v]
        else:
            shown[key] = v
    indices = {k: (list(v) if isinstance(v, tuple) else v)
               for k, v in witness.items()}
    return {"indices": indices, "labels": shown}


def validation_payload(report: ValidationReport, labels: Sequence[str]) -> dict:
    return {
        "structure": report.structure,
        "ok": report.ok,
        "checks": [{"axiom": c.axiom, "ok": c.ok,
                    "witness": witness_payload(labels, c.witness)}
                   for c in report.checks],
    }


def condition_payload(report: ConditionReport, labels: Sequence[str]) -> dict:
    return {
        "condition": report.condition,
        "verdict": report.verdict,
        "mode": report.mode,
        "bounds": dict(report.bounds) if report.bounds else None,
        "witness": witness_payload(labels, report.witness),
    }


def base_payload(p: Poset) -> dict:
    return {
        "elements": list(p.labels),
        "zero": p.labels[p.zero],
        "covers": [[p.labels[a], p.labels[b]] for a, b in p.covers],
    }


def contact_payload(contact: Multicontact | WeakContact) -> dict:
    if isinstance(contact, WeakContact):
        labels = contact.base.labels
        return {"type": "weakcontact",
                "pairs": [[labels[a], labels[b]] for a, b in contact.pairs()]}
    labels = contact.base.labels
    family = contact.sorted_family
    out = {"type": "multicontact", "family_size": len(family)}
    if len(family) <= 256:
        out["family"] = [_label_mask(labels, m) for m in family]
    return out


def embedding_payload(emb: CanonicalEmbedding,
                      verdict: EmbeddingVerdict) -> dict:
    labels = emb.source.labels
    flags = {
        "is_order_embedding": verdict.is_order_embedding,
        "preserves_join": verdict.preserves_join,
        "preserves_zero": verdict.preserves_zero,
        "delta_only_if": verdict.delta_only_if,
        "delta_if": verdict.delta_if,
    }
    if verdict.preserves_top is not None:
        flags["preserves_top"] = verdict.preserves_top
    return {
        "mode": emb.mode,
        "bounded": emb.bounded,
        "t": list(emb.t_labels()),
        "excised": _label_mask(labels, emb.excised),
        "kappa": {k: list(v) for k, v in emb.kappa_labels().items()},
        "minimal_non_members": [_label_mask(labels, m)
                                for m in emb.minimal_non_members],
        "is_embedding": verdict.is_embedding,
        "flags": flags,
        "witnesses": {name: witness_payload(labels, w)
                      for name, w in sorted(verdict.witnesses.items())},
    }


def harness_payload(r: HarnessReport) -> dict:
    # elapsed time stays out: repeated runs must serialize identically
    return {
        "theorem": r.theorem,
        "examined": r.examined,
        "ok": r.ok,
        "discrepancies": [dict(sorted(d.items())) for d in r.discrepancies],
    }


def report(kind: str, **payload) -> dict:
    return {"kind": kind, "tool": "mcsl", "version": VERSION, **payload}


def json_text(payload: Mapping) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# -- text rendering -----------------------------------------------------------

def _flag(ok: bool) -> str:
    return "ok" if ok else "FAIL"


def _witness_line(witness: Optional[dict]) -> str:
    if witness is None:
        return ""
    parts = []
    for key, v in witness["labels"].items():
        if isinstance(v, list) and v and isinstance(v[0], list):
            body = " ".join("{" + ",".join(x) + "}" for x in v)
        elif isinstance(v, list):
            body = "{" + ",".join(v) + "}"
        else:
            body = str(v)
        parts.append(f"{key}={body}")
    return "  [" + " ".join(parts) + "]"


def render_check_text(payload: Mapping) -> str:
    out = []
    for section in payload["results"]:
        out.append(f"{section['name']}:")
        ax = section["axioms"]
        out.append(f"  axioms ({ax['structure']}): {_flag(ax['ok'])}")
        for c in ax["checks"]:
            if not c["ok"]:
                out.append(f"    {c['axiom']}: FAIL"
                           + _witness_line(c["witness"]))
        for c in section["conditions"]:
            mode = f" [{c['mode']}]" if c.get("mode") else ""
            bounds = ""
            if c.get("bounds"):
                bounds = " (" + ", ".join(f"{k}={v}" for k, v in
                                          sorted(c["bounds"].items())) + ")"
            out.append(f"  {c['condition']}{bounds}{mode}: "
                       f"{'true' if c['verdict'] else 'false'}"
                       + _witness_line(c["witness"]))
        if section.get("note"):
            out.append(f"  note: {section['note']}")
    out.append("result: " + ("all checks passed" if payload["ok"]
                             else "some checks failed"))
    return "\n".join(out) + "\n"


def render_embed_text(payload: Mapping) -> str:
    emb = payload["embedding"]
    out = [f"mode: {emb['mode']}" + (" (bounded)" if emb["bounded"] else ""),
           "T: {" + ",".join(emb["t"]) + "}"]
    for a, img in emb["kappa"].items():
        out.append(f"kappa({a}) = {{{','.join(img)}}}")
    if emb["minimal_non_members"]:
        out.append("minimal non-members: "
                   + " ".join("{" + ",".join(f) + "}"
                              for f in emb["minimal_non_members"]))
    for name, ok in emb["flags"].items():
        line = f"{name}: {_flag(ok)}"
        if not ok and name.replace("preserves_", "") in emb["witnesses"]:
            line += _witness_line(emb["witnesses"][name.replace("preserves_", "")])
        elif not ok and name in emb["witnesses"]:
            line += _witness_line(emb["witnesses"][name])
        out.append(line)
    out.append("embedding: " + ("yes" if emb["is_embedding"] else "no"))
    if "topology" in payload:
        top = payload["topology"]
        out.append("points: {" + ",".join(top["points"]) + "} (discrete)")
    return "\n".join(out) + "\n"


def render_harness_text(payload: Mapping, elapsed: Optional[Mapping] = None
                        ) -> str:
    out = []
    for suite in payload["suites"]:
        line = (f"{suite['theorem']}: examined {suite['examined']}, "
                f"{'ok' if suite['ok'] else 'DISCREPANCIES'}")
        if elapsed and suite["theorem"] in elapsed:
            line += f" ({elapsed[suite['theorem']]:.2f}s)"
        out.append(line)
        for d in suite["discrepancies"]:
            out.append(f"  {d}")
    out.append("result: " + ("all suites passed" if payload["ok"]
                             else "discrepancies found"))
    return "\n".join(out) + "\n"
