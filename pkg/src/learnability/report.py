"""Report documents: JSON-ready dicts plus a line-oriented human rendering.

Machine reports are serialised with sorted keys so that equal inputs give
byte-identical output.  Points are coordinate lists; values are tagged
literals such as ``{"type": "rational", "value": "1/2"}``.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from . import __version__
from .analysis import EquivalenceRecord, SplitMergeReport, ValidityReport
from .domain import Atom, DiscreteDomain, InformationGenerator, OutputValue, format_count, format_point, value_key
from .verifier import Certificate, ConditionReport, StarEntry, StarReport

TOOL = "learnability"


def digest(text: str | bytes) -> str:
    data = text.encode() if isinstance(text, str) else text
    return "sha256:" + hashlib.sha256(data).hexdigest()


def tag_value(value: OutputValue) -> dict:
    if isinstance(value, tuple):
        return {"type": "pair", "value": [tag_value(value[0]), tag_value(value[1])]}
    if isinstance(value, Atom):
        return {"type": "atom", "value": value.name}
    if isinstance(value, int):
        return {"type": "int", "value": str(value)}
    return {"type": "rational", "value": str(value)}


def untag_value(tagged: dict) -> str:
    if tagged["type"] == "pair":
        return f"({untag_value(tagged['value'][0])}, {untag_value(tagged['value'][1])})"
    return tagged["value"]


def _points(points) -> list[list[int]]:
    return [list(p) for p in sorted(points)]


def _fmt_points(points: list[list[int]]) -> str:
    return "{" + ", ".join(format_point(tuple(p)) for p in points) + "}"


def domain_block(domain: DiscreteDomain) -> dict:
    block: dict[str, Any] = {
        "scales": list(domain.scales),
        "cardinality": format_count(domain.cardinality),
        "log10_cardinality": round(domain.log10_cardinality, 6),
    }
    if domain.labels is not None:
        block["labels"] = list(domain.labels)
    return block


def envelope(command: str, input_digest: str, domain: DiscreteDomain | None, kind: str | None) -> dict:
    doc: dict[str, Any] = {"tool": TOOL, "version": __version__, "command": command, "input_digest": input_digest}
    if domain is not None:
        doc["domain"] = domain_block(domain)
    if kind is not None:
        doc["model_kind"] = kind
    return doc


def _collision(pair, value) -> dict:
    return {"a": list(pair[0]), "b": list(pair[1]), "value": tag_value(value)}


def condition_result(report: ConditionReport, domain: DiscreteDomain, value: OutputValue | None = None) -> dict:
    result: dict[str, Any] = {
        "verdict": report.verdict.value,
        "reading": report.reading.value,
        "policy": report.policy.value,
        "method": report.method,
        "statistics": {"subsets_examined": report.subsets_examined, "pairs_examined": report.pairs_examined},
    }
    if report.excluded is not None:
        result["witness_subset"] = {
            "empty": len(report.excluded) == domain.cardinality,
            "excluded": _points(report.excluded),
        }
    if report.collision is not None:
        result["witness_collision"] = _collision(report.collision, value)
    return result


def star_entry_result(entry: StarEntry) -> dict:
    out: dict[str, Any] = {
        "dim": entry.dim,
        "verdict": entry.verdict.value,
        "certificate": entry.certificate.value,
        "note": entry.note,
    }
    for key in ("extension_scale", "range_bound"):
        if getattr(entry, key) is not None:
            out[key] = getattr(entry, key)
    if entry.extension_cardinality is not None:
        out["extension_cardinality"] = format_count(entry.extension_cardinality)
    if entry.collision is not None:
        out["witness_collision"] = _collision(entry.collision, entry.value)
    return out


def star_result(report: StarReport) -> dict:
    return {
        "overall": report.overall.value,
        "dimensions": [star_entry_result(e) for e in report.entries],
        "schedules": {str(d): list(s) for d, s in sorted(report.schedules.items())},
    }


def generators_result(gens: list[InformationGenerator]) -> dict:
    return {
        "count": len(gens),
        "generators": [
            {"representation": tag_value(g.representation), "fiber": _points(g.fiber), "invariant": g.invariant}
            for g in gens
        ],
    }


def validity_result(report: ValidityReport) -> dict:
    return {
        "mean": str(report.mean),
        "blocks": [
            {
                "block": [tag_value(v) for v in sorted(b.block, key=value_key)],
                "true_preimage": _points(b.true_preimage),
                "guess_preimage": _points(b.guess_preimage),
                "jaccard": str(b.jaccard),
            }
            for b in report.blocks
        ],
    }


def compile_result(record: EquivalenceRecord, table_doc: dict) -> dict:
    return {
        "entries": len(table_doc["model"]["entries"]),
        "points_checked": record.points_checked,
        "agreements": record.agreements,
        "mismatches": _points(record.mismatches),
        "equivalent": record.equivalent,
        "table": table_doc,
    }


def split_result(report: SplitMergeReport) -> dict:
    return {
        "counts": report.counts,
        "part1": generators_result(list(report.part1))["generators"],
        "part2": generators_result(list(report.part2))["generators"],
        "union": generators_result(list(report.union))["generators"],
        "merged": generators_result(list(report.merged))["generators"],
    }


# -- rendering -------------------------------------------------------------------


def star_line(entry: dict) -> str:
    head = f"dim {entry['dim']}: {entry['verdict'].upper()}"
    cert = entry["certificate"]
    if cert == Certificate.PIGEONHOLE.value:
        return f"{head} (pigeonhole: range<={entry['range_bound']} < extension {entry['extension_cardinality']})"
    if cert == Certificate.COLLISION_WITNESS.value:
        w = entry["witness_collision"]
        return (
            f"{head} (collision-witness {format_point(tuple(w['a']))} ~ {format_point(tuple(w['b']))}"
            f" -> {untag_value(w['value'])})"
        )
    return f"{head} ({cert})"


def _render_check(r: dict) -> list[str]:
    lines = [f"condition S ({r['reading']}, {r['policy']}): {r['verdict'].upper()} [{r['method']}]"]
    if "witness_subset" in r:
        w = r["witness_subset"]
        lines.append("witness: X_S = {}" if w["empty"] else f"witness: X_S = D \\ {_fmt_points(w['excluded'])}")
    if "witness_collision" in r:
        c = r["witness_collision"]
        lines.append(
            f"collision: {format_point(tuple(c['a']))} ~ {format_point(tuple(c['b']))} -> {untag_value(c['value'])}"
        )
    stats = r["statistics"]
    if stats["subsets_examined"]:
        lines.append(f"examined: {stats['subsets_examined']} subsets, {stats['pairs_examined']} subset pairs")
    return lines


def _render_classify(r: dict) -> list[str]:
    lines = []
    for entry in r["dimensions"]:
        lines.append(star_line(entry))
        if entry["certificate"] == Certificate.PIGEONHOLE.value and "witness_collision" in entry:
            w = entry["witness_collision"]
            lines.append(
                f"  witness at scale {entry['extension_scale']}: {format_point(tuple(w['a']))} ~ "
                f"{format_point(tuple(w['b']))} -> {untag_value(w['value'])}"
            )
    lines.append(f"overall: {r['overall']}")
    return lines


def _render_generators(gens: list[dict]) -> list[str]:
    return [
        f"{untag_value(g['representation'])} <- {_fmt_points(g['fiber'])}" + (" [invariant]" if g["invariant"] else "")
        for g in gens
    ]


def _render_jaccard(r: dict) -> list[str]:
    lines = []
    for b in r["blocks"]:
        block = "{" + ", ".join(untag_value(v) for v in b["block"]) + "}"
        lines.append(
            f"block {block}: J = {b['jaccard']} (|T|={len(b['true_preimage'])}, |G|={len(b['guess_preimage'])})"
        )
    lines.append(f"mean validity: {r['mean']}")
    return lines


def _render_compile(r: dict) -> list[str]:
    return [
        f"compiled table: {r['entries']} entries, default NULL",
        f"agreement: {r['agreements']}/{r['points_checked']} points"
        + (" (equivalent)" if r["equivalent"] else f" (mismatches {_fmt_points(r['mismatches'])})"),
    ]


def _render_split(r: dict) -> list[str]:
    c = r["counts"]
    lines = [f"generators: part1 {c['part1']}, part2 {c['part2']}, union {c['union']}, merged {c['merged']}"]
    for name in ("part1", "part2", "union"):
        lines.append(f"{name}:")
        lines.extend("  " + line for line in _render_generators(r[name]))
    lines.append("merged:")
    lines.extend("  " + line for line in _render_generators(r["merged"]) or ["(none)"])
    return lines


def _render_demo(r: dict) -> list[str]:
    lines = []
    for row in r["rows"]:
        mark = "ok" if row["overall"] == row["expected"] else "MISMATCH"
        lines.append(f"{row['name']}: {row['overall']} (expected {row['expected']}) {mark}")
    s = r["split"]["counts"]
    lines.append(f"split/merge: union {s['union']} generators from {s['part1']} + {s['part2']}, merged {s['merged']}")
    return lines


_RENDERERS = {
    "check": _render_check,
    "classify": _render_classify,
    "generators": lambda r: _render_generators(r["generators"]),
    "jaccard": _render_jaccard,
    "compile": _render_compile,
    "split": _render_split,
    "demo": _render_demo,
}


def render_report(doc: dict, fmt: str = "human") -> str:
    if fmt == "machine":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    lines = [f"{doc['tool']} {doc['version']} {doc['command']} {doc['input_digest'][:19]}"]
    if "domain" in doc:
        d = doc["domain"]
        scales = d["scales"] if len(d["scales"]) <= 16 else f"[{len(d['scales'])} dimensions]"
        lines.append(f"domain: {scales} (|D| = {d['cardinality']})")
    if "model_kind" in doc:
        lines.append(f"model: {doc['model_kind']}")
    lines.extend(_RENDERERS[doc["command"]](doc["result"]))
    return "\n".join(lines) + "\n"


def verdict_of(doc: dict) -> str:
    result = doc["result"]
    return result.get("overall") or result.get("verdict") or ""

