"""JSON model description files.

A document has a ``domain`` block, a ``model`` block and an optional
``check`` block::

    {"domain": {"scales": [3, 3]},
     "model": {"kind": "affine", "weights": ["1", "3"], "bias": "0"},
     "check": {"seed": 7}}

Exact values are written as strings: ``"3"`` and ``"-1/2"`` are rationals
(lowest terms required), anything else is an atom such as ``"NULL"``.
Classifier outputs are two-element lists ``["9999/10000", "human"]``.
JSON integers are accepted wherever a rational is.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Any

import jsonschema

from .domain import Atom, Box, DiscreteDomain, OutputValue, canonical
from .errors import LearnabilityError, SpecFileError
from .models import (
    AffineModel,
    ClassifierModel,
    Indicator,
    Model,
    PairingModel,
    PiecewiseModel,
    RestrictedModel,
    TableModel,
)

_RATIONAL = re.compile(r"^(-?\d+)(?:/(\d+))?$")

_rational = {"type": ["string", "integer"]}
_value = {
    "oneOf": [
        {"type": ["string", "integer"]},
        {"type": "array", "prefixItems": [_rational, {"type": "string"}], "minItems": 2, "maxItems": 2},
    ]
}
_coords = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_box = {
    "type": "object",
    "required": ["lo", "hi"],
    "additionalProperties": False,
    "properties": {"lo": _coords, "hi": _coords},
}

DOCUMENT_SCHEMA = {
    "type": "object",
    "required": ["domain", "model"],
    "additionalProperties": False,
    "properties": {
        "domain": {
            "type": "object",
            "required": ["scales"],
            "additionalProperties": False,
            "properties": {
                "scales": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
                "labels": {"type": "array", "items": {"type": "string"}},
            },
        },
        "model": {"type": "object"},
        "check": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "reading": {"enum": ["literal", "noncontainment"]},
                "policy": {"enum": ["allow-empty", "nonempty-proper"]},
                "schedule": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
                "seed": {"type": "integer"},
                "budget": {"type": "integer", "minimum": 1},
                "sample_budget": {"type": "integer", "minimum": 1},
            },
        },
    },
}

MODEL_SCHEMAS = {
    "table": {
        "required": ["entries"],
        "properties": {
            "entries": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["point", "value"],
                    "additionalProperties": False,
                    "properties": {"point": _coords, "value": _value},
                },
            },
            "default": _value,
        },
    },
    "affine": {
        "required": ["weights"],
        "properties": {"weights": {"type": "array", "items": _rational}, "bias": _rational},
    },
    "classifier": {
        "required": ["indicators", "q"],
        "properties": {
            "indicators": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["name", "anchor", "slope"],
                    "additionalProperties": False,
                    "properties": {"name": {"type": "string"}, "anchor": _coords, "slope": _rational},
                },
            },
            "q": {"type": "integer", "minimum": 1},
        },
    },
    "piecewise": {
        "required": ["pieces"],
        "properties": {
            "pieces": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["box", "model"],
                    "additionalProperties": False,
                    "properties": {"box": _box, "model": {"type": "object"}},
                },
            },
            "fallback": _value,
        },
    },
    "restricted": {
        "required": ["box", "inner"],
        "properties": {"box": _box, "inner": {"type": "object"}, "outside": _value},
    },
    "oracle-injective": {"properties": {}},
}


@dataclass(frozen=True)
class CheckOptions:
    reading: str | None = None
    policy: str | None = None
    schedule: tuple[int, ...] | None = None
    seed: int | None = None
    budget: int | None = None
    sample_budget: int | None = None


@dataclass(frozen=True)
class ModelSpecDocument:
    domain: DiscreteDomain
    model: Model
    check: CheckOptions = CheckOptions()


def _path(parts) -> str:
    return ".".join(str(p) for p in parts)


def _validate(instance: Any, schema: dict, where: list) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    error = jsonschema.exceptions.best_match(validator.iter_errors(instance))
    if error is not None:
        raise SpecFileError(_path(where + list(error.absolute_path)) or "<document>", error.message)


def parse_rational(text: Any, where: str) -> int | Fraction:
    if isinstance(text, bool):
        raise SpecFileError(where, "expected a rational")
    if isinstance(text, int):
        return text
    match = _RATIONAL.match(text) if isinstance(text, str) else None
    if match is None:
        raise SpecFileError(where, f"expected a rational like \"3\" or \"-1/2\", got {text!r}")
    num, den = int(match.group(1)), int(match.group(2) or 1)
    if den == 0:
        raise SpecFileError(where, "zero denominator")
    value = canonical(Fraction(num, den))
    if text != format_rational(value):
        raise SpecFileError(where, f"rational {text!r} is not in lowest terms", f"write {format_rational(value)}")
    return value


def format_rational(value: int | Fraction) -> str:
    return str(value)


def parse_value(raw: Any, where: str) -> OutputValue:
    if isinstance(raw, list):
        return (parse_rational(raw[0], f"{where}.0"), Atom(raw[1]))
    if isinstance(raw, int) or (isinstance(raw, str) and _RATIONAL.match(raw)):
        return parse_rational(raw, where)
    return Atom(raw)


def format_value_literal(value: OutputValue) -> Any:
    if isinstance(value, tuple):
        return [format_rational(value[0]), value[1].name]
    if isinstance(value, Atom):
        return value.name
    return format_rational(value)


def _point(raw: list, domain: DiscreteDomain, where: str) -> tuple[int, ...]:
    point = tuple(raw)
    if point not in domain:
        raise SpecFileError(where, f"point {list(point)} is not in domain {list(domain.scales)}")
    return point


def _box(raw: dict, domain: DiscreteDomain, where: str) -> Box:
    try:
        box = Box(tuple(raw["lo"]), tuple(raw["hi"]))
    except LearnabilityError as exc:
        raise SpecFileError(where, str(exc)) from None
    if not box.within(domain):
        raise SpecFileError(where, f"box {raw['lo']}..{raw['hi']} lies outside domain {list(domain.scales)}")
    return box


def parse_model(raw: Any, domain: DiscreteDomain, where: str = "model") -> Model:
    if not isinstance(raw, dict):
        raise SpecFileError(where, "expected an object")
    kind = raw.get("kind")
    if kind not in MODEL_SCHEMAS:
        raise SpecFileError(f"{where}.kind", f"expected one of {sorted(MODEL_SCHEMAS)}, got {kind!r}")
    schema = dict(MODEL_SCHEMAS[kind], type="object", additionalProperties=False)
    schema["properties"] = dict(schema["properties"], kind={"const": kind})
    _validate(raw, schema, where.split("."))

    if kind == "table":
        entries = {}
        for i, entry in enumerate(raw["entries"]):
            at = f"{where}.entries.{i}"
            point = _point(entry["point"], domain, f"{at}.point")
            if point in entries:
                raise SpecFileError(f"{at}.point", f"duplicate entry for {list(point)}")
            entries[point] = parse_value(entry["value"], f"{at}.value")
        default = parse_value(raw.get("default", "NULL"), f"{where}.default")
        return TableModel(domain, entries, default)
    if kind == "affine":
        weights = tuple(parse_rational(w, f"{where}.weights.{i}") for i, w in enumerate(raw["weights"]))
        if len(weights) != domain.ndim:
            raise SpecFileError(f"{where}.weights", f"expected {domain.ndim} weights for a {domain.ndim}-dimensional domain, got {len(weights)}")
        return AffineModel(domain, weights, parse_rational(raw.get("bias", "0"), f"{where}.bias"))
    if kind == "classifier":
        indicators = []
        for i, ind in enumerate(raw["indicators"]):
            at = f"{where}.indicators.{i}"
            slope = parse_rational(ind["slope"], f"{at}.slope")
            if slope < 0:
                raise SpecFileError(f"{at}.slope", "slope must be non-negative")
            indicators.append(Indicator(ind["name"], _point(ind["anchor"], domain, f"{at}.anchor"), slope))
        if len({ind.name for ind in indicators}) != len(indicators):
            raise SpecFileError(f"{where}.indicators", "indicator names must be distinct")
        return ClassifierModel(domain, tuple(indicators), raw["q"])
    if kind == "piecewise":
        pieces = []
        for i, piece in enumerate(raw["pieces"]):
            at = f"{where}.pieces.{i}"
            pieces.append((_box(piece["box"], domain, f"{at}.box"), parse_model(piece["model"], domain, f"{at}.model")))
        return PiecewiseModel(domain, tuple(pieces), parse_value(raw.get("fallback", "NULL"), f"{where}.fallback"))
    if kind == "restricted":
        box = _box(raw["box"], domain, f"{where}.box")
        inner = parse_model(raw["inner"], domain, f"{where}.inner")
        return RestrictedModel(domain, box, inner, parse_value(raw.get("outside", "NULL"), f"{where}.outside"))
    return PairingModel(domain)


def model_to_dict(model: Model) -> dict:
    out: dict[str, Any] = {"kind": model.kind}
    if isinstance(model, TableModel):
        out["entries"] = [
            {"point": list(p), "value": format_value_literal(model.entries[p])}
            for p in sorted(model.entries)
        ]
        out["default"] = format_value_literal(model.default)
    elif isinstance(model, AffineModel):
        out["weights"] = [format_rational(w) for w in model.weights]
        out["bias"] = format_rational(model.bias)
    elif isinstance(model, ClassifierModel):
        out["indicators"] = [
            {"name": ind.name, "anchor": list(ind.anchor), "slope": format_rational(ind.slope)}
            for ind in model.indicators
        ]
        out["q"] = model.q
    elif isinstance(model, PiecewiseModel):
        out["pieces"] = [
            {"box": {"lo": list(box.lo), "hi": list(box.hi)}, "model": model_to_dict(sub)}
            for box, sub in model.pieces
        ]
        out["fallback"] = format_value_literal(model.fallback)
    elif isinstance(model, RestrictedModel):
        out["box"] = {"lo": list(model.box.lo), "hi": list(model.box.hi)}
        out["inner"] = model_to_dict(model.inner)
        out["outside"] = format_value_literal(model.outside)
    return out


def parse_document(data: Any) -> ModelSpecDocument:
    _validate(data, DOCUMENT_SCHEMA, [])
    dom = data["domain"]
    if "labels" in dom and len(dom["labels"]) != len(dom["scales"]):
        raise SpecFileError("domain.labels", "label count must match the number of scales")
    domain = DiscreteDomain(tuple(dom["scales"]), tuple(dom["labels"]) if "labels" in dom else None)
    model = parse_model(data["model"], domain)
    check = data.get("check", {})
    options = CheckOptions(**{
        k: tuple(v) if k == "schedule" else v for k, v in check.items()
    })
    return ModelSpecDocument(domain, model, options)


def parse_model_file(text: str) -> ModelSpecDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError("<document>", f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_document(data)


def document_to_dict(doc: ModelSpecDocument) -> dict:
    domain: dict[str, Any] = {"scales": list(doc.domain.scales)}
    if doc.domain.labels is not None:
        domain["labels"] = list(doc.domain.labels)
    out: dict[str, Any] = {"domain": domain, "model": model_to_dict(doc.model)}
    check = {
        f.name: list(getattr(doc.check, f.name)) if f.name == "schedule" else getattr(doc.check, f.name)
        for f in fields(CheckOptions)
        if getattr(doc.check, f.name) is not None
    }
    if check:
        out["check"] = check
    return out


def serialize_document(doc: ModelSpecDocument) -> str:
    return json.dumps(document_to_dict(doc), indent=2, sort_keys=True) + "\n"


def table_document(table: TableModel) -> ModelSpecDocument:
    return ModelSpecDocument(table.domain, table)

