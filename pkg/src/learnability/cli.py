"""Command-line front end.

Exit codes: 0 when the analysis ran (the verdict is in the report), 1 when
``--expect`` does not match the verdict, 2 on usage or parse errors, 3 when
the analysis itself cannot run (budget exceeded, degenerate domain).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import report as rep
from .analysis import compile_memory, hypothesis_validity, split_experiment
from .domain import DEFAULT_BUDGET, fibers
from .errors import LearnabilityError, SpecFileError
from .specfile import ModelSpecDocument, document_to_dict, parse_model_file, parse_value, table_document
from .verifier import (
    DEFAULT_SAMPLE_BUDGET,
    Overall,
    Policy,
    Reading,
    check_s_bruteforce,
    check_s_fast,
    classify,
)

BUNDLED_PREFIX = "bundled:"

REFERENCE_CLASSIFICATION = [
    ("table_null", Overall.NON_LEARNING),
    ("affine_2x", Overall.COMPLETE_LEARNING),
    ("classifier", Overall.NON_LEARNING),
    ("oracle_injective", Overall.COMPLETE_LEARNING),
]

_EXPECT_ALIASES = {"learning": Overall.COMPLETE_LEARNING.value}


class UsageError(Exception):
    pass


def bundled_text(name: str) -> str:
    return resources.files("learnability").joinpath("specs", f"{name}.json").read_text(encoding="utf-8")


def bundled_names() -> list[str]:
    return sorted(
        p.name[: -len(".json")]
        for p in resources.files("learnability").joinpath("specs").iterdir()
        if p.name.endswith(".json")
    )


def load(path: str) -> tuple[str, ModelSpecDocument]:
    if path.startswith(BUNDLED_PREFIX):
        name = path[len(BUNDLED_PREFIX):]
        if name not in bundled_names():
            raise UsageError(f"no bundled spec {name!r}; available: {', '.join(bundled_names())}")
        text = bundled_text(name)
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return text, parse_model_file(text)


def _schedule(text: str) -> tuple[int, ...]:
    try:
        steps = tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not steps:
        raise argparse.ArgumentTypeError("schedule is empty")
    return steps


def _points_arg(text: str) -> list[tuple[int, ...]]:
    try:
        data = json.loads(text)
        return [tuple(int(c) for c in p) for p in data]
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"expected a JSON list of points like [[0],[1]], got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the machine-readable report")
    common.add_argument("--seed", type=int, help="seed for sampled collision search")
    common.add_argument("--budget", type=int, help="enumeration budget (points; subset checks: max |D|)")

    parser = argparse.ArgumentParser(prog="learnability", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("check", parents=[common], help="decide Condition S")
    p.add_argument("file")
    p.add_argument("--reading", choices=[r.value for r in Reading])
    p.add_argument("--policy", choices=[x.value for x in Policy])
    p.add_argument("--method", choices=["auto", "fast", "bruteforce"], default="auto")
    p.add_argument("--expect", choices=["pass", "fail"])

    p = sub.add_parser("classify", parents=[common], help="Condition S* on every dimension")
    p.add_argument("file")
    p.add_argument("--schedule", type=_schedule, help="extension scales, e.g. 16,32,64")
    p.add_argument("--sample-budget", type=int)
    p.add_argument("--expect", choices=[o.value for o in Overall] + list(_EXPECT_ALIASES))

    p = sub.add_parser("generators", parents=[common], help="information generators (fibers)")
    p.add_argument("file")
    p.add_argument("--points", type=_points_arg, help="restrict to these points (JSON list)")

    p = sub.add_parser("jaccard", parents=[common], help="hypothesis validity of a guess against a true model")
    p.add_argument("truth")
    p.add_argument("hypothesis")
    p.add_argument("--blocks", help='range blocks as JSON, e.g. [["0","2"],["4"]]')

    p = sub.add_parser("compile", parents=[common], help="compile a model into a lookup table")
    p.add_argument("file")
    p.add_argument("--output", help="write the compiled table model file here")

    p = sub.add_parser("split", parents=[common], help="dataset separation / merge experiment")
    p.add_argument("file")
    p.add_argument("--part1", type=_points_arg, required=True)
    p.add_argument("--part2", type=_points_arg, required=True)

    sub.add_parser("demo", parents=[common], help="reproduce the four-model classification table")
    return parser


def _pick(flag, from_file, default):
    if flag is not None:
        return flag
    if from_file is not None:
        return from_file
    return default


def _cmd_check(args) -> dict:
    text, doc = load(args.file)
    reading = Reading(_pick(args.reading, doc.check.reading, Reading.NONCONTAINMENT.value))
    policy = Policy(_pick(args.policy, doc.check.policy, Policy.NONEMPTY_PROPER.value))
    budget = _pick(args.budget, doc.check.budget, None)
    default_semantics = reading is Reading.NONCONTAINMENT and policy is Policy.NONEMPTY_PROPER
    if args.method == "fast" and not default_semantics:
        raise UsageError("--method fast only decides the noncontainment / nonempty-proper semantics")
    if args.method == "fast" or (args.method == "auto" and default_semantics):
        result = check_s_fast(doc.model, budget=budget or DEFAULT_BUDGET)
    else:
        result = check_s_bruteforce(doc.model, reading=reading, policy=policy, budget=budget)
    value = doc.model(result.collision[0]) if result.collision else None
    out = rep.envelope("check", rep.digest(text), doc.domain, doc.model.kind)
    out["result"] = rep.condition_result(result, doc.domain, value)
    return out


def _classify_doc(doc: ModelSpecDocument, args=None) -> dict:
    get = (lambda name: getattr(args, name, None)) if args is not None else (lambda name: None)
    report = classify(
        doc.model,
        schedule=_pick(get("schedule"), doc.check.schedule, None),
        sample_budget=_pick(get("sample_budget"), doc.check.sample_budget, DEFAULT_SAMPLE_BUDGET),
        seed=_pick(get("seed"), doc.check.seed, 0),
        budget=_pick(get("budget"), doc.check.budget, DEFAULT_BUDGET),
    )
    return rep.star_result(report)


def _cmd_classify(args) -> dict:
    text, doc = load(args.file)
    out = rep.envelope("classify", rep.digest(text), doc.domain, doc.model.kind)
    out["result"] = _classify_doc(doc, args)
    return out


def _cmd_generators(args) -> dict:
    text, doc = load(args.file)
    budget = _pick(args.budget, doc.check.budget, DEFAULT_BUDGET)
    points = args.points if args.points is not None else doc.domain.points(budget)
    out = rep.envelope("generators", rep.digest(text), doc.domain, doc.model.kind)
    out["result"] = rep.generators_result(fibers(doc.model, points))
    return out


def _cmd_jaccard(args) -> dict:
    text_u, truth = load(args.truth)
    text_h, guess = load(args.hypothesis)
    blocks = None
    if args.blocks is not None:
        try:
            raw = json.loads(args.blocks)
        except json.JSONDecodeError:
            raise UsageError(f"--blocks is not valid JSON: {args.blocks!r}") from None
        if not isinstance(raw, list) or not all(isinstance(b, list) for b in raw):
            raise UsageError("--blocks must be a JSON list of lists of values")
        blocks = [[parse_value(v, f"blocks.{i}.{j}") for j, v in enumerate(b)] for i, b in enumerate(raw)]
    report = hypothesis_validity(
        truth.model, guess.model, blocks=blocks, budget=_pick(args.budget, truth.check.budget, DEFAULT_BUDGET),
    )
    out = rep.envelope("jaccard", rep.digest(text_u + "\0" + text_h), truth.domain, truth.model.kind)
    out["result"] = rep.validity_result(report)
    return out


def _cmd_compile(args) -> dict:
    text, doc = load(args.file)
    table, record = compile_memory(doc.model, budget=_pick(args.budget, doc.check.budget, DEFAULT_BUDGET))
    table_dict = document_to_dict(table_document(table))
    if args.output:
        Path(args.output).write_text(json.dumps(table_dict, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    out = rep.envelope("compile", rep.digest(text), doc.domain, doc.model.kind)
    out["result"] = rep.compile_result(record, table_dict)
    return out


def _cmd_split(args) -> dict:
    text, doc = load(args.file)
    subset = sorted(set(args.part1) | set(args.part2))
    report = split_experiment(doc.model, subset, args.part1, args.part2)
    out = rep.envelope("split", rep.digest(text), doc.domain, doc.model.kind)
    out["result"] = rep.split_result(report)
    return out


def _cmd_demo(args) -> dict:
    rows, texts = [], []
    for name, expected in REFERENCE_CLASSIFICATION:
        text = bundled_text(name)
        texts.append(text)
        result = _classify_doc(parse_model_file(text), args)
        rows.append({"name": name, "overall": result["overall"], "expected": expected.value})
    split_text = bundled_text("split_table")
    texts.append(split_text)
    doc = parse_model_file(split_text)
    split = split_experiment(doc.model, [(0,), (1,), (2,), (3,)], [(0,), (1,)], [(2,), (3,)])
    out = rep.envelope("demo", rep.digest("\0".join(texts)), None, None)
    out["result"] = {"rows": rows, "split": rep.split_result(split)}
    return out


COMMANDS = {
    "check": _cmd_check,
    "classify": _cmd_classify,
    "generators": _cmd_generators,
    "jaccard": _cmd_jaccard,
    "compile": _cmd_compile,
    "split": _cmd_split,
    "demo": _cmd_demo,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc = COMMANDS[args.command](args)
    except (UsageError, SpecFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LearnabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(rep.render_report(doc, "machine" if args.json else "human"))
    expect = getattr(args, "expect", None)
    if expect is not None:
        actual = rep.verdict_of(doc)
        if _EXPECT_ALIASES.get(expect, expect) != actual:
            print(f"expected {expect}, got {actual}", file=sys.stderr)
            return 1
    return 0


run_cli = main

if __name__ == "__main__":
    sys.exit(main())
