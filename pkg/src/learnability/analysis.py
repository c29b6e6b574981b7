"""Hypothesis validity, memory compilation and split/merge experiments."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .domain import (
    DEFAULT_BUDGET,
    NULL,
    DiscreteDomain,
    InformationGenerator,
    OutputValue,
    Point,
    fibers,
    value_key,
)
from .errors import BudgetExceededError, DomainMismatchError, InvalidPartitionError
from .models import Model, TableModel


def jaccard(a: Iterable, b: Iterable) -> Fraction:
    """``|a & b| / |a | b|`` as an exact fraction; two empty sets score 1."""
    a, b = set(a), set(b)
    union = len(a | b)
    if union == 0:
        return Fraction(1)
    return Fraction(len(a & b), union)


@dataclass(frozen=True)
class BlockValidity:
    block: frozenset[OutputValue]
    true_preimage: frozenset[Point]
    guess_preimage: frozenset[Point]
    jaccard: Fraction


@dataclass(frozen=True)
class ValidityReport:
    blocks: tuple[BlockValidity, ...]
    mean: Fraction


def hypothesis_validity(
    truth: Model,
    hypothesis: Model,
    domain: DiscreteDomain | None = None,
    blocks: Sequence[Iterable[OutputValue]] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> ValidityReport:
    """Compare preimages of range blocks under the true model and a guess.

    Default blocks are one singleton per value of the true model's range,
    followed by singletons for values only the hypothesis reaches.
    """
    domain = domain or truth.domain
    if truth.domain != domain:
        truth = truth.extend(domain)
    if hypothesis.domain != domain:
        if hypothesis.domain.ndim != domain.ndim:
            raise DomainMismatchError("hypothesis and true model live on different domains")
        hypothesis = hypothesis.extend(domain)
    graph = [(p, truth(p), hypothesis(p)) for p in domain.points(budget)]

    if blocks is None:
        true_values = sorted({u for _, u, _ in graph}, key=value_key)
        extra = sorted({h for _, _, h in graph} - set(true_values), key=value_key)
        block_sets = [frozenset([v]) for v in true_values + extra]
    else:
        block_sets = [frozenset(b) for b in blocks]
        if not block_sets:
            raise InvalidPartitionError("block partition is empty")
        covered = frozenset().union(*block_sets)
        missing = {v for _, u, h in graph for v in (u, h)} - covered
        if missing:
            raise InvalidPartitionError(f"blocks do not cover reachable values {sorted(missing, key=value_key)}")

    rows = []
    for block in block_sets:
        t = frozenset(p for p, u, _ in graph if u in block)
        g = frozenset(p for p, _, h in graph if h in block)
        rows.append(BlockValidity(block, t, g, jaccard(t, g)))
    mean = sum((r.jaccard for r in rows), Fraction(0)) / len(rows)
    return ValidityReport(tuple(rows), mean)


@dataclass(frozen=True)
class EquivalenceRecord:
    points_checked: int
    agreements: int
    mismatches: tuple[Point, ...]

    @property
    def equivalent(self) -> bool:
        return not self.mismatches and self.agreements == self.points_checked


def compile_memory(model: Model, domain: DiscreteDomain | None = None, budget: int = DEFAULT_BUDGET) -> tuple[TableModel, EquivalenceRecord]:
    """Store the model's whole graph in a lookup table and check agreement.

    The table's default is ``NULL``; inside the domain every point has an
    entry, so the default is never reached there.
    """
    if domain is not None and domain != model.domain:
        model = model.extend(domain)
    domain = model.domain
    if domain.cardinality > budget:
        raise BudgetExceededError(domain.cardinality, budget)
    table = TableModel(domain, {p: model(p) for p in domain.points(budget)}, NULL)
    mismatches = tuple(p for p in domain.points(budget) if table(p) != model(p))
    return table, EquivalenceRecord(domain.cardinality, domain.cardinality - len(mismatches), mismatches)


@dataclass(frozen=True)
class SplitMergeReport:
    part1: tuple[InformationGenerator, ...]
    part2: tuple[InformationGenerator, ...]
    union: tuple[InformationGenerator, ...]
    merged: tuple[InformationGenerator, ...]

    @property
    def counts(self) -> dict[str, int]:
        return {
            "part1": len(self.part1),
            "part2": len(self.part2),
            "union": len(self.union),
            "merged": len(self.merged),
        }


def split_experiment(
    model: Model,
    subset: Iterable[Sequence[int]],
    part1: Iterable[Sequence[int]],
    part2: Iterable[Sequence[int]],
) -> SplitMergeReport:
    """Generators of two parts versus those of their union.

    Read forwards, a union fiber that spans both parts is one object whose
    data was split in two; read backwards, it is a new generator that appears
    when two datasets are merged.  Both readings are the same computation.
    """
    whole = {tuple(p) for p in subset}
    first = {tuple(p) for p in part1}
    second = {tuple(p) for p in part2}
    if first & second:
        raise InvalidPartitionError(f"parts overlap at {sorted(first & second)}")
    if first | second != whole:
        raise InvalidPartitionError("parts do not cover the subset exactly")
    union = fibers(model, sorted(whole))
    merged = tuple(g for g in union if g.fiber & first and g.fiber & second)
    return SplitMergeReport(
        tuple(fibers(model, sorted(first))),
        tuple(fibers(model, sorted(second))),
        tuple(union),
        merged,
    )
