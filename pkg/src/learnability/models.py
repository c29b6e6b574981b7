"""Concrete models behind one pure evaluation interface.

Every model is an immutable dataclass bound to a :class:`DiscreteDomain`.
Calling a model on a point validates the point and returns an exact value.
``model.extend(bigger_domain)`` rebinds the same rule to an extension of
its domain; each kind keeps its own extension semantics:

* table: entries unchanged, every new point hits the default;
* affine, classifier, pairing: same formula on the larger grid;
* piecewise, restricted: regions stay fixed, new points fall outside them.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import ClassVar

from .domain import (
    DEFAULT_BUDGET,
    NULL,
    Atom,
    Box,
    DiscreteDomain,
    OutputValue,
    Point,
    Rational,
    canonical,
    value_key,
)
from .errors import BudgetExceededError, InvalidExtensionError, InvalidModelError


@dataclass(frozen=True)
class Model:
    domain: DiscreteDomain

    kind: ClassVar[str] = "abstract"

    def __call__(self, point: Sequence[int]) -> OutputValue:
        return self._evaluate(self.domain.check(point))

    def _evaluate(self, point: Point) -> OutputValue:
        raise NotImplementedError

    def extend(self, domain: DiscreteDomain) -> Model:
        """The same model evaluated over an extension of its domain."""
        if not domain.is_extension_of(self.domain):
            raise InvalidExtensionError(
                f"{list(domain.scales)} does not extend {list(self.domain.scales)}"
            )
        return replace(self, domain=domain)

    def output_bound(self) -> tuple[int, str] | None:
        """A proven upper bound on the number of reachable outputs, if the kind has one."""
        return None


@dataclass(frozen=True)
class TableModel(Model):
    entries: Mapping[Point, OutputValue]
    default: OutputValue = NULL

    kind: ClassVar[str] = "table"

    def __post_init__(self) -> None:
        for point in self.entries:
            if point not in self.domain:
                raise InvalidModelError(f"table entry {point} lies outside domain {list(self.domain.scales)}")

    def _evaluate(self, point: Point) -> OutputValue:
        return self.entries.get(point, self.default)

    def reachable(self) -> frozenset[OutputValue]:
        values = set(self.entries.values())
        if self.domain.cardinality > len(self.entries):
            values.add(self.default)
        return frozenset(values)

    def output_bound(self) -> tuple[int, str]:
        n = len(self.reachable())
        return n, f"table with {len(self.entries)} entries reaches {n} distinct values"


@dataclass(frozen=True)
class AffineModel(Model):
    weights: tuple[Rational, ...]
    bias: Rational = 0

    kind: ClassVar[str] = "affine"

    def __post_init__(self) -> None:
        if len(self.weights) != self.domain.ndim:
            raise InvalidModelError(
                f"expected {self.domain.ndim} weights, got {len(self.weights)}"
            )
        object.__setattr__(self, "weights", tuple(_rational(w) for w in self.weights))
        object.__setattr__(self, "bias", _rational(self.bias))

    def _evaluate(self, point: Point) -> OutputValue:
        return canonical(sum((w * x for w, x in zip(self.weights, point)), self.bias))


@dataclass(frozen=True)
class Indicator:
    """One class label of a classifier: score decays linearly from an anchor point."""

    name: str
    anchor: Point
    slope: Rational

    def score(self, point: Point) -> Fraction:
        distance = sum(abs(a - b) for a, b in zip(point, self.anchor))
        return min(Fraction(1), max(Fraction(0), 1 - Fraction(self.slope) * distance))


def quantize_score(score: Rational, q: int) -> OutputValue:
    """Round *score* half-up onto the grid ``{0, 1/q, ..., 1}``."""
    score = min(Fraction(1), max(Fraction(0), Fraction(score)))
    return canonical(Fraction(math.floor(score * q + Fraction(1, 2)), q))


@dataclass(frozen=True)
class ClassifierModel(Model):
    indicators: tuple[Indicator, ...]
    q: int

    kind: ClassVar[str] = "classifier"

    def __post_init__(self) -> None:
        if not self.indicators:
            raise InvalidModelError("a classifier needs at least one indicator")
        if isinstance(self.q, bool) or not isinstance(self.q, int) or self.q < 1:
            raise InvalidModelError(f"quantization denominator must be >= 1, got {self.q!r}")
        names = [ind.name for ind in self.indicators]
        if len(set(names)) != len(names):
            raise InvalidModelError("indicator names must be distinct")
        for ind in self.indicators:
            if ind.anchor not in self.domain:
                raise InvalidModelError(f"anchor {ind.anchor} of {ind.name!r} lies outside the domain")
            if ind.slope < 0:
                raise InvalidModelError(f"slope of {ind.name!r} must be non-negative")

    def _evaluate(self, point: Point) -> OutputValue:
        best_level, best = -1, self.indicators[0]
        for ind in self.indicators:
            level = math.floor(ind.score(point) * self.q + Fraction(1, 2))
            if level > best_level:
                best_level, best = level, ind
        return (canonical(Fraction(best_level, self.q)), Atom(best.name))

    def output_bound(self) -> tuple[int, str]:
        n = len(self.indicators)
        return n * (self.q + 1), f"{n} indicators x {self.q + 1} score levels"


@dataclass(frozen=True)
class PiecewiseModel(Model):
    pieces: tuple[tuple[Box, Model], ...]
    fallback: OutputValue = NULL

    kind: ClassVar[str] = "piecewise"

    def __post_init__(self) -> None:
        for box, sub in self.pieces:
            if not box.within(sub.domain) or not box.within(self.domain):
                raise InvalidModelError(f"piece region {box.lo}..{box.hi} lies outside the domain")

    def _evaluate(self, point: Point) -> OutputValue:
        for box, sub in self.pieces:
            if point in box:
                return sub._evaluate(point)
        return self.fallback

    def output_bound(self) -> tuple[int, str]:
        total = 1
        for box, sub in self.pieces:
            inner = sub.output_bound()
            total += box.cardinality if inner is None else min(inner[0], box.cardinality)
        return total, f"{len(self.pieces)} fixed pieces plus the fallback value"


@dataclass(frozen=True)
class RestrictedModel(Model):
    box: Box
    inner: Model
    outside: OutputValue = NULL

    kind: ClassVar[str] = "restricted"

    def __post_init__(self) -> None:
        if not self.box.within(self.inner.domain) or not self.box.within(self.domain):
            raise InvalidModelError(f"box {self.box.lo}..{self.box.hi} lies outside the domain")

    def _evaluate(self, point: Point) -> OutputValue:
        if point in self.box:
            return self.inner._evaluate(point)
        return self.outside

    def output_bound(self) -> tuple[int, str]:
        inner = self.inner.output_bound()
        n = self.box.cardinality if inner is None else min(inner[0], self.box.cardinality)
        return n + 1, "fixed box plus the outside value"


def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


@dataclass(frozen=True)
class PairingModel(Model):
    """Injective stand-in: folds coordinates with the Cantor pairing bijection.

    Injective on every grid whatever its scales, so it stays injective under
    any extension.
    """

    kind: ClassVar[str] = "oracle-injective"

    def _evaluate(self, point: Point) -> OutputValue:
        code = point[0]
        for x in point[1:]:
            code = cantor_pair(code, x)
        return code


def _rational(value: object) -> Rational:
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise InvalidModelError(f"expected an exact rational, got {value!r}")
    return canonical(value)


def evaluate(model: Model, point: Sequence[int]) -> OutputValue:
    return model(point)


def lookup_table_model(
    domain: DiscreteDomain,
    entries: Mapping[Sequence[int], object],
    default: object = NULL,
) -> TableModel:
    table = {tuple(p): canonical(v) for p, v in entries.items()}
    return TableModel(domain, table, canonical(default))


def affine_model(domain: DiscreteDomain, weights: Iterable[Rational], bias: Rational = 0) -> AffineModel:
    return AffineModel(domain, tuple(weights), bias)


def classifier_model(
    domain: DiscreteDomain,
    indicators: Iterable[Indicator | tuple[str, Sequence[int], Rational]],
    q: int,
) -> ClassifierModel:
    built = tuple(
        ind if isinstance(ind, Indicator) else Indicator(ind[0], tuple(ind[1]), _rational(ind[2]))
        for ind in indicators
    )
    return ClassifierModel(domain, built, q)


def piecewise_model(
    domain: DiscreteDomain,
    pieces: Iterable[tuple[Box, Model]],
    fallback: object = NULL,
) -> PiecewiseModel:
    return PiecewiseModel(domain, tuple(pieces), canonical(fallback))


def restrict_model(model: Model, box: Box, outside: object = NULL) -> RestrictedModel:
    return RestrictedModel(model.domain, box, model, canonical(outside))


def pairing_model(domain: DiscreteDomain) -> PairingModel:
    return PairingModel(domain)


@dataclass(frozen=True)
class RangeInfo:
    """Reachable outputs of a model: the exact set when known, and a size bound."""

    values: frozenset[OutputValue] | None
    bound: int
    justification: str

    @property
    def exact(self) -> bool:
        return self.values is not None

    def sorted_values(self) -> list[OutputValue]:
        return sorted(self.values or (), key=value_key)


def range_of(model: Model, domain: DiscreteDomain | None = None, budget: int = DEFAULT_BUDGET) -> RangeInfo:
    """Reachable output set by enumeration, or a symbolic size bound.

    When both are available the bound is the kind's symbolic bound, which may
    be looser than ``len(values)``.
    """
    if domain is not None and domain != model.domain:
        model = model.extend(domain)
    symbolic = model.output_bound()
    if model.domain.cardinality <= budget:
        values = frozenset(model._evaluate(p) for p in model.domain.points(budget))
        if symbolic is None:
            return RangeInfo(values, len(values), f"enumerated {model.domain.cardinality} points")
        return RangeInfo(values, symbolic[0], symbolic[1])
    if isinstance(model, TableModel):
        values = model.reachable()
        return RangeInfo(values, len(values), symbolic[1])
    if symbolic is not None:
        return RangeInfo(None, symbolic[0], symbolic[1])
    raise BudgetExceededError(model.domain.cardinality, budget)
