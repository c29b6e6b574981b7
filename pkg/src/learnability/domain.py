"""Finite integer-grid domains, exact output values and fiber partitions.

A domain is the grid ``{0..s_1-1} x ... x {0..s_N-1}``; points are plain
tuples of ints.  Output values are exact: ``int``, canonical
``fractions.Fraction``, :class:`Atom` tokens, or ``(rational, Atom)`` pairs
for classifier outputs.  Floats are rejected everywhere.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Union

from .errors import (
    BudgetExceededError,
    DomainMismatchError,
    InvalidDomainError,
    InvalidExtensionError,
)

if TYPE_CHECKING:
    from .models import Model

Point = tuple[int, ...]

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True, order=True)
class Atom:
    """A named symbolic output token such as ``NULL`` or a class label."""

    name: str

    def __str__(self) -> str:
        return self.name


NULL = Atom("NULL")

Rational = Union[int, Fraction]
OutputValue = Union[int, Fraction, Atom, tuple]


def canonical(value: object) -> OutputValue:
    """Return the canonical exact form of *value*.

    Integral fractions collapse to ``int`` so that equal values compare and
    hash identically whatever route produced them.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not output values")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Atom):
        return value
    if isinstance(value, tuple) and len(value) == 2 and isinstance(value[1], Atom):
        score = canonical(value[0])
        if not isinstance(score, (int, Fraction)):
            raise TypeError(f"pair score must be rational, got {value[0]!r}")
        return (score, value[1])
    raise TypeError(f"not an exact output value: {value!r}")


def value_key(value: OutputValue) -> tuple:
    """Total order over mixed output values: numbers < atoms < pairs."""
    if isinstance(value, Atom):
        return (1, 0, value.name)
    if isinstance(value, tuple):
        return (2, value[0], value[1].name)
    return (0, value, "")


def format_value(value: OutputValue) -> str:
    if isinstance(value, tuple):
        return f"({format_value(value[0])}, {value[1].name})"
    return str(value)


def format_count(n: int) -> str:
    """Exact decimal for ordinary sizes, ``~10^x`` for astronomically large ones."""
    if n.bit_length() <= 3000:
        return str(n)
    return f"~10^{math.log10(n):.1f}"


def format_point(point: Point) -> str:
    return "(" + ",".join(str(c) for c in point) + ")"


@dataclass(frozen=True)
class Box:
    """Axis-aligned box with inclusive bounds ``lo[i] <= x[i] <= hi[i]``."""

    lo: Point
    hi: Point

    def __post_init__(self) -> None:
        if len(self.lo) != len(self.hi):
            raise InvalidDomainError("box bounds differ in dimension")
        if any(a < 0 or a > b for a, b in zip(self.lo, self.hi)):
            raise InvalidDomainError(f"empty or negative box {self.lo}..{self.hi}")

    @property
    def ndim(self) -> int:
        return len(self.lo)

    @property
    def cardinality(self) -> int:
        return math.prod(b - a + 1 for a, b in zip(self.lo, self.hi))

    def __contains__(self, point: object) -> bool:
        return (
            isinstance(point, tuple)
            and len(point) == len(self.lo)
            and all(a <= x <= b for a, x, b in zip(self.lo, point, self.hi))
        )

    def within(self, domain: DiscreteDomain) -> bool:
        return self.ndim == domain.ndim and all(
            b < s for b, s in zip(self.hi, domain.scales)
        )


@dataclass(frozen=True)
class DiscreteDomain:
    scales: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if not self.scales:
            raise InvalidDomainError("a domain needs at least one dimension")
        for i, s in enumerate(self.scales):
            if isinstance(s, bool) or not isinstance(s, int) or s < 1:
                raise InvalidDomainError(f"scale of dimension {i} must be a positive integer, got {s!r}")
        if self.labels is not None and len(self.labels) != len(self.scales):
            raise InvalidDomainError("label count must match dimension count")

    @property
    def ndim(self) -> int:
        return len(self.scales)

    @property
    def cardinality(self) -> int:
        return math.prod(self.scales)

    @property
    def log10_cardinality(self) -> float:
        return math.fsum(math.log10(s) for s in self.scales)

    @property
    def is_degenerate(self) -> bool:
        return self.cardinality < 2

    def __contains__(self, point: object) -> bool:
        return (
            isinstance(point, tuple)
            and len(point) == len(self.scales)
            and all(isinstance(c, int) and 0 <= c < s for c, s in zip(point, self.scales))
        )

    def check(self, point: Sequence[int]) -> Point:
        point = tuple(point)
        if point not in self:
            raise DomainMismatchError(f"point {point} is not in domain {list(self.scales)}")
        return point

    def full_box(self) -> Box:
        return Box((0,) * self.ndim, tuple(s - 1 for s in self.scales))

    def points(self, budget: int = DEFAULT_BUDGET) -> Iterator[Point]:
        """All points in lexicographic order; refuses domains above *budget*."""
        if self.cardinality > budget:
            raise BudgetExceededError(self.cardinality, budget)
        return itertools.product(*(range(s) for s in self.scales))

    def prefix(self) -> Iterator[Point]:
        """Lazy lexicographic enumeration with no budget check (for bounded scans).

        ``itertools.product`` materialises each axis, which huge scales forbid.
        """
        point = [0] * self.ndim
        while True:
            yield tuple(point)
            i = self.ndim - 1
            while i >= 0 and point[i] == self.scales[i] - 1:
                point[i] = 0
                i -= 1
            if i < 0:
                return
            point[i] += 1

    def extend(self, dim: int, new_scale: int) -> DiscreteDomain:
        if not 0 <= dim < self.ndim:
            raise InvalidExtensionError(f"no dimension {dim} in a {self.ndim}-dimensional domain")
        if new_scale < self.scales[dim]:
            raise InvalidExtensionError(
                f"cannot shrink dimension {dim} from {self.scales[dim]} to {new_scale}"
            )
        scales = list(self.scales)
        scales[dim] = new_scale
        return DiscreteDomain(tuple(scales), self.labels)

    def is_extension_of(self, other: DiscreteDomain) -> bool:
        return self.ndim == other.ndim and all(a >= b for a, b in zip(self.scales, other.scales))


def make_domain(scales: Iterable[int], labels: Iterable[str] | None = None) -> DiscreteDomain:
    return DiscreteDomain(tuple(scales), tuple(labels) if labels is not None else None)


def cardinality(domain: DiscreteDomain) -> tuple[int, float]:
    """Exact size and its base-10 logarithm (for display)."""
    return domain.cardinality, domain.log10_cardinality


def enumerate_points(domain: DiscreteDomain, budget: int = DEFAULT_BUDGET) -> Iterator[Point]:
    return domain.points(budget)


def extend_dimension(domain: DiscreteDomain, dim: int, new_scale: int) -> DiscreteDomain:
    return domain.extend(dim, new_scale)


@dataclass(frozen=True)
class InformationGenerator:
    """One fiber of a model together with the value every point maps to."""

    representation: OutputValue
    fiber: frozenset[Point]

    @property
    def invariant(self) -> bool:
        # one representation standing for several distinct appearances
        return len(self.fiber) >= 2


def fibers(model: Model, subset: Iterable[Sequence[int]]) -> list[InformationGenerator]:
    """Partition *subset* into preimage classes of *model*.

    The result is sorted by representation value.
    """
    classes: dict[OutputValue, set[Point]] = {}
    for raw in subset:
        point = model.domain.check(raw)
        classes.setdefault(model(point), set()).add(point)
    return [
        InformationGenerator(value, frozenset(classes[value]))
        for value in sorted(classes, key=value_key)
    ]
