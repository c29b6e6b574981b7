"""Deciding Condition S and approximating Condition S* with certificates.

Condition S quantifies over subsets of the domain: for every seen subset
``X_S`` with image ``Y_S`` there must be unseen points ``X_N`` (disjoint from
``X_S``) whose image ``Y_N`` is a genuinely new set of representations.  Two
readings of "new" are supported:

``literal``
    ``Y_N ^ Y_S`` differs from both ``Y_N`` and ``Y_S``.  In a Boolean
    algebra this only says that both sets are non-empty.
``noncontainment``
    ``Y_N - Y_S`` and ``Y_S - Y_N`` are both non-empty.  Under the
    non-empty/proper quantifier policy this holds exactly for injective
    models, which is what :func:`check_s_fast` exploits.

Condition S* extends one dimension without bound.  It is answered with a
three-valued verdict and never passes without a symbolic proof.
"""

from __future__ import annotations

import enum
import itertools
import math
import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .domain import DEFAULT_BUDGET, DiscreteDomain, OutputValue, Point
from .errors import BudgetExceededError, DegenerateDomainError, InvalidExtensionError
from .models import AffineModel, Model, PairingModel

BRUTEFORCE_LIMITS = {"literal": 12, "noncontainment": 16}
DEFAULT_SCHEDULE_STEPS = 8
DEFAULT_SAMPLE_BUDGET = 20_000
SAMPLE_BATCH = 1024


class Reading(str, enum.Enum):
    LITERAL = "literal"
    NONCONTAINMENT = "noncontainment"


class Policy(str, enum.Enum):
    ALLOW_EMPTY = "allow-empty"
    NONEMPTY_PROPER = "nonempty-proper"


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNKNOWN = "unknown"


class Certificate(str, enum.Enum):
    PIGEONHOLE = "pigeonhole"
    SYMBOLIC_INJECTIVE = "symbolic-injective"
    COLLISION_WITNESS = "collision-witness"
    SAMPLING_EXHAUSTED = "sampling-exhausted"


class Overall(str, enum.Enum):
    COMPLETE_LEARNING = "complete-learning"
    NON_LEARNING = "non-learning"
    UNDETERMINED = "undetermined"


Collision = tuple[Point, Point]


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a Condition S check.

    A failing subset is stored through its complement: ``X_S = D - excluded``.
    This keeps witnesses small for the usual ``D - {a}`` case and also covers
    ``X_S = {}`` (``excluded`` is the whole domain).
    """

    verdict: Verdict
    reading: Reading
    policy: Policy
    method: str
    excluded: frozenset[Point] | None = None
    collision: Collision | None = None
    subsets_examined: int = 0
    pairs_examined: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def failing_subset(self, domain: DiscreteDomain, budget: int = DEFAULT_BUDGET) -> frozenset[Point] | None:
        if self.excluded is None:
            return None
        return frozenset(p for p in domain.points(budget) if p not in self.excluded)


@dataclass(frozen=True)
class StarEntry:
    dim: int
    verdict: Verdict
    certificate: Certificate
    collision: Collision | None = None
    value: OutputValue | None = None
    extension_scale: int | None = None
    extension_cardinality: int | None = None
    range_bound: int | None = None
    note: str = ""


@dataclass(frozen=True)
class StarReport:
    entries: tuple[StarEntry, ...]
    overall: Overall
    schedules: dict[int, tuple[int, ...]] = field(default_factory=dict)


def _verify_collision(model: Model, a: Point, b: Point) -> OutputValue:
    va, vb = model(a), model(b)
    if a == b or va != vb:
        raise AssertionError(f"bogus collision witness {a} ~ {b}: {va!r} vs {vb!r}")
    return va


# -- Condition S, brute force ------------------------------------------------


def check_s_bruteforce(
    model: Model,
    domain: DiscreteDomain | None = None,
    reading: Reading | str = Reading.NONCONTAINMENT,
    policy: Policy | str = Policy.NONEMPTY_PROPER,
    budget: int | None = None,
) -> ConditionReport:
    """Evaluate both quantifiers of Condition S over every subset pair.

    ``X_S`` ranges over proper subsets of the domain (the empty one only
    under ``allow-empty``); ``X_N`` over subsets of the complement, non-empty
    unless ``allow-empty``.  Subsets ``X_S`` are visited by their complement:
    fewest excluded points first, then lexicographically by the excluded
    points.  The first failing ``X_S`` is the witness.
    """
    reading, policy = Reading(reading), Policy(policy)
    if domain is not None and domain != model.domain:
        model = model.extend(domain)
    domain = model.domain
    limit = BRUTEFORCE_LIMITS[reading.value] if budget is None else budget
    points = list(domain.points(limit))
    n = len(points)

    value_bits: dict[OutputValue, int] = {}
    point_bits = [1 << value_bits.setdefault(model(p), len(value_bits)) for p in points]
    # image[m] = bitmask of values reached by the point set m
    image = [0] * (1 << n)
    for m in range(1, 1 << n):
        low = m & -m
        image[m] = image[m ^ low] | point_bits[low.bit_length() - 1]

    def new_information(ys: int, yn: int) -> bool:
        if reading is Reading.LITERAL:
            sym = ys ^ yn
            return sym != yn and sym != ys
        return bool(yn & ~ys) and bool(ys & ~yn)

    allow_empty = policy is Policy.ALLOW_EMPTY
    full = (1 << n) - 1
    sizes = range(1, n + 1) if allow_empty else range(1, n)
    subsets = pairs = 0
    for k in sizes:
        for excluded in itertools.combinations(range(n), k):
            comp = sum(1 << i for i in excluded)
            ys = image[full ^ comp]
            subsets += 1
            found = False
            # ascending submasks of comp, starting at the empty set
            sub = 0 if allow_empty else comp & -comp
            while True:
                pairs += 1
                if new_information(ys, image[sub]):
                    found = True
                    break
                sub = (sub - comp) & comp
                if sub == 0:
                    break
            if not found:
                return ConditionReport(
                    Verdict.FAIL, reading, policy, "bruteforce",
                    excluded=frozenset(points[i] for i in excluded),
                    subsets_examined=subsets, pairs_examined=pairs,
                )
    return ConditionReport(
        Verdict.PASS, reading, policy, "bruteforce",
        subsets_examined=subsets, pairs_examined=pairs,
    )


# -- collisions ----------------------------------------------------------------


def _least_collision(model: Model, budget: int) -> Collision | None:
    first_two: dict[OutputValue, list[Point]] = {}
    for p in model.domain.points(budget):
        seen = first_two.setdefault(model._evaluate(p), [])
        if len(seen) < 2:
            seen.append(p)
    pairs = [tuple(v) for v in first_two.values() if len(v) == 2]
    return min(pairs) if pairs else None


def _prefix_collision(model: Model, limit: int) -> Collision | None:
    seen: dict[OutputValue, Point] = {}
    for p in itertools.islice(model.domain.prefix(), limit):
        v = model._evaluate(p)
        if v in seen:
            return seen[v], p
        seen[v] = p
    return None


def _sampled_collision(model: Model, samples: int, seed: int) -> Collision | None:
    scales = model.domain.scales
    seen: dict[OutputValue, Point] = {}
    drawn = 0
    for batch in itertools.count():
        rng = random.Random(f"{seed}/{batch}")
        for _ in range(min(SAMPLE_BATCH, samples - drawn)):
            p = tuple(rng.randrange(s) for s in scales)
            v = model._evaluate(p)
            other = seen.setdefault(v, p)
            if other != p:
                return min(p, other), max(p, other)
        drawn += SAMPLE_BATCH
        if drawn >= samples:
            return None
    return None


def find_collision(
    model: Model,
    domain: DiscreteDomain | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> Collision | None:
    """Two distinct points with equal outputs, or ``None``.

    Enumerable domains are scanned exhaustively and yield the
    lexicographically least pair.  Otherwise a proven output bound ``B`` below
    the cardinality means the first ``B + 1`` points must collide; failing
    that, ``budget`` seeded random probes are tried.
    """
    if domain is not None and domain != model.domain:
        model = model.extend(domain)
    if model.domain.cardinality <= budget:
        pair = _least_collision(model, budget)
    else:
        bound = model.output_bound()
        if bound is not None and bound[0] < model.domain.cardinality and bound[0] < budget:
            pair = _prefix_collision(model, bound[0] + 1)
        else:
            pair = _sampled_collision(model, budget, seed)
    if pair is not None:
        _verify_collision(model, *pair)
    return pair


# -- Condition S, fast -----------------------------------------------------------


def check_s_fast(model: Model, domain: DiscreteDomain | None = None, budget: int = DEFAULT_BUDGET) -> ConditionReport:
    """Condition S (noncontainment, non-empty/proper) as an injectivity test.

    A collision ``f(a) = f(b)`` makes ``X_S = D - {a}`` fail: the only unseen
    point reproduces a seen value.  Without collisions every unseen point
    brings a value outside ``Y_S``.
    """
    if domain is not None and domain != model.domain:
        model = model.extend(domain)
    domain = model.domain
    args = (Reading.NONCONTAINMENT, Policy.NONEMPTY_PROPER)
    if domain.cardinality < 2:
        return ConditionReport(Verdict.PASS, *args, "vacuous")
    if domain.cardinality <= budget:
        pair = _least_collision(model, budget)
        method = "collision-scan"
    elif isinstance(model, PairingModel):
        pair, method = None, "symbolic"
    elif isinstance(model, AffineModel):
        widest = max(range(domain.ndim), key=lambda i: domain.scales[i])
        found = _affine_difference(model.weights, domain.scales, widest, budget, bounded=True)
        if found is None:
            raise BudgetExceededError(domain.cardinality, budget)
        pair = _difference_pair(found[0]) if found[0] is not None else None
        method = "symbolic"
    else:
        bound = model.output_bound()
        if bound is None or bound[0] >= budget:
            raise BudgetExceededError(domain.cardinality, budget)
        pair = _prefix_collision(model, bound[0] + 1) if bound[0] < domain.cardinality else None
        if pair is None:
            raise BudgetExceededError(domain.cardinality, budget)
        method = "pigeonhole-scan"
    if pair is None:
        return ConditionReport(Verdict.PASS, *args, method)
    _verify_collision(model, *pair)
    return ConditionReport(
        Verdict.FAIL, *args, method, excluded=frozenset([pair[0]]), collision=pair,
    )


# -- Condition S* ------------------------------------------------------------------


def default_schedule(scale: int, steps: int = DEFAULT_SCHEDULE_STEPS) -> tuple[int, ...]:
    """Successive powers of two strictly above *scale*."""
    first = 1 << scale.bit_length()
    return tuple(first << i for i in range(steps))


def _affine_difference(
    weights: Sequence[Fraction | int],
    scales: Sequence[int],
    free_dim: int,
    budget: int,
    bounded: bool = False,
) -> tuple[tuple[int, ...] | None] | None:
    """Search a non-zero integer ``d`` with ``sum(w_i d_i) == 0``.

    ``|d_i| < scales[i]`` for every ``i`` except *free_dim*, whose
    coordinate is solved for by divisibility; it is unbounded unless
    *bounded*.  Returns ``(d,)`` with ``d`` normalised (first non-zero of
    (free, rest...) positive, smallest ``|d_free|`` preferred), ``(None,)``
    if no such ``d`` exists, or ``None`` when the bounded enumeration would
    exceed *budget*.
    """
    ndim = len(weights)
    lcm = math.lcm(*(Fraction(w).denominator for w in weights))
    w = [int(Fraction(x) * lcm) for x in weights]
    others = [i for i in range(ndim) if i != free_dim]
    if math.prod(2 * scales[i] - 1 for i in others) > budget:
        return None
    if w[free_dim] == 0 and (not bounded or scales[free_dim] > 1):
        d = [0] * ndim
        d[free_dim] = 1
        return (tuple(d),)
    best: tuple[int, ...] | None = None
    best_key: tuple | None = None
    for rest in itertools.product(*(range(-(scales[i] - 1), scales[i]) for i in others)):
        if not any(rest):
            continue
        partial = sum(w[i] * r for i, r in zip(others, rest))
        if w[free_dim] == 0:
            if partial != 0:
                continue
            free = 0
        else:
            if partial % w[free_dim]:
                continue
            free = -partial // w[free_dim]
            if bounded and abs(free) >= scales[free_dim]:
                continue
        d = [0] * ndim
        for i, r in zip(others, rest):
            d[i] = r
        d[free_dim] = free
        order = [free_dim] + others
        lead = next(d[i] for i in order if d[i])
        if lead < 0:
            d = [-x for x in d]
        key = (abs(free), [d[i] for i in order])
        if best_key is None or key < best_key:
            best, best_key = tuple(d), key
    return (best,)


def _difference_pair(d: Sequence[int]) -> Collision:
    """Points ``a, b`` on the non-negative grid with ``a - b == d``."""
    return tuple(max(x, 0) for x in d), tuple(max(-x, 0) for x in d)


def _schedule_for(domain: DiscreteDomain, dim: int, schedule: Sequence[int] | None) -> tuple[int, ...]:
    if not 0 <= dim < domain.ndim:
        raise InvalidExtensionError(f"no dimension {dim} in a {domain.ndim}-dimensional domain")
    if schedule is None:
        return default_schedule(domain.scales[dim])
    schedule = tuple(schedule)
    if not schedule:
        raise InvalidExtensionError("extension schedule is empty")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise InvalidExtensionError("extension schedule must be strictly increasing")
    if schedule[0] < domain.scales[dim]:
        raise InvalidExtensionError(
            f"schedule starts at {schedule[0]}, below the current scale {domain.scales[dim]}"
        )
    return schedule


def check_s_star(
    model: Model,
    domain: DiscreteDomain | None = None,
    dim: int = 0,
    schedule: Sequence[int] | None = None,
    sample_budget: int = DEFAULT_SAMPLE_BUDGET,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> StarEntry:
    """Condition S* on one dimension, tried in order of certificate strength.

    1. pigeonhole: a proven output bound below some scheduled extension's size;
    2. symbolic: lattice search for colliding affine differences, or the
       pairing bijection;
    3. seeded collision search on each scheduled extension;
    4. otherwise unknown.
    """
    if domain is not None and domain != model.domain:
        model = model.extend(domain)
    domain = model.domain
    steps = _schedule_for(domain, dim, schedule)

    for scale in steps:
        ext = model.extend(domain.extend(dim, scale))
        bound = ext.output_bound()
        if bound is None or ext.domain.cardinality <= bound[0]:
            continue
        pair = _prefix_collision(ext, bound[0] + 1) if bound[0] < budget else None
        value = _verify_collision(ext, *pair) if pair else None
        return StarEntry(
            dim, Verdict.FAIL, Certificate.PIGEONHOLE, pair, value,
            extension_scale=scale, extension_cardinality=ext.domain.cardinality,
            range_bound=bound[0], note=bound[1],
        )

    if isinstance(model, PairingModel):
        return StarEntry(dim, Verdict.PASS, Certificate.SYMBOLIC_INJECTIVE, note="Cantor pairing is a bijection")
    if isinstance(model, AffineModel):
        found = _affine_difference(model.weights, domain.scales, dim, budget)
        if found is not None:
            (d,) = found
            if d is None:
                return StarEntry(dim, Verdict.PASS, Certificate.SYMBOLIC_INJECTIVE,
                                 note="no integer kernel vector within the off-dimension bounds")
            a, b = _difference_pair(d)
            scale = max(domain.scales[dim], abs(d[dim]) + 1)
            ext = model.extend(domain.extend(dim, scale))
            value = _verify_collision(ext, a, b)
            return StarEntry(
                dim, Verdict.FAIL, Certificate.COLLISION_WITNESS, (a, b), value,
                extension_scale=scale, extension_cardinality=ext.domain.cardinality,
                note=f"kernel vector {d}",
            )

    for step, scale in enumerate(steps):
        ext = model.extend(domain.extend(dim, scale))
        pair = find_collision(ext, budget=sample_budget, seed=seed * 1_000_003 + step)
        if pair is not None:
            value = _verify_collision(ext, *pair)
            return StarEntry(
                dim, Verdict.FAIL, Certificate.COLLISION_WITNESS, pair, value,
                extension_scale=scale, extension_cardinality=ext.domain.cardinality,
            )
    return StarEntry(dim, Verdict.UNKNOWN, Certificate.SAMPLING_EXHAUSTED,
                     note=f"no collision in {len(steps)} scheduled extensions")


def classify(
    model: Model,
    domain: DiscreteDomain | None = None,
    schedule: Sequence[int] | None = None,
    sample_budget: int = DEFAULT_SAMPLE_BUDGET,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> StarReport:
    """Condition S* on every dimension.

    Any failing dimension makes the model non-learning; symbolic passes on
    all dimensions make it a complete learning model.
    """
    if domain is not None and domain != model.domain:
        model = model.extend(domain)
    domain = model.domain
    if domain.is_degenerate:
        raise DegenerateDomainError("Condition S is vacuous on a domain with fewer than 2 points")
    entries, schedules = [], {}
    for dim in range(domain.ndim):
        schedules[dim] = _schedule_for(domain, dim, schedule)
        entries.append(check_s_star(model, domain, dim, schedules[dim], sample_budget, seed, budget))
    verdicts = {e.verdict for e in entries}
    if Verdict.FAIL in verdicts:
        overall = Overall.NON_LEARNING
    elif verdicts == {Verdict.PASS}:
        overall = Overall.COMPLETE_LEARNING
    else:
        overall = Overall.UNDETERMINED
    return StarReport(tuple(entries), overall, schedules)
