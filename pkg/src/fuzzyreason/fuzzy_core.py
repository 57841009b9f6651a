"""Linguistic label universe, quintile membership grading and stage fuzzy sets.

Everything here is exact: degrees are ``fractions.Fraction`` and no
floating point enters a threshold comparison.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

Number = Union[int, float, str, Fraction]

DEFAULT_STAGE_NAMES = ("imagination", "visualization", "idea_generation")


class FuzzyError(Exception):
    """Base class for errors raised by the assessment model."""


class DomainError(FuzzyError, ValueError):
    """An argument lies outside the domain of an operation."""


class EmptyFuzzySetError(FuzzyError):
    """Raised when every membership degree is zero and ratios are undefined."""

    def __init__(self, message: str = "empty fuzzy set"):
        super().__init__(message)


class PerformanceLabel(enum.IntEnum):
    """The five ordered linguistic labels of success, ``a`` (very low) to ``e`` (very high)."""

    a = 0
    b = 1
    c = 2
    d = 3
    e = 4

    @property
    def symbol(self) -> str:
        return self.name

    @property
    def rank(self) -> int:
        return int(self)

    @property
    def long_name(self) -> str:
        return _LONG_NAMES[self.value]

    @property
    def score_interval(self) -> tuple[int, int, bool]:
        """``(low, high, high_closed)``; every interval is closed on the left."""
        return (self.value, self.value + 1, self.value == 4)

    def __str__(self) -> str:
        return self.name


_LONG_NAMES = ("very_low", "low", "intermediate", "high", "very_high")
LABELS: tuple[PerformanceLabel, ...] = tuple(PerformanceLabel)

_TOKENS = {lab.symbol: lab for lab in LABELS}
_TOKENS.update({lab.long_name: lab for lab in LABELS})


def parse_label(token: str | PerformanceLabel) -> PerformanceLabel:
    """Parse ``a``..``e`` or ``very_low``..``very_high``, ignoring case and surrounding blanks."""
    if isinstance(token, PerformanceLabel):
        return token
    key = str(token).strip().lower().replace(" ", "_").replace("-", "_")
    try:
        return _TOKENS[key]
    except KeyError:
        raise DomainError(f"unknown label {token!r}") from None


def to_fraction(value: Number) -> Fraction:
    """Convert a decimal, ``"p/q"`` string or number to an exact fraction.

    Floats go through their shortest repr, so ``0.67`` becomes ``67/100``.
    """
    if isinstance(value, bool):
        raise DomainError(f"not a number: {value!r}")
    if isinstance(value, (Fraction, int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise DomainError(f"not a finite number: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"not a number: {value!r}") from None
    raise DomainError(f"not a number: {value!r}")


def classify_numeric_score(score: Number) -> PerformanceLabel:
    """Map a score in [0, 5] to the label whose interval contains it.

    Intervals are [r, r+1) for ranks 0..3 and [4, 5] for ``e``.
    """
    s = to_fraction(score)
    if s < 0 or s > 5:
        raise DomainError(f"score {score!r} outside [0, 5]")
    return LABELS[min(int(s), 4)]


GRADES = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


def membership_grade(count: int, n: int) -> Fraction:
    """Quintile grade of ``count`` individuals out of ``n``.

    Branch k (grade k/4) covers ``k*n/5 < count <= (k+1)*n/5``, with
    ``count <= n/5`` graded 0. Compared as ``5*count`` against ``k*n``.
    """
    if isinstance(count, bool) or isinstance(n, bool) or not isinstance(count, int) or not isinstance(n, int):
        raise DomainError(f"count and n must be integers, got {count!r}, {n!r}")
    if n < 1:
        raise DomainError(f"cohort size must be positive, got {n}")
    if count < 0 or count > n:
        raise DomainError(f"count {count} outside [0, {n}]")
    scaled = 5 * count
    for k in (4, 3, 2, 1):
        if scaled > k * n:
            return GRADES[k]
    return GRADES[0]


@dataclass(frozen=True)
class CohortStageCounts:
    """Number of individuals per label at one stage."""

    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(self.counts)
        object.__setattr__(self, "counts", counts)
        if len(counts) != len(LABELS):
            raise DomainError(f"expected {len(LABELS)} counts, got {len(counts)}")
        if self.n < 1:
            raise DomainError(f"cohort size must be positive, got {self.n}")
        if any(c < 0 for c in counts):
            raise DomainError(f"negative count in {counts}")
        if sum(counts) != self.n:
            raise DomainError(f"counts {counts} sum to {sum(counts)}, not n={self.n}")

    @classmethod
    def from_labels(cls, labels: Iterable[PerformanceLabel]) -> CohortStageCounts:
        tally = [0] * len(LABELS)
        for lab in labels:
            tally[parse_label(lab)] += 1
        return cls(sum(tally), tuple(tally))

    def __getitem__(self, label) -> int:
        return self.counts[parse_label(label)]


@dataclass(frozen=True)
class StageFuzzySet:
    """A fuzzy subset of the label universe; ``memberships[r]`` is the degree of the rank-r label."""

    memberships: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(to_fraction(v) for v in self.memberships)
        if len(values) != len(LABELS):
            raise DomainError(f"expected {len(LABELS)} membership degrees, got {len(values)}")
        for v in values:
            if v < 0 or v > 1:
                raise DomainError(f"membership degree {v} outside [0, 1]")
        object.__setattr__(self, "memberships", values)

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> StageFuzzySet:
        """Build from ``{label: degree}``; absent labels get degree 0."""
        values = [Fraction(0)] * len(LABELS)
        seen = set()
        for key, value in mapping.items():
            lab = parse_label(key)
            if lab in seen:
                raise DomainError(f"label {lab} given twice")
            seen.add(lab)
            values[lab] = to_fraction(value)
        return cls(tuple(values))

    def __getitem__(self, label) -> Fraction:
        return self.memberships[parse_label(label)]

    def __iter__(self):
        return iter(self.memberships)

    def as_dict(self) -> dict[str, Fraction]:
        return {lab.symbol: m for lab, m in zip(LABELS, self.memberships)}

    @property
    def is_empty(self) -> bool:
        return not any(self.memberships)


def build_stage_set(counts: CohortStageCounts) -> StageFuzzySet:
    return StageFuzzySet(tuple(membership_grade(c, counts.n) for c in counts.counts))


@dataclass(frozen=True)
class NormalizedDistribution:
    """Membership degrees rescaled to sum to exactly 1, indexed by label rank."""

    y: tuple[Fraction, ...]

    def __post_init__(self):
        y = tuple(to_fraction(v) for v in self.y)
        if len(y) != len(LABELS):
            raise DomainError(f"expected {len(LABELS)} values, got {len(y)}")
        if any(v < 0 for v in y):
            raise DomainError(f"negative value in distribution {y}")
        object.__setattr__(self, "y", y)

    def __iter__(self):
        return iter(self.y)

    def __getitem__(self, i: int) -> Fraction:
        return self.y[i]


def _values(data) -> tuple[Fraction, ...]:
    if isinstance(data, (StageFuzzySet, NormalizedDistribution)):
        return tuple(data)
    if isinstance(data, Mapping):
        return StageFuzzySet.from_mapping(data).memberships
    return tuple(to_fraction(v) for v in data)


def normalize_distribution(data: StageFuzzySet | Sequence[Number]) -> NormalizedDistribution:
    """Divide every degree by their sum. Raises ``EmptyFuzzySetError`` when all are zero."""
    values = _values(data)
    if len(values) != len(LABELS):
        raise DomainError(f"expected {len(LABELS)} values, got {len(values)}")
    if any(v < 0 for v in values):
        raise DomainError(f"negative value in {values}")
    total = sum(values, Fraction(0))
    if total == 0:
        raise EmptyFuzzySetError()
    return NormalizedDistribution(tuple(v / total for v in values))
