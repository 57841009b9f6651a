"""Profiles over U^k, the well-ordered fuzzy relation and pseudo-frequency combination."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .fuzzy_core import (
    LABELS,
    DomainError,
    EmptyFuzzySetError,
    PerformanceLabel,
    StageFuzzySet,
    parse_label,
)

Profile = tuple[PerformanceLabel, ...]


def make_profile(text: str | Iterable) -> Profile:
    """``"dbb"``, ``"d,b,b"``, ``"d b b"`` or any iterable of labels."""
    if isinstance(text, str):
        tokens = text.replace(",", " ").split()
        if len(tokens) == 1 and len(tokens[0]) > 1 and all(ch.isalpha() for ch in tokens[0]):
            try:
                return (parse_label(tokens[0]),)
            except DomainError:
                tokens = list(tokens[0])
        return tuple(parse_label(t) for t in tokens)
    return tuple(parse_label(t) for t in text)


def profile_key(profile: Profile) -> str:
    return "".join(lab.symbol for lab in profile)


def enumerate_profiles(k: int) -> list[Profile]:
    """All 5**k profiles in ascending lexicographic order, ``(a, ..., a)`` first."""
    if k < 1:
        raise DomainError(f"stage count must be positive, got {k}")
    return list(itertools.product(LABELS, repeat=k))


def is_well_ordered(profile: Profile) -> bool:
    """True when success never increases from one stage to the next."""
    return all(x >= y for x, y in zip(profile, profile[1:]))


def relation_membership(stage_sets: Sequence[StageFuzzySet], profile: Profile) -> Fraction:
    if len(stage_sets) != len(profile):
        raise DomainError(f"{len(stage_sets)} stage sets for a profile of length {len(profile)}")
    if not is_well_ordered(profile):
        return Fraction(0)
    m = Fraction(1)
    for stage, label in zip(stage_sets, profile):
        m *= stage[label]
    return m


@dataclass(frozen=True)
class ProfileEntry:
    membership: Fraction
    possibility: Fraction
    probability: Fraction


def _ratios(values: Mapping[Profile, Fraction]) -> tuple[Fraction, Fraction]:
    top = max(values.values(), default=Fraction(0))
    total = sum(values.values(), Fraction(0))
    return top, total


@dataclass(frozen=True)
class ProfileRelation:
    """Membership, possibility and probability of every profile for one group."""

    stage_sets: tuple[StageFuzzySet, ...]
    entries: dict[Profile, ProfileEntry] = field(compare=True)

    @property
    def k(self) -> int:
        return len(self.stage_sets)

    @property
    def is_empty(self) -> bool:
        return not any(e.membership for e in self.entries.values())

    def __getitem__(self, profile) -> ProfileEntry:
        if not isinstance(profile, tuple) or not all(isinstance(x, PerformanceLabel) for x in profile):
            profile = make_profile(profile)
        return self.entries[profile]

    def memberships(self) -> dict[Profile, Fraction]:
        return {p: e.membership for p, e in self.entries.items()}

    def nonzero(self) -> list[Profile]:
        return [p for p, e in self.entries.items() if e.membership]

    def requantized(self, quantize: Callable[[Fraction], Fraction]) -> ProfileRelation:
        """Apply ``quantize`` to every membership degree and recompute the ratios from the results."""
        return relation_from_memberships(
            self.stage_sets, {p: quantize(m) for p, m in self.memberships().items()}, allow_empty=True
        )


def relation_from_memberships(
    stage_sets: Sequence[StageFuzzySet],
    memberships: Mapping[Profile, Fraction],
    allow_empty: bool = False,
) -> ProfileRelation:
    top, total = _ratios(memberships)
    if top == 0 and not allow_empty:
        raise EmptyFuzzySetError("empty relation")
    entries = {}
    for p, m in memberships.items():
        if top:
            entries[p] = ProfileEntry(m, m / top, m / total)
        else:
            entries[p] = ProfileEntry(m, Fraction(0), Fraction(0))
    return ProfileRelation(tuple(stage_sets), entries)


def build_relation(stage_sets: Sequence[StageFuzzySet], allow_empty: bool = False) -> ProfileRelation:
    """Evaluate the relation on all 5**k profiles.

    Possibility divides by the largest membership, probability by the sum.
    With ``allow_empty`` an all-zero relation is returned with zero ratios
    instead of raising.
    """
    stage_sets = tuple(stage_sets)
    if not stage_sets:
        raise DomainError("at least one stage set is required")
    memberships = {p: relation_membership(stage_sets, p) for p in enumerate_profiles(len(stage_sets))}
    return relation_from_memberships(stage_sets, memberships, allow_empty=allow_empty)


@dataclass(frozen=True)
class CombinedEntry:
    pseudo_frequency: Fraction
    combined_probability: Fraction
    combined_possibility: Fraction


@dataclass(frozen=True)
class CombinedRelation:
    """Pseudo-frequencies summed over groups, with the combined ratios."""

    group_count: int
    entries: dict[Profile, CombinedEntry]

    def __getitem__(self, profile) -> CombinedEntry:
        if not isinstance(profile, tuple) or not all(isinstance(x, PerformanceLabel) for x in profile):
            profile = make_profile(profile)
        return self.entries[profile]

    def frequencies(self) -> dict[Profile, Fraction]:
        return {p: e.pseudo_frequency for p, e in self.entries.items()}


def combine_frequencies(tables: Sequence[Mapping[Profile, Fraction]]) -> dict[Profile, Fraction]:
    """Sum per-profile values across tables; the order of the result follows the first table."""
    if not tables:
        return {}
    keys = list(tables[0])
    if any(set(t) != set(keys) for t in tables[1:]):
        raise DomainError("tables cover different profiles")
    return {p: sum((t[p] for t in tables), Fraction(0)) for p in keys}


def combine_relations(relations: Sequence[ProfileRelation]) -> CombinedRelation:
    """Combine two or more groups through the sum of their membership degrees."""
    relations = list(relations)
    if len(relations) < 2:
        raise DomainError(f"combining needs at least 2 relations, got {len(relations)}")
    ks = {r.k for r in relations}
    if len(ks) != 1:
        raise DomainError(f"relations have different stage counts {sorted(ks)}")
    freqs = combine_frequencies([r.memberships() for r in relations])
    top, total = _ratios(freqs)
    if top == 0:
        raise EmptyFuzzySetError("empty combined relation")
    entries = {p: CombinedEntry(f, f / total, f / top) for p, f in freqs.items()}
    return CombinedRelation(len(relations), entries)


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"

    def __str__(self) -> str:
        return self.value


def compare_profiles(p: Profile, q: Profile) -> Ordering:
    """Componentwise dominance by label rank."""
    if len(p) != len(q):
        raise DomainError(f"profiles of different lengths {len(p)} and {len(q)}")
    ge = all(x >= y for x, y in zip(p, q))
    le = all(x <= y for x, y in zip(p, q))
    if ge and le:
        return Ordering.EQUAL
    if ge:
        return Ordering.GREATER
    if le:
        return Ordering.LESS
    return Ordering.INCOMPARABLE


@dataclass(frozen=True)
class DominanceReport:
    """Pairwise comparability of named profiles and the maximal elements."""

    names: tuple[str, ...]
    profiles: tuple[Profile, ...]
    matrix: tuple[tuple[Ordering, ...], ...]
    maximal: tuple[str, ...]


def dominance_report(named: Sequence[tuple[str, Profile]]) -> DominanceReport:
    names = tuple(n for n, _ in named)
    profiles = tuple(p for _, p in named)
    matrix = tuple(tuple(compare_profiles(p, q) for q in profiles) for p in profiles)
    maximal = tuple(
        names[i] for i, row in enumerate(matrix) if not any(o is Ordering.LESS for o in row)
    )
    return DominanceReport(names, profiles, matrix, maximal)
