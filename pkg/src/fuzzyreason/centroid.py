"""Centre-of-gravity scoring of a membership bar graph and group comparison.

Label of rank r is drawn as the unit-width bar [r, r+1] x [0, y_r].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .fuzzy_core import (
    LABELS,
    DomainError,
    EmptyFuzzySetError,
    NormalizedDistribution,
    StageFuzzySet,
    normalize_distribution,
)


@dataclass(frozen=True)
class CentroidPoint:
    x: Fraction
    y: Fraction

    def __iter__(self):
        return iter((self.x, self.y))


@dataclass(frozen=True)
class ReferencePoints:
    worst: CentroidPoint
    center: CentroidPoint
    ideal: CentroidPoint


_REFERENCE = ReferencePoints(
    worst=CentroidPoint(Fraction(1, 2), Fraction(1, 2)),
    center=CentroidPoint(Fraction(5, 2), Fraction(1, 10)),
    ideal=CentroidPoint(Fraction(9, 2), Fraction(1, 2)),
)


def reference_points() -> ReferencePoints:
    """Worst (all mass on ``a``), uniform minimum and ideal (all mass on ``e``) centroids."""
    return _REFERENCE


def centroid_of_normalized(y: Sequence[Fraction]) -> CentroidPoint:
    """Evaluate the centroid formulas on values assumed to sum to 1, without renormalizing."""
    y = tuple(y)
    if len(y) != len(LABELS):
        raise DomainError(f"expected {len(LABELS)} values, got {len(y)}")
    x_c = sum(((2 * i + 1) * v for i, v in enumerate(y)), Fraction(0)) / 2
    y_c = sum((v * v for v in y), Fraction(0)) / 2
    return CentroidPoint(x_c, y_c)


def centroid_closed_form(y: StageFuzzySet | NormalizedDistribution | Sequence) -> CentroidPoint:
    """Exact centroid of the bar graph after normalizing ``y`` to unit sum."""
    return centroid_of_normalized(normalize_distribution(y).y)


def centroid_quadrature(y: Sequence[float], cells: int = 64) -> tuple[float, float]:
    """Midpoint-rule double integration over the bar graph, in floating point.

    Each bar is split into ``cells`` x ``cells`` sub-rectangles. Kept free of
    the closed-form path so it can serve as an independent check.
    """
    if cells < 1:
        raise DomainError(f"cells must be positive, got {cells}")
    heights = np.asarray([float(v) for v in y], dtype=float)
    if heights.shape != (len(LABELS),):
        raise DomainError(f"expected {len(LABELS)} values, got {heights.size}")
    if np.any(heights < 0):
        raise DomainError("negative bar height")
    total = heights.sum()
    if total <= 0:
        raise EmptyFuzzySetError()
    heights = heights / total

    frac = (np.arange(cells) + 0.5) / cells
    area = mx = my = 0.0
    for i, h in enumerate(heights):
        if h == 0:
            continue
        xs = i + frac
        us = h * frac
        da = (1.0 / cells) * (h / cells)
        X, U = np.meshgrid(xs, us, indexing="ij")
        area += da * X.size
        mx += da * X.sum()
        my += da * U.sum()
    return mx / area, my / area


class Verdict(enum.Enum):
    FIRST_BETTER = "first_better"
    SECOND_BETTER = "second_better"
    TIE = "tie"

    def __str__(self) -> str:
        return self.value


class TieBreak(enum.Enum):
    """What to do when two centroids share the same x coordinate.

    ``y_c_directional`` prefers the larger y_c when the common x_c is at least
    5/2 (closer to the ideal point) and the smaller y_c otherwise.
    ``strict_tie`` reports a tie whenever x_c is equal.
    """

    Y_C_DIRECTIONAL = "y_c_directional"
    STRICT_TIE = "strict_tie"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PerformanceComparison:
    verdict: Verdict
    policy: TieBreak
    x_c: tuple[Fraction, Fraction]
    y_c: tuple[Fraction, Fraction] | None = None  # set only when the tie-break was consulted


def compare_groups(
    c1: CentroidPoint, c2: CentroidPoint, policy: TieBreak = TieBreak.Y_C_DIRECTIONAL
) -> PerformanceComparison:
    policy = TieBreak(policy)
    xs = (c1.x, c2.x)
    if c1.x > c2.x:
        return PerformanceComparison(Verdict.FIRST_BETTER, policy, xs)
    if c1.x < c2.x:
        return PerformanceComparison(Verdict.SECOND_BETTER, policy, xs)
    ys = (c1.y, c2.y)
    if policy is TieBreak.STRICT_TIE or c1.y == c2.y:
        verdict = Verdict.TIE
    elif (c1.y > c2.y) == (c1.x >= Fraction(5, 2)):
        verdict = Verdict.FIRST_BETTER
    else:
        verdict = Verdict.SECOND_BETTER
    return PerformanceComparison(verdict, policy, xs, ys)


def _sort_key(c: CentroidPoint, policy: TieBreak):
    if policy is TieBreak.STRICT_TIE:
        return (c.x,)
    return (c.x, c.y if c.x >= Fraction(5, 2) else -c.y)


def rank_centroids(
    centroids: Sequence[CentroidPoint], policy: TieBreak = TieBreak.Y_C_DIRECTIONAL
) -> list[list[int]]:
    """Best-first tiers of indices; indices in a tier are tied under ``policy``."""
    policy = TieBreak(policy)
    order = sorted(range(len(centroids)), key=lambda i: _sort_key(centroids[i], policy), reverse=True)
    tiers: list[list[int]] = []
    last = None
    for i in order:
        key = _sort_key(centroids[i], policy)
        if tiers and key == last:
            tiers[-1].append(i)
        else:
            tiers.append([i])
        last = key
    for tier in tiers:
        tier.sort()
    return tiers


@dataclass(frozen=True)
class StageComparison:
    """Centroids of every group at one stage, pairwise verdicts and the ranking."""

    stage: int
    distributions: tuple[NormalizedDistribution, ...]
    centroids: tuple[CentroidPoint, ...]
    pairs: tuple[tuple[int, int, PerformanceComparison], ...]
    tiers: tuple[tuple[int, ...], ...] = field(default=())


def stagewise_group_comparison(
    groups: Sequence[Sequence[StageFuzzySet]],
    policy: TieBreak = TieBreak.Y_C_DIRECTIONAL,
    normalize: Callable[[StageFuzzySet], NormalizedDistribution] = normalize_distribution,
) -> list[StageComparison]:
    """Compare groups stage by stage through the centroids of their normalized sets.

    ``groups[g][s]`` is the fuzzy set of group g at stage s. Every pair
    ``(i, j)`` with ``i < j`` is compared. ``normalize`` may substitute a
    rounded normalization; its output is fed to the centroid as-is.
    """
    policy = TieBreak(policy)
    if len(groups) < 2:
        raise DomainError(f"comparison needs at least 2 groups, got {len(groups)}")
    stage_counts = {len(g) for g in groups}
    if len(stage_counts) != 1:
        raise DomainError(f"groups have different stage counts {sorted(stage_counts)}")
    report = []
    for s in range(stage_counts.pop()):
        dists = tuple(normalize(g[s]) for g in groups)
        cents = tuple(centroid_of_normalized(d.y) for d in dists)
        pairs = tuple(
            (i, j, compare_groups(cents[i], cents[j], policy))
            for i in range(len(groups))
            for j in range(i + 1, len(groups))
        )
        tiers = tuple(tuple(t) for t in rank_centroids(cents, policy))
        report.append(StageComparison(s, dists, cents, pairs, tiers))
    return report
