"""Profile tables, assessment reports and their JSON / CSV / markdown renderings."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .centroid import (
    CentroidPoint,
    PerformanceComparison,
    StageComparison,
    TieBreak,
    Verdict,
    centroid_of_normalized,
    stagewise_group_comparison,
)
from .cohort_io import RECORDS, CohortDataset, ParseError, tabulate_counts
from .fuzzy_core import (
    LABELS,
    CohortStageCounts,
    EmptyFuzzySetError,
    NormalizedDistribution,
    StageFuzzySet,
    normalize_distribution,
)
from .profiles import (
    DominanceReport,
    Ordering,
    Profile,
    ProfileRelation,
    build_relation,
    combine_relations,
    make_profile,
    profile_key,
)

PAPER_PLACES = 3


class RoundingMode(enum.Enum):
    """``exact`` keeps rationals throughout.

    ``paper3`` rounds each profile membership to three decimals before any
    ratio is taken, and rounds normalized distributions to the output
    precision before the centroid is evaluated. Both roundings send ties to
    the even digit, which is what turns 0.0625 into the published 0.062.
    """

    EXACT = "exact"
    PAPER3 = "paper3"

    def __str__(self) -> str:
        return self.value


def round_half_up(value: Fraction, places: int) -> Fraction:
    scale = 10**places
    scaled = abs(Fraction(value)) * scale
    q = math.floor(scaled + Fraction(1, 2))
    return Fraction(q if value >= 0 else -q, scale)


def format_decimal(value: Fraction, places: int = 3) -> str:
    """Fixed-point text of ``value`` rounded half-up (away from zero on ties)."""
    r = round_half_up(value, places)
    scale = 10**places
    units = abs(r.numerator * scale // r.denominator)
    sign = "-" if r < 0 else ""
    whole, frac = divmod(units, scale)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"


def paper_round(value: Fraction, places: int = PAPER_PLACES) -> Fraction:
    """Round half to even, exactly."""
    return round(Fraction(value), places)


def rounded_distribution(stage: StageFuzzySet, places: int) -> NormalizedDistribution:
    """Normalize, then round every share; the result need not sum to 1."""
    exact = normalize_distribution(stage)
    return NormalizedDistribution(tuple(paper_round(v, places) for v in exact.y))


# -- profile tables -------------------------------------------------------


@dataclass(frozen=True)
class ProfileTable:
    mode: RoundingMode
    columns: tuple[str, ...]
    rows: tuple[tuple[Profile, tuple[Fraction, ...]], ...]

    def row(self, profile) -> dict[str, Fraction]:
        if isinstance(profile, str):
            profile = make_profile(profile)
        for p, values in self.rows:
            if p == tuple(profile):
                return dict(zip(self.columns, values))
        raise KeyError(profile_key(tuple(profile)))

    def keys(self) -> list[str]:
        return [profile_key(p) for p, _ in self.rows]


def render_profile_table(
    relations: ProfileRelation | Sequence[ProfileRelation],
    mode: RoundingMode = RoundingMode.EXACT,
    probabilities: bool = False,
) -> ProfileTable:
    """Rows for profiles with a nonzero membership in at least one group.

    Per group t the columns are ``m_s(t)`` and ``r_s(t)`` (plus ``p_s(t)``);
    with two or more groups ``f(s)`` and ``r(s)`` (plus ``p(s)``) follow.
    """
    if isinstance(relations, ProfileRelation):
        relations = [relations]
    relations = list(relations)
    mode = RoundingMode(mode)
    if not relations or all(r.is_empty for r in relations):
        raise EmptyFuzzySetError("empty relation")
    keep = [p for p in relations[0].entries if any(r.entries[p].membership for r in relations)]
    if mode is RoundingMode.PAPER3:
        relations = [r.requantized(paper_round) for r in relations]

    columns = []
    for t in range(1, len(relations) + 1):
        columns += [f"m_s({t})", f"r_s({t})"] + ([f"p_s({t})"] if probabilities else [])
    combined = None
    if len(relations) > 1:
        columns += ["f(s)", "r(s)"] + (["p(s)"] if probabilities else [])
        combined = combine_relations(relations)

    rows = []
    for p in keep:
        values = []
        for r in relations:
            e = r.entries[p]
            values += [e.membership, e.possibility] + ([e.probability] if probabilities else [])
        if combined is not None:
            c = combined.entries[p]
            values += [c.pseudo_frequency, c.combined_possibility]
            if probabilities:
                values.append(c.combined_probability)
        rows.append((p, tuple(values)))
    return ProfileTable(mode, tuple(columns), tuple(rows))


# -- assessment report ----------------------------------------------------


@dataclass(frozen=True)
class GroupAssessment:
    name: str
    stage_names: tuple[str, ...]
    stage_sets: tuple[StageFuzzySet, ...]
    distributions: tuple[NormalizedDistribution, ...]
    counts: tuple[CohortStageCounts, ...] | None = None


@dataclass(frozen=True)
class CentroidRecord:
    group: str
    stage: int
    point: CentroidPoint


@dataclass(frozen=True)
class ComparisonRecord:
    stage: int
    stage_name: str
    groups: tuple[str, ...]
    result: StageComparison


@dataclass(frozen=True)
class AssessmentReport:
    rounding_mode: RoundingMode = RoundingMode.EXACT
    precision: int = 3
    groups: tuple[GroupAssessment, ...] = ()
    centroids: tuple[CentroidRecord, ...] = ()
    profiles: ProfileTable | None = None
    comparisons: tuple[ComparisonRecord, ...] = field(default=())


def _distribution(stage: StageFuzzySet, mode: RoundingMode, precision: int) -> NormalizedDistribution:
    if mode is RoundingMode.PAPER3:
        return rounded_distribution(stage, precision)
    return normalize_distribution(stage)


def assess_group(
    dataset: CohortDataset, mode: RoundingMode = RoundingMode.EXACT, precision: int = 3
) -> tuple[GroupAssessment, list[CentroidRecord]]:
    """Fuzzy sets, distributions and centroids of every stage of one group."""
    mode = RoundingMode(mode)
    sets = dataset.fuzzy_sets()
    counts = tuple(tabulate_counts(dataset)) if dataset.mode == RECORDS else None
    dists = []
    for name, s in zip(dataset.stage_names, sets):
        try:
            dists.append(_distribution(s, mode, precision))
        except EmptyFuzzySetError:
            raise EmptyFuzzySetError(
                f"empty fuzzy set: group {dataset.group_name!r}, stage {name!r}"
            ) from None
    group = GroupAssessment(dataset.group_name, dataset.stage_names, sets, tuple(dists), counts)
    cents = [CentroidRecord(dataset.group_name, i, centroid_of_normalized(d.y)) for i, d in enumerate(dists)]
    return group, cents


def build_report(
    datasets: Sequence[CohortDataset],
    mode: RoundingMode = RoundingMode.EXACT,
    precision: int = 3,
    profiles: bool = False,
    probabilities: bool = False,
    compare: bool = False,
    policy: TieBreak = TieBreak.Y_C_DIRECTIONAL,
    assess: bool = True,
) -> AssessmentReport:
    mode = RoundingMode(mode)
    groups, cents = [], []
    if assess or compare:
        for ds in datasets:
            g, c = assess_group(ds, mode, precision)
            groups.append(g)
            cents += c
    table = None
    if profiles:
        table = render_profile_table([build_relation(ds.fuzzy_sets()) for ds in datasets], mode, probabilities)
    comparisons = []
    if compare:
        names = tuple(ds.group_name for ds in datasets)
        results = stagewise_group_comparison(
            [ds.fuzzy_sets() for ds in datasets],
            policy,
            normalize=lambda s: _distribution(s, mode, precision),
        )
        stage_names = datasets[0].stage_names
        comparisons = [ComparisonRecord(r.stage, stage_names[r.stage], names, r) for r in results]
    return AssessmentReport(mode, precision, tuple(groups), tuple(cents), table, tuple(comparisons))


# -- JSON -----------------------------------------------------------------


def _num(value: Fraction, mode: RoundingMode, precision: int) -> dict:
    value = Fraction(value)
    return {
        "num": value.numerator,
        "den": value.denominator,
        "decimal": format_decimal(value, precision),
        "rounding": mode.value,
    }


def _frac(cell) -> Fraction:
    if isinstance(cell, dict):
        return Fraction(int(cell["num"]), int(cell["den"]))
    return Fraction(str(cell))


def _labels_doc(values, mode, precision) -> dict:
    return {lab.symbol: _num(v, mode, precision) for lab, v in zip(LABELS, values)}


def _labels_from(doc) -> tuple[Fraction, ...]:
    return tuple(_frac(doc[lab.symbol]) for lab in LABELS)


def report_to_dict(report: AssessmentReport) -> dict:
    mode, prec = report.rounding_mode, report.precision

    def n(v):
        return _num(v, mode, prec)

    groups = []
    for g in report.groups:
        stages = []
        for i, name in enumerate(g.stage_names):
            stage = {
                "name": name,
                "memberships": _labels_doc(g.stage_sets[i], mode, prec),
                "normalized": _labels_doc(g.distributions[i], mode, prec),
            }
            if g.counts is not None:
                stage["counts"] = {lab.symbol: c for lab, c in zip(LABELS, g.counts[i].counts)}
                stage["n"] = g.counts[i].n
            stages.append(stage)
        groups.append({"name": g.name, "stages": stages})

    centroids = [
        {"group": c.group, "stage": c.stage, "x_c": n(c.point.x), "y_c": n(c.point.y)} for c in report.centroids
    ]

    profiles = []
    if report.profiles is not None:
        for p, values in report.profiles.rows:
            profiles.append(
                {
                    "profile": [lab.symbol for lab in p],
                    "values": {col: n(v) for col, v in zip(report.profiles.columns, values)},
                }
            )

    comparisons = []
    for rec in report.comparisons:
        res = rec.result
        comparisons.append(
            {
                "stage": rec.stage,
                "stage_name": rec.stage_name,
                "groups": list(rec.groups),
                "distributions": [_labels_doc(d, mode, prec) for d in res.distributions],
                "centroids": [{"x_c": n(c.x), "y_c": n(c.y)} for c in res.centroids],
                "pairs": [
                    {
                        "first": rec.groups[i],
                        "second": rec.groups[j],
                        "verdict": cmp.verdict.value,
                        "policy": cmp.policy.value,
                        "x_c": [n(x) for x in cmp.x_c],
                        "y_c": None if cmp.y_c is None else [n(y) for y in cmp.y_c],
                    }
                    for i, j, cmp in res.pairs
                ],
                "ranking": [[rec.groups[i] for i in tier] for tier in res.tiers],
            }
        )

    doc = {
        "rounding_mode": mode.value,
        "precision": prec,
        "groups": groups,
        "centroids": centroids,
        "profiles": profiles,
        "comparisons": comparisons,
    }
    if report.profiles is not None:
        doc["profile_columns"] = list(report.profiles.columns)
    return doc


def report_from_dict(doc: dict) -> AssessmentReport:
    try:
        mode = RoundingMode(doc["rounding_mode"])
        prec = int(doc.get("precision", 3))
        groups = []
        for g in doc["groups"]:
            counts = None
            if g["stages"] and all("counts" in s for s in g["stages"]):
                counts = tuple(
                    CohortStageCounts(s["n"], tuple(s["counts"][lab.symbol] for lab in LABELS)) for s in g["stages"]
                )
            groups.append(
                GroupAssessment(
                    g["name"],
                    tuple(s["name"] for s in g["stages"]),
                    tuple(StageFuzzySet(_labels_from(s["memberships"])) for s in g["stages"]),
                    tuple(NormalizedDistribution(_labels_from(s["normalized"])) for s in g["stages"]),
                    counts,
                )
            )
        cents = tuple(
            CentroidRecord(c["group"], c["stage"], CentroidPoint(_frac(c["x_c"]), _frac(c["y_c"])))
            for c in doc["centroids"]
        )
        table = None
        if "profile_columns" in doc:
            columns = tuple(doc["profile_columns"])
            rows = tuple(
                (make_profile(r["profile"]), tuple(_frac(r["values"][c]) for c in columns)) for r in doc["profiles"]
            )
            table = ProfileTable(mode, columns, rows)
        comps = []
        for c in doc["comparisons"]:
            names = tuple(c["groups"])
            index = {name: i for i, name in enumerate(names)}
            pairs = []
            for p in c["pairs"]:
                cmp = PerformanceComparison(
                    Verdict(p["verdict"]),
                    TieBreak(p["policy"]),
                    tuple(_frac(x) for x in p["x_c"]),
                    None if p["y_c"] is None else tuple(_frac(y) for y in p["y_c"]),
                )
                pairs.append((index[p["first"]], index[p["second"]], cmp))
            result = StageComparison(
                c["stage"],
                tuple(NormalizedDistribution(_labels_from(d)) for d in c["distributions"]),
                tuple(CentroidPoint(_frac(x["x_c"]), _frac(x["y_c"])) for x in c["centroids"]),
                tuple(pairs),
                tuple(tuple(index[name] for name in tier) for tier in c["ranking"]),
            )
            comps.append(ComparisonRecord(c["stage"], c["stage_name"], names, result))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed report document: {exc!r}") from None
    return AssessmentReport(mode, prec, tuple(groups), cents, table, tuple(comps))


def load_report(source: bytes | str) -> AssessmentReport:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    return report_from_dict(doc)


# -- text renderings ------------------------------------------------------


def _md_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    out = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    out += ["| " + " | ".join(r) + " |" for r in rows]
    return out


def _render_markdown(report: AssessmentReport) -> str:
    prec = report.precision
    fmt = lambda v: format_decimal(v, prec)  # noqa: E731
    lines = [
        "# Assessment report",
        "",
        f"rounding mode: {report.rounding_mode.value}, precision: {prec}",
        "",
        "## Groups",
        "",
    ]
    if not report.groups:
        lines += ["(none)", ""]
    for g in report.groups:
        lines += [f"### {g.name}", ""]
        header = ["stage"] + [f"m({lab})" for lab in LABELS] + [f"y({lab})" for lab in LABELS]
        rows = [
            [name] + [fmt(v) for v in g.stage_sets[i]] + [fmt(v) for v in g.distributions[i]]
            for i, name in enumerate(g.stage_names)
        ]
        lines += _md_table(header, rows) + [""]
        if g.counts is not None:
            rows = [[name, str(c.n)] + [str(x) for x in c.counts] for name, c in zip(g.stage_names, g.counts)]
            lines += _md_table(["stage", "n"] + [f"n({lab})" for lab in LABELS], rows) + [""]

    lines += ["## Centroids", ""]
    if report.centroids:
        stage_name = {(g.name, i): n for g in report.groups for i, n in enumerate(g.stage_names)}
        rows = [
            [c.group, stage_name.get((c.group, c.stage), str(c.stage + 1)), fmt(c.point.x), fmt(c.point.y)]
            for c in report.centroids
        ]
        lines += _md_table(["group", "stage", "x_c", "y_c"], rows) + [""]
    else:
        lines += ["(none)", ""]

    lines += ["## Profiles", ""]
    if report.profiles is not None and report.profiles.rows:
        rows = [[" ".join(lab.symbol for lab in p)] + [fmt(v) for v in vals] for p, vals in report.profiles.rows]
        lines += _md_table(["profile", *report.profiles.columns], rows) + [""]
    else:
        lines += ["(none)", ""]

    lines += ["## Comparisons", ""]
    if not report.comparisons:
        lines += ["(none)", ""]
    for rec in report.comparisons:
        res = rec.result
        lines += [f"### Stage {rec.stage + 1}: {rec.stage_name}", ""]
        rows = [[name, fmt(c.x), fmt(c.y)] for name, c in zip(rec.groups, res.centroids)]
        lines += _md_table(["group", "x_c", "y_c"], rows) + [""]
        rows = []
        for i, j, cmp in res.pairs:
            rows.append([rec.groups[i], rec.groups[j], fmt(cmp.x_c[0]), fmt(cmp.x_c[1]), cmp.verdict.value, cmp.policy.value])
        lines += _md_table(["first", "second", "x_c first", "x_c second", "verdict", "tie-break"], rows) + [""]
        ranking = " > ".join(" = ".join(rec.groups[i] for i in tier) for tier in res.tiers)
        lines += [f"ranking: {ranking}", ""]
    return "\n".join(lines)


def _render_csv(report: AssessmentReport) -> str:
    prec = report.precision
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["section", "group", "stage", "item", "value"])
    for g in report.groups:
        for i, name in enumerate(g.stage_names):
            for lab, m, y in zip(LABELS, g.stage_sets[i], g.distributions[i]):
                w.writerow(["membership", g.name, name, lab.symbol, format_decimal(m, prec)])
                w.writerow(["normalized", g.name, name, lab.symbol, format_decimal(y, prec)])
    stage_name = {(g.name, i): n for g in report.groups for i, n in enumerate(g.stage_names)}
    for c in report.centroids:
        name = stage_name.get((c.group, c.stage), str(c.stage + 1))
        w.writerow(["centroid", c.group, name, "x_c", format_decimal(c.point.x, prec)])
        w.writerow(["centroid", c.group, name, "y_c", format_decimal(c.point.y, prec)])
    if report.profiles is not None:
        for p, vals in report.profiles.rows:
            for col, v in zip(report.profiles.columns, vals):
                w.writerow(["profile", "", profile_key(p), col, format_decimal(v, prec)])
    for rec in report.comparisons:
        for i, j, cmp in rec.result.pairs:
            w.writerow(["comparison", f"{rec.groups[i]}|{rec.groups[j]}", rec.stage_name, "verdict", cmp.verdict.value])
    w.writerow(["meta", "", "", "rounding_mode", report.rounding_mode.value])
    return out.getvalue()


def render_report(report: AssessmentReport, format: str = "markdown") -> bytes:
    if format == "json":
        return (json.dumps(report_to_dict(report), indent=2) + "\n").encode()
    if format == "markdown":
        return _render_markdown(report).encode()
    if format == "csv":
        return _render_csv(report).encode()
    raise ValueError(f"unknown report format {format!r}")


# -- student ranking ------------------------------------------------------


_SYMBOL = {Ordering.GREATER: ">", Ordering.LESS: "<", Ordering.EQUAL: "=", Ordering.INCOMPARABLE: "||"}


def render_ranking(rank: DominanceReport, format: str = "markdown") -> bytes:
    """Comparability matrix, dominance pairs and maximal students."""
    pairs = []
    for i, a in enumerate(rank.names):
        for j in range(i + 1, len(rank.names)):
            pairs.append((a, rank.names[j], rank.matrix[i][j]))
    if format == "json":
        doc = {
            "students": [{"student_id": n, "profile": [lab.symbol for lab in p]} for n, p in zip(rank.names, rank.profiles)],
            "matrix": [[o.value for o in row] for row in rank.matrix],
            "pairs": [{"first": a, "second": b, "relation": o.value} for a, b, o in pairs],
            "maximal": list(rank.maximal),
        }
        return (json.dumps(doc, indent=2) + "\n").encode()
    if format == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["student_id", *rank.names])
        for name, row in zip(rank.names, rank.matrix):
            w.writerow([name, *(o.value for o in row)])
        return out.getvalue().encode()
    if format != "markdown":
        raise ValueError(f"unknown ranking format {format!r}")
    lines = ["# Student ranking", "", "## Profiles", ""]
    lines += _md_table(["student", "profile"], [[n, " ".join(lab.symbol for lab in p)] for n, p in zip(rank.names, rank.profiles)])
    lines += ["", "## Comparability matrix", ""]
    lines += _md_table(["", *rank.names], [[n, *(_SYMBOL[o] for o in row)] for n, row in zip(rank.names, rank.matrix)])
    lines += ["", "## Pairs", ""]
    lines += [f"- {a} {_SYMBOL[o]} {b} ({o.value})" for a, b, o in pairs] or ["(none)"]
    lines += ["", "## Maximal students", "", ", ".join(rank.maximal), ""]
    return "\n".join(lines).encode()
