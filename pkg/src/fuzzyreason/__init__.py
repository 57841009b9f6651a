"""Fuzzy assessment of the imagination, visualization and idea-generation stages of reasoning.

Stage performance is graded into fuzzy sets over five ordered labels, profiles
get membership, possibility and probability, and groups are scored by the
centre of gravity of their membership bar graphs.
"""

from .centroid import (
    CentroidPoint,
    PerformanceComparison,
    ReferencePoints,
    StageComparison,
    TieBreak,
    Verdict,
    centroid_closed_form,
    centroid_of_normalized,
    centroid_quadrature,
    compare_groups,
    rank_centroids,
    reference_points,
    stagewise_group_comparison,
)
from .cohort_io import (
    CohortDataset,
    ModeError,
    ParseError,
    StudentRecord,
    dump_cohort,
    parse_cohort,
    pregraded,
    tabulate_counts,
)
from .fuzzy_core import (
    LABELS,
    CohortStageCounts,
    DomainError,
    EmptyFuzzySetError,
    FuzzyError,
    NormalizedDistribution,
    PerformanceLabel,
    StageFuzzySet,
    build_stage_set,
    classify_numeric_score,
    membership_grade,
    normalize_distribution,
    parse_label,
)
from .profiles import (
    CombinedRelation,
    Ordering,
    ProfileRelation,
    build_relation,
    combine_relations,
    compare_profiles,
    dominance_report,
    enumerate_profiles,
    is_well_ordered,
    make_profile,
    relation_membership,
)
from .report import (
    AssessmentReport,
    RoundingMode,
    build_report,
    format_decimal,
    load_report,
    render_profile_table,
    render_report,
)
from .svg import render_svg

__version__ = "0.1.0"
