"""Rank N systems benchmarked over multiple tasks when some evaluations are
missing: impute absent pairwise comparisons over uniformly random compatible
completions of each partial ranking, aggregate with Borda, and attach
Hoeffding confidence intervals to every pairwise verdict."""

from .model import (
    PartialRanking,
    Ranking,
    ScoreTable,
    ScoreTensor,
    ValidationError,
    partial_from_scores,
    ranking_from_ordering,
    relabel_systems,
)
from .combinat import (
    ImputationTable,
    build_imputation_table,
    compatible_count,
    enumerate_compatible,
    sample_compatible,
    shuffle_count,
    unobserved_win_probability,
    variation_count,
    win_probability_sum,
)
from .pairwise import (
    AccumulatedMatrix,
    PairwiseMatrix,
    accumulate,
    matrix_from_partial,
    matrix_from_partial_oracle,
)
from .aggregate import (
    METHODS,
    AggregateResult,
    borda_from_matrix,
    borda_on_rankings,
    rank_by_mean_instance,
    rank_by_mean_task,
    rank_dataset,
    rank_one_level_instance,
    rank_one_level_task,
    rank_two_level,
)
from .confidence import (
    ConfidenceReport,
    confidence_report,
    hoeffding_halfwidth,
    significance_margins,
)
from .synth import (
    GumbelConfig,
    corrupt_missing_instance,
    corrupt_missing_task,
    generate_gumbel,
    scale_task,
)
from .experiments import (
    agreement_analysis,
    derive_seed,
    kendall_tau,
    robustness_curve,
    summarize_robustness,
    topk_same,
)

__version__ = "0.1.0"
