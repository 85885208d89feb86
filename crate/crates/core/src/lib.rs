//! Ranking of stochastic algorithms from mean and standard-deviation
//! performance matrices.
//!
//! The main entry point is [`atopsis_rank`], a two-stage TOPSIS that scores
//! each algorithm on its mean results and on its dispersion, then blends the
//! two with a weight pair. [`hellinger_topsis_rank`] is a distribution-based
//! alternative, and [`stats`] holds Friedman and Wilcoxon tests.

pub mod atopsis;
pub mod error;
pub mod fixtures;
pub mod hellinger;
pub mod matrix;
pub mod normalize;
pub mod ranking;
pub mod report;
pub mod stats;
pub mod topsis;

pub use atopsis::{
    atopsis_detailed, atopsis_rank, default_grid, global_stage, grid_from_range, stage_one,
    weight_sweep, AtopsisOptions, AtopsisOutcome, ClosenessMatrix, SweepReport,
};
pub use error::{Axis, Error, Result};
pub use hellinger::{
    hellinger_distance, hellinger_squared, hellinger_topsis_rank, GaussianSummary,
    HellingerOptions, DEFAULT_SIGMA_FLOOR,
};
pub use matrix::{load_matrix_pair, DecisionMatrixPair, LabeledMatrix};
pub use normalize::{
    apply_weights, column_divisors, normalize, CriterionDirection, CriterionWeights,
    NormalizationScheme, WeightPair,
};
pub use ranking::{GlobalRanking, DEFAULT_TIE_EPSILON};
pub use report::{compare_report, rank_report, sweep_report, Method, RankConfig, RankReport};
pub use stats::{
    friedman_test, pairwise_wilcoxon, stats_report, wilcoxon_signed_rank, FriedmanResult,
    StatsReport, WilcoxonMethod, WilcoxonResult,
};
pub use topsis::{closeness, ideal_solutions, separation_distances, topsis_rank, ClosenessVector};
