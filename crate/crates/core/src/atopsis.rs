//! Two-stage A-TOPSIS over a mean matrix and a standard-deviation matrix.
//!
//! Stage 1 runs standard TOPSIS on each matrix separately: the means with the
//! caller's direction, the standard deviations always as a cost (less
//! dispersion is better). That yields two closeness vectors. Stage 2 stacks
//! them into an `m x 2` matrix, scales the columns by `(w_mu, w_sigma)`
//! without re-normalizing, and runs TOPSIS again with both columns as
//! benefits. The resulting global closeness orders the alternatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DecisionMatrixPair, LabeledMatrix};
use crate::normalize::{
    apply_weights, CriterionDirection, CriterionWeights, NormalizationScheme, WeightPair,
};
use crate::ranking::{GlobalRanking, DEFAULT_TIE_EPSILON};
use crate::topsis::{
    closeness, ideal_solutions, separation_distances, topsis_rank, ClosenessVector,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtopsisOptions {
    pub scheme: NormalizationScheme,
    pub mean_direction: CriterionDirection,
    pub tie_epsilon: f64,
    /// Stage-1 benchmark weights; uniform when `None`.
    pub inner_weights: Option<CriterionWeights>,
}

impl Default for AtopsisOptions {
    fn default() -> Self {
        Self {
            scheme: NormalizationScheme::default(),
            mean_direction: CriterionDirection::Benefit,
            tie_epsilon: DEFAULT_TIE_EPSILON,
            inner_weights: None,
        }
    }
}

impl AtopsisOptions {
    pub fn new(scheme: NormalizationScheme, mean_direction: CriterionDirection) -> Self {
        Self {
            scheme,
            mean_direction,
            ..Self::default()
        }
    }
}

/// Stage-1 output: closeness of every alternative on the means and on the
/// standard deviations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosenessMatrix {
    labels: Vec<String>,
    xi_mu: ClosenessVector,
    xi_sigma: ClosenessVector,
}

impl ClosenessMatrix {
    pub fn new(
        labels: Vec<String>,
        xi_mu: ClosenessVector,
        xi_sigma: ClosenessVector,
    ) -> Result<Self> {
        for len in [xi_mu.len(), xi_sigma.len()] {
            if len != labels.len() {
                return Err(Error::LengthMismatch {
                    expected: labels.len(),
                    actual: len,
                });
            }
        }
        if labels.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        Ok(Self {
            labels,
            xi_mu,
            xi_sigma,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn xi_mu(&self) -> &ClosenessVector {
        &self.xi_mu
    }

    pub fn xi_sigma(&self) -> &ClosenessVector {
        &self.xi_sigma
    }

    fn as_matrix(&self) -> Result<LabeledMatrix> {
        LabeledMatrix::new(
            self.labels.clone(),
            vec!["xi_mu".into(), "xi_sigma".into()],
            self.xi_mu
                .as_slice()
                .iter()
                .zip(self.xi_sigma.as_slice())
                .map(|(&a, &b)| vec![a, b])
                .collect(),
        )
    }
}

pub fn stage_one(pair: &DecisionMatrixPair, options: &AtopsisOptions) -> Result<ClosenessMatrix> {
    let n = pair.mu().ncols();
    let weights = match &options.inner_weights {
        Some(w) => w.clone(),
        None => CriterionWeights::uniform(n),
    };
    let xi_mu = topsis_rank(
        pair.mu(),
        &weights,
        &vec![options.mean_direction; n],
        options.scheme,
    )?;
    let xi_sigma = topsis_rank(
        pair.sigma(),
        &weights,
        &vec![CriterionDirection::Cost; n],
        options.scheme,
    )?;
    ClosenessMatrix::new(pair.row_labels().to_vec(), xi_mu, xi_sigma)
}

/// Global closeness from the stage-1 matrix.
pub fn global_stage(
    closeness_matrix: &ClosenessMatrix,
    weights: WeightPair,
    tie_epsilon: f64,
) -> Result<GlobalRanking> {
    let c = closeness_matrix.as_matrix()?;
    let w = CriterionWeights::new(vec![weights.w_mu(), weights.w_sigma()])?;
    let weighted = apply_weights(&c, &w)?;
    let ideals = ideal_solutions(&weighted, &[CriterionDirection::Benefit; 2])?;
    let xi = closeness(&separation_distances(&weighted, &ideals)?);
    GlobalRanking::from_scores(closeness_matrix.labels.clone(), xi.into_vec(), tie_epsilon)
}

/// Stage-1 closeness together with the global ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtopsisOutcome {
    pub stage_one: ClosenessMatrix,
    pub ranking: GlobalRanking,
}

pub fn atopsis_detailed(
    pair: &DecisionMatrixPair,
    weights: WeightPair,
    options: &AtopsisOptions,
) -> Result<AtopsisOutcome> {
    let stage_one = stage_one(pair, options)?;
    let ranking = global_stage(&stage_one, weights, options.tie_epsilon)?;
    Ok(AtopsisOutcome { stage_one, ranking })
}

pub fn atopsis_rank(
    pair: &DecisionMatrixPair,
    weights: WeightPair,
    options: &AtopsisOptions,
) -> Result<GlobalRanking> {
    atopsis_detailed(pair, weights, options).map(|o| o.ranking)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub grid: Vec<WeightPair>,
    pub rankings: Vec<GlobalRanking>,
    /// First grid index from which the order never changes again. `None`
    /// when the last two grid points already disagree, or for a one-point
    /// grid, where no stability can be observed.
    pub stability_point: Option<usize>,
}

impl SweepReport {
    pub fn stability_weights(&self) -> Option<WeightPair> {
        self.stability_point.map(|i| self.grid[i])
    }
}

/// `w_mu` = 0.5, 0.6, ..., 1.0.
pub fn default_grid() -> Vec<WeightPair> {
    grid_from_range(0.5, 1.0, 0.1).expect("default grid is valid")
}

/// Grid over `w_mu` from `start` to `stop` inclusive, with `w_sigma = 1 - w_mu`.
pub fn grid_from_range(start: f64, stop: f64, step: f64) -> Result<Vec<WeightPair>> {
    if !(start.is_finite()
        && stop.is_finite()
        && (0.0..=1.0).contains(&start)
        && (0.0..=1.0).contains(&stop))
    {
        return Err(Error::BadGrid(format!(
            "start {start} and stop {stop} must lie in [0, 1]"
        )));
    }
    if start > stop {
        return Err(Error::BadGrid(format!("start {start} exceeds stop {stop}")));
    }
    if start == stop {
        return Ok(vec![WeightPair::from_mean_weight(start)?]);
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::BadGrid(format!("step {step} must be positive")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|i| {
            // Snap to 12 decimals so 0.5 + 3 * 0.1 lands on 0.8.
            let w = ((start + i as f64 * step) * 1e12).round() / 1e12;
            WeightPair::from_mean_weight(w.min(1.0))
        })
        .collect()
}

fn validate_grid(grid: &[WeightPair]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::BadGrid("grid is empty".into()));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1].w_mu() <= w[0].w_mu()) {
        return Err(Error::BadGrid(format!(
            "w_mu must increase strictly along the grid ({} then {})",
            w[0].w_mu(),
            w[1].w_mu()
        )));
    }
    Ok(())
}

fn stability_point(rankings: &[GlobalRanking]) -> Option<usize> {
    let last = rankings.last()?;
    let start = rankings
        .iter()
        .rposition(|r| r.order != last.order)
        .map_or(0, |i| i + 1);
    (start + 1 < rankings.len()).then_some(start)
}

/// Ranks `pair` at every grid point. Stage 1 does not depend on the weights,
/// so it runs once.
pub fn weight_sweep(
    pair: &DecisionMatrixPair,
    grid: &[WeightPair],
    options: &AtopsisOptions,
) -> Result<SweepReport> {
    validate_grid(grid)?;
    let stage = stage_one(pair, options)?;
    let rankings = grid
        .iter()
        .map(|&w| global_stage(&stage, w, options.tie_epsilon))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        grid: grid.to_vec(),
        stability_point: stability_point(&rankings),
        rankings,
    })
}
