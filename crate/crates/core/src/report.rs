//! Serializable views of ranking results shared by the command-line tool and
//! the HTTP service, so both emit exactly the same numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::atopsis::{atopsis_detailed, weight_sweep, AtopsisOptions};
use crate::error::Result;
use crate::hellinger::{hellinger_topsis_rank, HellingerOptions, DEFAULT_SIGMA_FLOOR};
use crate::matrix::DecisionMatrixPair;
use crate::normalize::{CriterionDirection, NormalizationScheme, WeightPair};
use crate::ranking::{GlobalRanking, DEFAULT_TIE_EPSILON};

/// Default mean weight for single rankings.
pub const DEFAULT_W_MU: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Atopsis,
    Hellinger,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Atopsis => "atopsis",
            Self::Hellinger => "hellinger",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "atopsis" => Ok(Self::Atopsis),
            "hellinger" => Ok(Self::Hellinger),
            other => Err(format!(
                "unknown method {other:?} (expected atopsis or hellinger)"
            )),
        }
    }
}

/// Everything besides the data that determines a ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankConfig {
    pub method: Method,
    pub w_mu: f64,
    pub w_sigma: f64,
    pub direction: CriterionDirection,
    pub normalization: NormalizationScheme,
    pub sigma_floor: f64,
    pub tie_epsilon: f64,
}

impl Default for RankConfig {
    fn default() -> Self {
        Self {
            method: Method::Atopsis,
            w_mu: DEFAULT_W_MU,
            w_sigma: 1.0 - DEFAULT_W_MU,
            direction: CriterionDirection::Benefit,
            normalization: NormalizationScheme::default(),
            sigma_floor: DEFAULT_SIGMA_FLOOR,
            tie_epsilon: DEFAULT_TIE_EPSILON,
        }
    }
}

impl RankConfig {
    pub fn weights(&self) -> Result<WeightPair> {
        WeightPair::new(self.w_mu, self.w_sigma)
    }

    /// Sets `w_mu` and derives `w_sigma = 1 - w_mu`.
    pub fn with_mean_weight(mut self, w_mu: f64) -> Self {
        self.w_mu = w_mu;
        self.w_sigma = 1.0 - w_mu;
        self
    }

    pub fn atopsis_options(&self) -> AtopsisOptions {
        AtopsisOptions {
            tie_epsilon: self.tie_epsilon,
            ..AtopsisOptions::new(self.normalization, self.direction)
        }
    }

    pub fn hellinger_options(&self) -> HellingerOptions {
        HellingerOptions {
            scheme: self.normalization,
            direction: self.direction,
            sigma_floor: self.sigma_floor,
            tie_epsilon: self.tie_epsilon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageOneView {
    pub xi_mu: BTreeMap<String, f64>,
    pub xi_sigma: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub order: Vec<String>,
    pub xi: BTreeMap<String, f64>,
    pub ties: Vec<Vec<String>>,
    pub config: RankConfig,
    /// Per-matrix closeness; absent for the Hellinger method.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage1: Option<StageOneView>,
}

fn score_map(labels: &[String], scores: &[f64]) -> BTreeMap<String, f64> {
    labels.iter().cloned().zip(scores.iter().copied()).collect()
}

impl RankReport {
    fn from_ranking(
        ranking: GlobalRanking,
        config: RankConfig,
        stage1: Option<StageOneView>,
    ) -> Self {
        Self {
            xi: score_map(&ranking.labels, &ranking.xi_global),
            order: ranking.order,
            ties: ranking.tie_groups,
            config,
            stage1,
        }
    }
}

pub fn rank_report(pair: &DecisionMatrixPair, config: &RankConfig) -> Result<RankReport> {
    let weights = config.weights()?;
    match config.method {
        Method::Atopsis => {
            let outcome = atopsis_detailed(pair, weights, &config.atopsis_options())?;
            let labels = outcome.stage_one.labels();
            let stage1 = StageOneView {
                xi_mu: score_map(labels, outcome.stage_one.xi_mu().as_slice()),
                xi_sigma: score_map(labels, outcome.stage_one.xi_sigma().as_slice()),
            };
            Ok(RankReport::from_ranking(
                outcome.ranking,
                config.clone(),
                Some(stage1),
            ))
        }
        Method::Hellinger => {
            let ranking = hellinger_topsis_rank(pair, &config.hellinger_options())?;
            Ok(RankReport::from_ranking(ranking, config.clone(), None))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub w_mu: f64,
    pub w_sigma: f64,
    pub order: Vec<String>,
    pub xi: BTreeMap<String, f64>,
    pub ties: Vec<Vec<String>>,
}

/// A-TOPSIS over a weight grid. The top-level `order`, `xi` and `ties`
/// describe the ranking at the stability point, or at the last grid point
/// when the order never settles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepView {
    pub order: Vec<String>,
    pub xi: BTreeMap<String, f64>,
    pub ties: Vec<Vec<String>>,
    pub config: RankConfig,
    pub grid: Vec<SweepPoint>,
    pub stability_w_mu: Option<f64>,
}

/// Sweeps always use A-TOPSIS; `config.w_mu` is ignored in favour of the grid.
pub fn sweep_report(
    pair: &DecisionMatrixPair,
    grid: &[WeightPair],
    config: &RankConfig,
) -> Result<SweepView> {
    let sweep = weight_sweep(pair, grid, &config.atopsis_options())?;
    let points: Vec<SweepPoint> = sweep
        .grid
        .iter()
        .zip(&sweep.rankings)
        .map(|(w, r)| SweepPoint {
            w_mu: w.w_mu(),
            w_sigma: w.w_sigma(),
            order: r.order.clone(),
            xi: score_map(&r.labels, &r.xi_global),
            ties: r.tie_groups.clone(),
        })
        .collect();
    let headline = &points[sweep.stability_point.unwrap_or(points.len() - 1)];
    Ok(SweepView {
        order: headline.order.clone(),
        xi: headline.xi.clone(),
        ties: headline.ties.clone(),
        config: RankConfig {
            method: Method::Atopsis,
            w_mu: headline.w_mu,
            w_sigma: headline.w_sigma,
            ..config.clone()
        },
        stability_w_mu: sweep.stability_weights().map(|w| w.w_mu()),
        grid: points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub position: usize,
    pub atopsis: String,
    pub hellinger: String,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareView {
    pub rows: Vec<ComparisonRow>,
    pub atopsis: RankReport,
    pub hellinger: RankReport,
}

impl CompareView {
    pub fn agreement_count(&self) -> usize {
        self.rows.iter().filter(|r| r.agree).count()
    }
}

/// Ranks the same data with both methods; `config.method` is ignored.
pub fn compare_report(pair: &DecisionMatrixPair, config: &RankConfig) -> Result<CompareView> {
    let atopsis = rank_report(
        pair,
        &RankConfig {
            method: Method::Atopsis,
            ..config.clone()
        },
    )?;
    let hellinger = rank_report(
        pair,
        &RankConfig {
            method: Method::Hellinger,
            ..config.clone()
        },
    )?;
    let rows = atopsis
        .order
        .iter()
        .zip(&hellinger.order)
        .enumerate()
        .map(|(i, (a, h))| ComparisonRow {
            position: i + 1,
            atopsis: a.clone(),
            hellinger: h.clone(),
            agree: a == h,
        })
        .collect();
    Ok(CompareView {
        rows,
        atopsis,
        hellinger,
    })
}
