//! Hellinger-TOPSIS comparator.
//!
//! Each cell is read as a Gaussian `N(mu, sigma^2)`. Separation from the
//! ideals is measured with the Hellinger distance between Gaussians instead
//! of the Euclidean distance between weighted ratings. The distance is
//! undefined for `sigma = 0`, so zero deviations are replaced by a small
//! floor first.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DecisionMatrixPair;
use crate::normalize::{column_divisors, CriterionDirection, NormalizationScheme};
use crate::ranking::{GlobalRanking, DEFAULT_TIE_EPSILON};
use crate::topsis::DEGENERATE_CLOSENESS;

/// Replacement for zero standard deviations, in normalized units.
pub const DEFAULT_SIGMA_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSummary {
    mu: f64,
    sigma: f64,
}

impl GaussianSummary {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::BadValue(format!("mean {mu} is not finite")));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::NonPositiveSigma(sigma));
        }
        Ok(Self { mu, sigma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Squared Hellinger distance in closed form:
/// `1 - sqrt(2 s_a s_b / (s_a^2 + s_b^2)) * exp(-(m_a - m_b)^2 / (4 (s_a^2 + s_b^2)))`.
pub fn hellinger_squared(a: GaussianSummary, b: GaussianSummary) -> f64 {
    let var_sum = a.sigma * a.sigma + b.sigma * b.sigma;
    let diff = a.mu - b.mu;
    let bc = (2.0 * a.sigma * b.sigma / var_sum).sqrt() * (-diff * diff / (4.0 * var_sum)).exp();
    (1.0 - bc).clamp(0.0, 1.0)
}

pub fn hellinger_distance(a: GaussianSummary, b: GaussianSummary) -> f64 {
    hellinger_squared(a, b).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HellingerOptions {
    pub scheme: NormalizationScheme,
    pub direction: CriterionDirection,
    pub sigma_floor: f64,
    pub tie_epsilon: f64,
}

impl Default for HellingerOptions {
    fn default() -> Self {
        Self {
            scheme: NormalizationScheme::default(),
            direction: CriterionDirection::Benefit,
            sigma_floor: DEFAULT_SIGMA_FLOOR,
            tie_epsilon: DEFAULT_TIE_EPSILON,
        }
    }
}

impl HellingerOptions {
    pub fn new(scheme: NormalizationScheme, direction: CriterionDirection) -> Self {
        Self {
            scheme,
            direction,
            ..Self::default()
        }
    }
}

/// Ranks alternatives by Hellinger-TOPSIS closeness.
///
/// Each mean column is normalized per `scheme`, and the standard deviations
/// of that column are divided by the same divisor so both stay on one scale.
/// Zero deviations are then raised to `sigma_floor`. Per criterion, the
/// positive ideal pairs the best mean with the smallest deviation, and the
/// negative ideal pairs the worst mean with the largest deviation.
/// Separation is `sqrt(sum_j H^2)`.
pub fn hellinger_topsis_rank(
    pair: &DecisionMatrixPair,
    options: &HellingerOptions,
) -> Result<GlobalRanking> {
    let floor = options.sigma_floor;
    if !(floor.is_finite() && floor > 0.0) {
        return Err(Error::NonPositiveSigmaFloor(floor));
    }
    let (mu, sigma) = (pair.mu(), pair.sigma());
    let divisors = column_divisors(mu, options.scheme);
    let scale = |j: usize| if divisors[j] > 0.0 { divisors[j] } else { 1.0 };

    let cells: Vec<Vec<GaussianSummary>> = (0..mu.nrows())
        .map(|i| {
            (0..mu.ncols())
                .map(|j| {
                    let s = sigma.get(i, j) / scale(j);
                    GaussianSummary::new(mu.get(i, j) / scale(j), if s > 0.0 { s } else { floor })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let (positive, negative): (Vec<_>, Vec<_>) = (0..mu.ncols())
        .map(|j| {
            let col = cells.iter().map(|row| row[j]);
            let (mu_lo, mu_hi, s_lo, s_hi) = col.fold(
                (
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                ),
                |(a, b, c, d), g| (a.min(g.mu), b.max(g.mu), c.min(g.sigma), d.max(g.sigma)),
            );
            let (best, worst) = match options.direction {
                CriterionDirection::Benefit => (mu_hi, mu_lo),
                CriterionDirection::Cost => (mu_lo, mu_hi),
            };
            (
                GaussianSummary {
                    mu: best,
                    sigma: s_lo,
                },
                GaussianSummary {
                    mu: worst,
                    sigma: s_hi,
                },
            )
        })
        .unzip();

    let xi = cells
        .iter()
        .map(|row| {
            let sep = |ideal: &[GaussianSummary]| {
                row.iter()
                    .zip(ideal)
                    .map(|(&cell, &target)| hellinger_squared(cell, target))
                    .sum::<f64>()
                    .sqrt()
            };
            let (d_plus, d_minus) = (sep(&positive), sep(&negative));
            if d_plus + d_minus > 0.0 {
                d_minus / (d_plus + d_minus)
            } else {
                DEGENERATE_CLOSENESS
            }
        })
        .collect();
    GlobalRanking::from_scores(pair.row_labels().to_vec(), xi, options.tie_epsilon)
}
