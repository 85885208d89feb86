//! Column normalization and criterion weighting shared by every ranking method.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::LabeledMatrix;

/// Tolerance for "weights sum to one".
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionDirection {
    /// Higher is better (accuracy).
    #[default]
    Benefit,
    /// Lower is better (error rate, dispersion).
    Cost,
}

impl CriterionDirection {
    pub fn flipped(self) -> Self {
        match self {
            Self::Benefit => Self::Cost,
            Self::Cost => Self::Benefit,
        }
    }
}

impl fmt::Display for CriterionDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Benefit => "benefit",
            Self::Cost => "cost",
        })
    }
}

impl FromStr for CriterionDirection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "benefit" => Ok(Self::Benefit),
            "cost" => Ok(Self::Cost),
            other => Err(format!(
                "unknown direction {other:?} (expected benefit or cost)"
            )),
        }
    }
}

/// How raw ratings are made dimensionless, column by column.
///
/// The default is [`NormalizationScheme::Max`]: of the two schemes it is the
/// one that reproduces the reference case-study rank at weights (0.7, 0.3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalizationScheme {
    /// `r_ij = x_ij / sqrt(sum_i x_ij^2)`
    Vector,
    /// `r_ij = x_ij / max_i x_ij`
    #[default]
    Max,
}

impl fmt::Display for NormalizationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Vector => "vector",
            Self::Max => "max",
        })
    }
}

impl FromStr for NormalizationScheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "vector" => Ok(Self::Vector),
            "max" => Ok(Self::Max),
            other => Err(format!(
                "unknown normalization {other:?} (expected vector or max)"
            )),
        }
    }
}

/// Per-criterion weights, nonnegative and summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CriterionWeights(Vec<f64>);

impl CriterionWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::WeightInvalid("no criterion weights given".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::WeightInvalid(format!(
                "criterion weight {w} must be finite and nonnegative"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::WeightInvalid(format!(
                "criterion weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self(weights))
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform weights need at least one criterion");
        Self(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for CriterionWeights {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CriterionWeights> for Vec<f64> {
    fn from(w: CriterionWeights) -> Self {
        w.0
    }
}

/// Relative importance of the mean closeness vs the standard-deviation
/// closeness in the global stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightPair {
    w_mu: f64,
    w_sigma: f64,
}

impl WeightPair {
    pub fn new(w_mu: f64, w_sigma: f64) -> Result<Self> {
        for (name, w) in [("w_mu", w_mu), ("w_sigma", w_sigma)] {
            if !w.is_finite() || !(0.0..=1.0).contains(&w) {
                return Err(Error::WeightInvalid(format!(
                    "{name} = {w} is outside [0, 1]"
                )));
            }
        }
        if (w_mu + w_sigma - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::WeightInvalid(format!(
                "w_mu + w_sigma = {} but must equal 1",
                w_mu + w_sigma
            )));
        }
        Ok(Self { w_mu, w_sigma })
    }

    /// `w_sigma` derived as `1 - w_mu`.
    pub fn from_mean_weight(w_mu: f64) -> Result<Self> {
        Self::new(w_mu, 1.0 - w_mu)
    }

    pub fn w_mu(&self) -> f64 {
        self.w_mu
    }

    pub fn w_sigma(&self) -> f64 {
        self.w_sigma
    }
}

/// Per-column divisor used by `scheme`. A zero divisor marks an all-zero
/// column, which is left untouched.
pub fn column_divisors(matrix: &LabeledMatrix, scheme: NormalizationScheme) -> Vec<f64> {
    (0..matrix.ncols())
        .map(|j| match scheme {
            NormalizationScheme::Vector => matrix.column(j).map(|x| x * x).sum::<f64>().sqrt(),
            NormalizationScheme::Max => matrix.column(j).fold(0.0, f64::max),
        })
        .collect()
}

pub fn normalize(matrix: &LabeledMatrix, scheme: NormalizationScheme) -> LabeledMatrix {
    let divisors = column_divisors(matrix, scheme);
    let n = matrix.ncols();
    let values = matrix
        .rows()
        .flat_map(|row| row.iter().copied().enumerate())
        .map(|(j, x)| {
            if divisors[j] > 0.0 {
                x / divisors[j]
            } else {
                0.0
            }
        })
        .collect::<Vec<_>>();
    debug_assert_eq!(values.len(), matrix.nrows() * n);
    matrix.with_values(values)
}

/// `p_ij = w_j * r_ij`.
pub fn apply_weights(
    normalized: &LabeledMatrix,
    weights: &CriterionWeights,
) -> Result<LabeledMatrix> {
    if weights.len() != normalized.ncols() {
        return Err(Error::LengthMismatch {
            expected: normalized.ncols(),
            actual: weights.len(),
        });
    }
    let w = weights.as_slice();
    let values = normalized
        .rows()
        .flat_map(|row| row.iter().zip(w).map(|(r, w)| r * w))
        .collect();
    Ok(normalized.with_values(values))
}
