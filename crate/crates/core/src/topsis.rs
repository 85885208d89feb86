//! Standard single-matrix TOPSIS: ideal solutions, Euclidean separations and
//! relative closeness. Both A-TOPSIS stages are built from these pieces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::LabeledMatrix;
use crate::normalize::{
    apply_weights, normalize, CriterionDirection, CriterionWeights, NormalizationScheme,
};

/// Closeness assigned when an alternative is equidistant (at distance zero)
/// from both ideals, i.e. every alternative is identical after weighting.
pub const DEGENERATE_CLOSENESS: f64 = 0.5;

/// Best (`positive`) and worst (`negative`) attainable value per criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealPair {
    pub positive: Vec<f64>,
    pub negative: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationPair {
    pub d_plus: Vec<f64>,
    pub d_minus: Vec<f64>,
}

/// Relative closeness to the positive ideal, one entry per alternative, in
/// the row order of the ranked matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClosenessVector(Vec<f64>);

impl ClosenessVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::BadValue(format!("closeness {v} outside [0, 1]")));
        }
        Ok(Self(values))
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

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

pub fn ideal_solutions(
    weighted: &LabeledMatrix,
    directions: &[CriterionDirection],
) -> Result<IdealPair> {
    if directions.len() != weighted.ncols() {
        return Err(Error::LengthMismatch {
            expected: weighted.ncols(),
            actual: directions.len(),
        });
    }
    let (positive, negative) = directions
        .iter()
        .enumerate()
        .map(|(j, dir)| {
            let (lo, hi) = weighted
                .column(j)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                    (lo.min(x), hi.max(x))
                });
            match dir {
                CriterionDirection::Benefit => (hi, lo),
                CriterionDirection::Cost => (lo, hi),
            }
        })
        .unzip();
    Ok(IdealPair { positive, negative })
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn separation_distances(
    weighted: &LabeledMatrix,
    ideals: &IdealPair,
) -> Result<SeparationPair> {
    let n = weighted.ncols();
    for len in [ideals.positive.len(), ideals.negative.len()] {
        if len != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: len,
            });
        }
    }
    let (d_plus, d_minus) = weighted
        .rows()
        .map(|row| {
            (
                euclidean(row, &ideals.positive),
                euclidean(row, &ideals.negative),
            )
        })
        .unzip();
    Ok(SeparationPair { d_plus, d_minus })
}

/// `xi_i = d_i^- / (d_i^+ + d_i^-)`, or [`DEGENERATE_CLOSENESS`] when both
/// distances vanish.
pub fn closeness(sep: &SeparationPair) -> ClosenessVector {
    let xi = sep
        .d_plus
        .iter()
        .zip(&sep.d_minus)
        .map(|(&dp, &dm)| {
            let total = dp + dm;
            if total > 0.0 {
                (dm / total).clamp(0.0, 1.0)
            } else {
                DEGENERATE_CLOSENESS
            }
        })
        .collect();
    ClosenessVector(xi)
}

/// normalize -> weight -> ideals -> separations -> closeness.
pub fn topsis_rank(
    matrix: &LabeledMatrix,
    weights: &CriterionWeights,
    directions: &[CriterionDirection],
    scheme: NormalizationScheme,
) -> Result<ClosenessVector> {
    let weighted = apply_weights(&normalize(matrix, scheme), weights)?;
    let ideals = ideal_solutions(&weighted, directions)?;
    let sep = separation_distances(&weighted, &ideals)?;
    Ok(closeness(&sep))
}
