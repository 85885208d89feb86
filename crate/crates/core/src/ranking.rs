use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Alternatives whose scores differ by at most this much share a rank.
pub const DEFAULT_TIE_EPSILON: f64 = 1e-9;

/// Final ordering of alternatives by a closeness score, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalRanking {
    /// Alternatives in input row order.
    pub labels: Vec<String>,
    /// Score per alternative, aligned with `labels`.
    pub xi_global: Vec<f64>,
    /// Labels sorted by descending score; equal scores keep input order.
    pub order: Vec<String>,
    /// Consecutive runs of `order` whose scores lie within the tie epsilon.
    pub tie_groups: Vec<Vec<String>>,
}

impl GlobalRanking {
    pub fn from_scores(labels: Vec<String>, scores: Vec<f64>, tie_epsilon: f64) -> Result<Self> {
        if !tie_epsilon.is_finite() || tie_epsilon < 0.0 {
            return Err(Error::InvalidTieEpsilon(tie_epsilon));
        }
        if labels.len() != scores.len() {
            return Err(Error::LengthMismatch {
                expected: labels.len(),
                actual: scores.len(),
            });
        }
        if let Some(s) = scores.iter().find(|s| !s.is_finite()) {
            return Err(Error::BadValue(format!("non-finite score {s}")));
        }

        let mut idx: Vec<usize> = (0..labels.len()).collect();
        // Stable sort keeps input order among exact duplicates.
        idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

        let mut tie_groups: Vec<Vec<String>> = Vec::new();
        let mut group_top = f64::NAN;
        for &i in &idx {
            match tie_groups.last_mut() {
                Some(group) if group_top - scores[i] <= tie_epsilon => {
                    group.push(labels[i].clone())
                }
                _ => {
                    group_top = scores[i];
                    tie_groups.push(vec![labels[i].clone()]);
                }
            }
        }
        let order = idx.iter().map(|&i| labels[i].clone()).collect();
        Ok(Self {
            labels,
            xi_global: scores,
            order,
            tie_groups,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Zero-based position of `label` in `order`.
    pub fn position(&self, label: &str) -> Option<usize> {
        self.order.iter().position(|l| l == label)
    }

    pub fn score(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.xi_global[i])
    }

    /// Whether `a` and `b` fall in the same tie group.
    pub fn tied(&self, a: &str, b: &str) -> bool {
        self.tie_groups
            .iter()
            .any(|g| g.iter().any(|l| l == a) && g.iter().any(|l| l == b))
    }

    /// `"A > B > C"`, the notation used in ranking tables.
    pub fn order_string(&self) -> String {
        self.order.join(" > ")
    }
}
