//! Nonparametric tests over the mean matrix: Friedman across all algorithms
//! and pairwise Wilcoxon signed-rank tests, benchmarks acting as blocks.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::matrix::LabeledMatrix;
use crate::normalize::CriterionDirection;

/// Above this many nonzero differences the exact null distribution is
/// replaced by a normal approximation.
pub const EXACT_WILCOXON_LIMIT: usize = 25;

pub const DEFAULT_ALPHA: f64 = 0.05;

const RELATIVE_TIE_TOLERANCE: f64 = 1e-9;

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= RELATIVE_TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Midranks (1-based) of `values` in ascending order. Values within a small
/// relative tolerance of their neighbour count as tied, so rounding noise in
/// differences of decimal inputs does not split ties.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && nearly_equal(values[idx[end]], values[idx[end - 1]]) {
            end += 1;
        }
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &idx[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Number of algorithms.
    pub k: usize,
    /// Number of benchmarks.
    pub n: usize,
    /// Average rank per algorithm (1 = best), in row order.
    pub mean_ranks: Vec<f64>,
}

/// Friedman test with benchmarks as blocks. Ranks within each benchmark use
/// midranks with 1 for the best algorithm; the statistic is
/// `12n / (k(k+1)) * sum_j (R_j - (k+1)/2)^2`, referred to chi-square with
/// `k - 1` degrees of freedom.
pub fn friedman_test(mu: &LabeledMatrix, direction: CriterionDirection) -> Result<FriedmanResult> {
    let (k, n) = (mu.nrows(), mu.ncols());
    if k < 2 {
        return Err(Error::TooFewAlgorithms(k));
    }
    if n < 2 {
        return Err(Error::TooFewBenchmarks(n));
    }
    let mut rank_sums = vec![0.0; k];
    for j in 0..n {
        let keyed: Vec<f64> = mu
            .column(j)
            .map(|x| match direction {
                CriterionDirection::Benefit => -x,
                CriterionDirection::Cost => x,
            })
            .collect();
        for (sum, r) in rank_sums.iter_mut().zip(midranks(&keyed)) {
            *sum += r;
        }
    }
    let mean_ranks: Vec<f64> = rank_sums.iter().map(|s| s / n as f64).collect();
    let centre = (k as f64 + 1.0) / 2.0;
    let statistic = 12.0 * n as f64 / (k as f64 * (k as f64 + 1.0))
        * mean_ranks.iter().map(|r| (r - centre).powi(2)).sum::<f64>();
    let chi = ChiSquared::new((k - 1) as f64).expect("k >= 2 gives positive degrees of freedom");
    Ok(FriedmanResult {
        statistic,
        p_value: chi.sf(statistic).clamp(0.0, 1.0),
        k,
        n,
        mean_ranks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WilcoxonMethod {
    Exact,
    NormalApprox,
    /// Every paired difference was zero.
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// `min(W+, W-)`.
    pub w_statistic: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    /// Two-sided.
    pub p_value: f64,
    /// Pairs left after dropping zero differences.
    pub n_effective: usize,
    pub method: WilcoxonMethod,
}

impl WilcoxonResult {
    fn undefined() -> Self {
        Self {
            w_statistic: 0.0,
            w_plus: 0.0,
            w_minus: 0.0,
            p_value: 1.0,
            n_effective: 0,
            method: WilcoxonMethod::Undefined,
        }
    }
}

/// Two-sided Wilcoxon signed-rank test on paired samples.
///
/// Zero differences are dropped and tied magnitudes get midranks. Up to
/// [`EXACT_WILCOXON_LIMIT`] pairs the p-value comes from the exact
/// permutation distribution of `W+` given the observed ranks, so ties are
/// handled exactly. Beyond that a tie-corrected normal approximation with
/// continuity correction is used.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> Result<WilcoxonResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let diffs: Vec<f64> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| !nearly_equal(**a, **b))
        .map(|(a, b)| a - b)
        .collect();
    let n = diffs.len();
    if n == 0 {
        return Err(Error::AllZeroDifferences);
    }
    let ranks = midranks(&diffs.iter().map(|d| d.abs()).collect::<Vec<_>>());
    let w_plus = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .fold(0.0, |acc, (_, r)| acc + r);
    let total = n as f64 * (n as f64 + 1.0) / 2.0;
    let w_minus = total - w_plus;

    let (p_value, method) = if n <= EXACT_WILCOXON_LIMIT {
        (exact_p(&ranks, w_plus), WilcoxonMethod::Exact)
    } else {
        (normal_p(&ranks, w_plus), WilcoxonMethod::NormalApprox)
    };
    Ok(WilcoxonResult {
        w_statistic: w_plus.min(w_minus),
        w_plus,
        w_minus,
        p_value,
        n_effective: n,
        method,
    })
}

/// Midranks are multiples of 1/2, so doubling makes every subset sum an
/// integer and the null distribution a small counting problem.
fn exact_p(ranks: &[f64], w_plus: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max: usize = doubled.iter().sum();
    let mut counts = vec![0u64; max + 1];
    counts[0] = 1;
    for &r in &doubled {
        for s in (r..=max).rev() {
            counts[s] += counts[s - r];
        }
    }
    let observed = (2.0 * w_plus).round() as usize;
    let lower: u64 = counts[..=observed].iter().sum();
    let upper: u64 = counts[observed..].iter().sum();
    let p = 2.0 * lower.min(upper) as f64 / 2f64.powi(ranks.len() as i32);
    p.min(1.0)
}

fn normal_p(ranks: &[f64], w_plus: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    for group in sorted.chunk_by(|a, b| a == b) {
        let t = group.len() as f64;
        tie_term += t * t * t - t;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::standard();
    (2.0 * normal.sf(z)).min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub first: String,
    pub second: String,
    pub result: WilcoxonResult,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub friedman: FriedmanResult,
    /// Every unordered pair, in row order of the input.
    pub pairwise: Vec<PairwiseComparison>,
    pub alpha: f64,
}

impl StatsReport {
    pub fn significant(&self) -> impl Iterator<Item = &PairwiseComparison> {
        self.pairwise.iter().filter(|c| c.significant)
    }

    /// Orders the pairwise table by ascending p-value (stable).
    pub fn sort_by_p(&mut self) {
        self.pairwise
            .sort_by(|a, b| a.result.p_value.total_cmp(&b.result.p_value));
    }

    pub fn pair(&self, a: &str, b: &str) -> Option<&PairwiseComparison> {
        self.pairwise
            .iter()
            .find(|c| (c.first == a && c.second == b) || (c.first == b && c.second == a))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// Wilcoxon test for every pair of algorithms. Pairs whose results agree on
/// every benchmark are reported with method `Undefined` and p = 1.
pub fn pairwise_wilcoxon(mu: &LabeledMatrix, alpha: f64) -> Result<Vec<PairwiseComparison>> {
    check_alpha(alpha)?;
    let labels = mu.row_labels();
    let mut out = Vec::new();
    for a in 0..mu.nrows() {
        for b in a + 1..mu.nrows() {
            let result = match wilcoxon_signed_rank(mu.row(a), mu.row(b)) {
                Ok(r) => r,
                Err(Error::AllZeroDifferences) => WilcoxonResult::undefined(),
                Err(e) => return Err(e),
            };
            out.push(PairwiseComparison {
                first: labels[a].clone(),
                second: labels[b].clone(),
                significant: result.method != WilcoxonMethod::Undefined && result.p_value < alpha,
                result,
            });
        }
    }
    Ok(out)
}

pub fn stats_report(
    mu: &LabeledMatrix,
    direction: CriterionDirection,
    alpha: f64,
) -> Result<StatsReport> {
    check_alpha(alpha)?;
    Ok(StatsReport {
        friedman: friedman_test(mu, direction)?,
        pairwise: pairwise_wilcoxon(mu, alpha)?,
        alpha,
    })
}
