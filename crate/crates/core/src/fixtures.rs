//! The two bundled case studies.
//!
//! Case 1: seven classifier training algorithms on twelve data sets.
//! Case 2: eight nearest-neighbour variants on ten benchmarks, error rates
//! (lower is better).

use crate::matrix::{load_matrix_pair, DecisionMatrixPair};

pub const CASE1_MU: &str = include_str!("../../../data/case1_mu.csv");
pub const CASE1_SIGMA: &str = include_str!("../../../data/case1_sigma.csv");
pub const CASE2_MU: &str = include_str!("../../../data/case2_mu.csv");
pub const CASE2_SIGMA: &str = include_str!("../../../data/case2_sigma.csv");

pub fn case_study_1() -> DecisionMatrixPair {
    load_matrix_pair(CASE1_MU, CASE1_SIGMA).expect("bundled case 1 data is valid")
}

pub fn case_study_2() -> DecisionMatrixPair {
    load_matrix_pair(CASE2_MU, CASE2_SIGMA).expect("bundled case 2 data is valid")
}
