use proptest::prelude::*;
use rankbench_core::{
    atopsis_detailed, atopsis_rank, friedman_test, global_stage, hellinger_distance,
    hellinger_squared, stage_one, topsis_rank, wilcoxon_signed_rank, AtopsisOptions,
    ClosenessMatrix, ClosenessVector, CriterionDirection, CriterionWeights, DecisionMatrixPair,
    GaussianSummary, LabeledMatrix, NormalizationScheme, WeightPair,
};

fn labeled(rows: Vec<Vec<f64>>) -> LabeledMatrix {
    let n = rows[0].len();
    LabeledMatrix::new(
        (0..rows.len()).map(|i| format!("A{i}")).collect(),
        (0..n).map(|j| format!("B{j}")).collect(),
        rows,
    )
    .unwrap()
}

fn grid(m: usize, n: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(lo..hi, n), m)
}

fn pair_strategy() -> impl Strategy<Value = DecisionMatrixPair> {
    (2usize..7, 1usize..6).prop_flat_map(|(m, n)| {
        (grid(m, n, 1.0, 100.0), grid(m, n, 0.0, 10.0))
            .prop_map(|(mu, sigma)| DecisionMatrixPair::new(labeled(mu), labeled(sigma)).unwrap())
    })
}

fn scheme() -> impl Strategy<Value = NormalizationScheme> {
    prop_oneof![
        Just(NormalizationScheme::Vector),
        Just(NormalizationScheme::Max)
    ]
}

fn direction() -> impl Strategy<Value = CriterionDirection> {
    prop_oneof![
        Just(CriterionDirection::Benefit),
        Just(CriterionDirection::Cost)
    ]
}

fn assert_scores_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= tol, "{x} vs {y}");
    }
}

/// Direct transcription of the global stage, written without the library's
/// normalization or ranking helpers.
fn stage_two_oracle(xi_mu: &[f64], xi_sigma: &[f64], w_mu: f64, w_sigma: f64) -> Vec<f64> {
    let a: Vec<f64> = xi_mu.iter().map(|x| x * w_mu).collect();
    let b: Vec<f64> = xi_sigma.iter().map(|x| x * w_sigma).collect();
    let max = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max);
    let min = |v: &[f64]| v.iter().cloned().fold(f64::MAX, f64::min);
    let (a_hi, a_lo, b_hi, b_lo) = (max(&a), min(&a), max(&b), min(&b));
    (0..a.len())
        .map(|i| {
            let dp = ((a[i] - a_hi).powi(2) + (b[i] - b_hi).powi(2)).sqrt();
            let dm = ((a[i] - a_lo).powi(2) + (b[i] - b_lo).powi(2)).sqrt();
            if dp + dm == 0.0 {
                0.5
            } else {
                dm / (dp + dm)
            }
        })
        .collect()
}

fn simpson_bc(a: GaussianSummary, b: GaussianSummary) -> f64 {
    let pdf = |x: f64, g: GaussianSummary| {
        (-(x - g.mu()).powi(2) / (2.0 * g.sigma().powi(2))).exp()
            / (g.sigma() * (2.0 * std::f64::consts::PI).sqrt())
    };
    let spread = a.sigma().max(b.sigma());
    let lo = a.mu().min(b.mu()) - 14.0 * spread;
    let hi = a.mu().max(b.mu()) + 14.0 * spread;
    let steps = 20_000;
    let h = (hi - lo) / steps as f64;
    let f = |x: f64| (pdf(x, a) * pdf(x, b)).sqrt();
    let mut sum = f(lo) + f(hi);
    for k in 1..steps {
        let x = lo + k as f64 * h;
        sum += if k % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    sum * h / 3.0
}

fn brute_force_wilcoxon(x: &[f64], y: &[f64]) -> f64 {
    let d: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| a - b)
        .filter(|d| *d != 0.0)
        .collect();
    let n = d.len();
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let ranks: Vec<f64> = abs
        .iter()
        .map(|v| {
            let below = abs.iter().filter(|w| *w < v).count() as f64;
            let equal = abs.iter().filter(|w| *w == v).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect();
    let observed: f64 = d
        .iter()
        .zip(&ranks)
        .filter(|(v, _)| **v > 0.0)
        .map(|(_, r)| r)
        .sum();
    let (mut lo, mut hi) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        let s: f64 = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ranks[i])
            .sum();
        if s <= observed + 1e-9 {
            lo += 1;
        }
        if s >= observed - 1e-9 {
            hi += 1;
        }
    }
    (2.0 * lo.min(hi) as f64 / (1u64 << n) as f64).min(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closeness_in_unit_interval(pair in pair_strategy(), s in scheme(), d in direction(), w in 0.0f64..=1.0) {
        let r = atopsis_rank(&pair, WeightPair::from_mean_weight(w).unwrap(), &AtopsisOptions::new(s, d)).unwrap();
        prop_assert!(r.xi_global.iter().all(|x| (0.0..=1.0).contains(x)));
        let mut sorted = r.order.clone();
        sorted.sort();
        let mut labels = r.labels.clone();
        labels.sort();
        prop_assert_eq!(sorted, labels);
    }

    #[test]
    fn column_scale_invariance(pair in pair_strategy(), s in scheme(), w in 0.0f64..=1.0, seed in prop::collection::vec(0.1f64..50.0, 6)) {
        let scale = |m: &LabeledMatrix| m.map_cells(|j, v| v * seed[j % seed.len()]).unwrap();
        let scaled = DecisionMatrixPair::new(scale(pair.mu()), scale(pair.sigma())).unwrap();
        let opts = AtopsisOptions::new(s, CriterionDirection::Benefit);
        let wp = WeightPair::from_mean_weight(w).unwrap();
        let a = atopsis_rank(&pair, wp, &opts).unwrap();
        let b = atopsis_rank(&scaled, wp, &opts).unwrap();
        assert_scores_close(&a.xi_global, &b.xi_global, 1e-9);
    }

    #[test]
    fn permutation_equivariance(pair in pair_strategy(), s in scheme(), w in 0.0f64..=1.0, rot in 0usize..7) {
        let m = pair.mu().nrows();
        let perm: Vec<usize> = (0..m).map(|i| (i + rot) % m).collect();
        let permuted = pair.select_rows(&perm).unwrap();
        let opts = AtopsisOptions::new(s, CriterionDirection::Benefit);
        let wp = WeightPair::from_mean_weight(w).unwrap();
        let a = atopsis_rank(&pair, wp, &opts).unwrap();
        let b = atopsis_rank(&permuted, wp, &opts).unwrap();
        for (i, &p) in perm.iter().enumerate() {
            prop_assert!((b.xi_global[i] - a.xi_global[p]).abs() < 1e-12);
        }
    }

    #[test]
    fn dominant_alternative_ranks_first(pair in pair_strategy(), s in scheme(), w in 0.0f64..=1.0) {
        // Append a row with the best mean and the smallest deviation everywhere.
        let mu = pair.mu();
        let sigma = pair.sigma();
        let best_mu: Vec<f64> = (0..mu.ncols()).map(|j| mu.column(j).fold(0.0, f64::max) + 1.0).collect();
        let best_sigma: Vec<f64> = (0..sigma.ncols()).map(|j| sigma.column(j).fold(f64::MAX, f64::min)).collect();
        let mut mu_rows = mu.to_rows();
        mu_rows.push(best_mu);
        let mut sigma_rows = sigma.to_rows();
        sigma_rows.push(best_sigma);
        let aug = DecisionMatrixPair::new(labeled(mu_rows), labeled(sigma_rows)).unwrap();
        let r = atopsis_rank(&aug, WeightPair::from_mean_weight(w).unwrap(), &AtopsisOptions::new(s, CriterionDirection::Benefit)).unwrap();
        let top = r.xi_global.last().copied().unwrap();
        prop_assert!((top - 1.0).abs() < 1e-12);
    }

    #[test]
    fn direction_flip_complements_closeness(rows in (2usize..7, 1usize..6).prop_flat_map(|(m, n)| grid(m, n, 0.0, 100.0)), s in scheme()) {
        let m = labeled(rows);
        let n = m.ncols();
        let w = CriterionWeights::uniform(n);
        let b = topsis_rank(&m, &w, &vec![CriterionDirection::Benefit; n], s).unwrap();
        let c = topsis_rank(&m, &w, &vec![CriterionDirection::Cost; n], s).unwrap();
        for (x, y) in b.as_slice().iter().zip(c.as_slice()) {
            prop_assert!((x + y - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weight_extremes_follow_stage_one(pair in pair_strategy(), s in scheme()) {
        let opts = AtopsisOptions::new(s, CriterionDirection::Benefit);
        for (w, pick_mu) in [(1.0, true), (0.0, false)] {
            let out = atopsis_detailed(&pair, WeightPair::from_mean_weight(w).unwrap(), &opts).unwrap();
            let xi = if pick_mu { out.stage_one.xi_mu() } else { out.stage_one.xi_sigma() };
            let by_label: Vec<f64> = out.ranking.order.iter()
                .map(|l| xi.as_slice()[pair.row_labels().iter().position(|x| x == l).unwrap()])
                .collect();
            prop_assert!(by_label.windows(2).all(|p| p[0] >= p[1]));
        }
    }

    #[test]
    fn stage_two_matches_oracle(
        xs in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..10),
        w in 0.0f64..=1.0,
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = xs.into_iter().unzip();
        let labels = (0..a.len()).map(|i| format!("A{i}")).collect();
        let cm = ClosenessMatrix::new(labels, ClosenessVector::new(a.clone()).unwrap(), ClosenessVector::new(b.clone()).unwrap()).unwrap();
        let wp = WeightPair::from_mean_weight(w).unwrap();
        let got = global_stage(&cm, wp, 1e-9).unwrap();
        assert_scores_close(&got.xi_global, &stage_two_oracle(&a, &b, wp.w_mu(), wp.w_sigma()), 1e-12);
    }

    #[test]
    fn stage_one_is_weight_free(pair in pair_strategy()) {
        let a = stage_one(&pair, &AtopsisOptions::default()).unwrap();
        let b = atopsis_detailed(&pair, WeightPair::new(0.3, 0.7).unwrap(), &AtopsisOptions::default()).unwrap();
        prop_assert_eq!(a, b.stage_one);
    }

    #[test]
    fn hellinger_is_a_metric(
        a in (-10.0f64..10.0, 0.1f64..5.0),
        b in (-10.0f64..10.0, 0.1f64..5.0),
        c in (-10.0f64..10.0, 0.1f64..5.0),
    ) {
        let g = |(m, s): (f64, f64)| GaussianSummary::new(m, s).unwrap();
        let (a, b, c) = (g(a), g(b), g(c));
        let ab = hellinger_distance(a, b);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((ab - hellinger_distance(b, a)).abs() < 1e-15);
        prop_assert!(ab <= hellinger_distance(a, c) + hellinger_distance(c, b) + 1e-12);
    }

    #[test]
    fn hellinger_matches_quadrature(a in (-5.0f64..5.0, 0.2f64..4.0), b in (-5.0f64..5.0, 0.2f64..4.0)) {
        let a = GaussianSummary::new(a.0, a.1).unwrap();
        let b = GaussianSummary::new(b.0, b.1).unwrap();
        let numeric = 1.0 - simpson_bc(a, b);
        prop_assert!((hellinger_squared(a, b) - numeric).abs() < 1e-9);
    }

    #[test]
    fn wilcoxon_matches_enumeration(d in prop::collection::vec(-4i32..=4, 1..=8)) {
        prop_assume!(d.iter().any(|v| *v != 0));
        let x: Vec<f64> = d.iter().map(|v| 10.0 + *v as f64).collect();
        let y = vec![10.0; d.len()];
        let r = wilcoxon_signed_rank(&x, &y).unwrap();
        prop_assert!((r.p_value - brute_force_wilcoxon(&x, &y)).abs() < 1e-12);
        prop_assert!(r.p_value > 0.0 && r.p_value <= 1.0);
        prop_assert_eq!(r.w_plus + r.w_minus, (r.n_effective * (r.n_effective + 1)) as f64 / 2.0);
    }

    #[test]
    fn friedman_invariant_under_monotone_maps(rows in (2usize..6, 2usize..8).prop_flat_map(|(m, n)| grid(m, n, 0.0, 10.0))) {
        let m = labeled(rows);
        let cubed = m.map_cells(|_, v| v.powi(3) + 1.0).unwrap();
        let a = friedman_test(&m, CriterionDirection::Benefit).unwrap();
        let b = friedman_test(&cubed, CriterionDirection::Benefit).unwrap();
        prop_assert!((a.statistic - b.statistic).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&a.p_value));
    }
}

#[test]
fn identical_alternatives_tie_at_half() {
    let pair = DecisionMatrixPair::new(
        labeled(vec![vec![80.0, 70.0]; 3]),
        labeled(vec![vec![1.0, 2.0]; 3]),
    )
    .unwrap();
    let r = atopsis_rank(
        &pair,
        WeightPair::new(0.7, 0.3).unwrap(),
        &AtopsisOptions::default(),
    )
    .unwrap();
    assert_eq!(r.xi_global, [0.5; 3]);
    assert_eq!(r.tie_groups.len(), 1);
}

#[test]
fn single_alternative_scores_half() {
    let pair = DecisionMatrixPair::new(labeled(vec![vec![5.0]]), labeled(vec![vec![0.0]])).unwrap();
    let r = atopsis_rank(
        &pair,
        WeightPair::new(0.5, 0.5).unwrap(),
        &AtopsisOptions::default(),
    )
    .unwrap();
    assert_eq!(r.xi_global, [0.5]);
}
