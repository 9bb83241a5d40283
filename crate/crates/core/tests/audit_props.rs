use covshift::audit::{quantify_labeled, stratified_folds_for_labels, AuditConfig};
use covshift::dataset::{label_selection, Encoded, Matrix};
use covshift::rng;
use proptest::prelude::*;
use rand::Rng;

fn encoded(rows: Vec<Vec<f64>>) -> Encoded {
    let d = rows[0].len();
    Encoded::from_matrix(
        Matrix::from_rows(&rows).unwrap(),
        (0..d).map(|j| format!("x{j}")).collect(),
    )
    .unwrap()
}

/// Selected rows shifted by `delta` along the first axis.
fn shifted_pair(seed: u64, n_sel: usize, n_not: usize, delta: f64) -> (Encoded, Encoded) {
    let mut r = rng::stream(seed, "audit-props", 0);
    let mut draw = |n: usize, shift: f64| -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| vec![r.random_range(0.0..1.0) + shift, r.random_range(0.0..1.0)])
            .collect()
    };
    let sel = draw(n_sel, delta);
    let not = draw(n_not, 0.0);
    (encoded(sel), encoded(not))
}

fn small_config(seed: u64) -> AuditConfig {
    AuditConfig {
        k: 5,
        n_models: 12,
        seed,
        ..AuditConfig::default()
    }
}

#[test]
fn score_is_the_argmax_of_the_trace() {
    let (s, n) = shifted_pair(1, 80, 200, 0.3);
    let table = label_selection(&s, &n).unwrap();
    let r = quantify_labeled(&table, &small_config(3)).unwrap();
    let means: Vec<f64> = r.per_model_trace.iter().filter_map(|t| t.mean_mcc).collect();
    let max = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(r.mcc_max_mean, max);
    let first = r.per_model_trace.iter().position(|t| t.mean_mcc == Some(max)).unwrap();
    assert_eq!(r.winning_index, first);
    let win = &r.per_model_trace[first];
    assert_eq!(r.reliability, win.std_mcc.unwrap());
    assert_eq!(r.winning_params, win.params);
    assert_eq!(r.folds_skipped, 5 - win.folds_used);
}

#[test]
fn folds_partition_rows_and_are_shared_by_models() {
    let (s, n) = shifted_pair(2, 50, 120, 0.2);
    let table = label_selection(&s, &n).unwrap();
    let r = quantify_labeled(&table, &small_config(4)).unwrap();
    let folds = stratified_folds_for_labels(&table.s, 5, 4).unwrap();
    let tests: Vec<Vec<usize>> = folds.iter().map(|f| f.test.clone()).collect();
    assert_eq!(r.fold_tests, tests);
    let mut all: Vec<usize> = tests.concat();
    all.sort_unstable();
    assert_eq!(all, (0..table.n_rows()).collect::<Vec<_>>());
    for t in &r.per_model_trace {
        assert_eq!(t.fold_mccs.len(), 5);
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let (s, n) = shifted_pair(3, 150, 300, 0.15);
    let table = label_selection(&s, &n).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| quantify_labeled(&table, &small_config(5)).unwrap())
    };
    let one = run(1);
    for threads in [2, 3, 8] {
        let other = run(threads);
        assert_eq!(
            serde_json::to_string(&one).unwrap(),
            serde_json::to_string(&other).unwrap()
        );
    }
}

#[test]
fn separable_classes_reach_the_ceiling() {
    let (s, n) = shifted_pair(4, 60, 140, 5.0);
    let r = covshift::audit::quantify_shift(&s, &n, &small_config(6)).unwrap();
    assert_eq!(r.mcc_max_mean, 1.0);
    assert_eq!(r.reliability, 0.0);
}

#[test]
fn stronger_shift_scores_higher() {
    let score = |delta| {
        let (s, n) = shifted_pair(7, 200, 400, delta);
        covshift::audit::quantify_shift(&s, &n, &small_config(8))
            .unwrap()
            .mcc_max_mean
    };
    let (a, b, c) = (score(0.0), score(0.3), score(0.8));
    assert!(a < b && b < c, "{a} {b} {c}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stratified_folds_balance_each_class(n1 in 5usize..60, n0 in 5usize..60, k in 2usize..6, seed in any::<u64>()) {
        prop_assume!(n1 >= k && n0 >= k);
        let mut s = vec![1u8; n1];
        s.extend(std::iter::repeat_n(0u8, n0));
        let folds = stratified_folds_for_labels(&s, k, seed).unwrap();
        prop_assert_eq!(folds.len(), k);
        let sizes: Vec<usize> = folds.iter().map(|f| f.test.len()).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        for f in &folds {
            let pos = f.test.iter().filter(|&&i| s[i] == 1).count();
            prop_assert!(pos == n1 / k || pos == n1 / k + 1);
            prop_assert!(pos >= 1 && f.test.len() - pos >= 1);
            prop_assert_eq!(f.train.len() + f.test.len(), s.len());
        }
    }

    #[test]
    fn scores_stay_in_range(seed in 0u64..1000, delta in 0.0f64..1.5) {
        let (s, n) = shifted_pair(seed, 30, 60, delta);
        let cfg = AuditConfig { k: 3, n_models: 4, seed, ..AuditConfig::default() };
        match covshift::audit::quantify_shift(&s, &n, &cfg) {
            Ok(r) => {
                prop_assert!((-1.0..=1.0).contains(&r.mcc_max_mean));
                prop_assert!(r.reliability >= 0.0);
                prop_assert!(r.folds_skipped <= 3);
            }
            Err(covshift::Error::Inconclusive(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}
