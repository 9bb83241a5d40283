mod common;

use common::{brute_force_split, check_tree, random_instance};
use covshift::dataset::Matrix;
use covshift::rng;
use covshift::tree::{best_split, fit, ClassWeights, PurityMeasure, TreeModelParams};

#[test]
fn best_split_matches_exhaustive_search() {
    let mut r = rng::stream(11, "tree-oracle", 0);
    for case in 0..400 {
        let inst = random_instance(&mut r);
        let rows: Vec<usize> = (0..inst.x.n_rows()).collect();
        let got = best_split(&inst.x, &rows, &inst.y, &inst.weights, &inst.params).unwrap();
        let want = brute_force_split(&inst.x, &rows, &inst.y, &inst.weights, &inst.params);
        match (got, want) {
            (None, None) => {}
            (Some(g), Some(w)) => {
                assert_eq!(g.feature, w.feature, "case {case}");
                assert_eq!(g.threshold.to_bits(), w.threshold.to_bits(), "case {case}");
                assert_eq!(g.decrease.to_bits(), w.decrease.to_bits(), "case {case}");
            }
            _ => panic!("case {case}: got {got:?}, want {want:?}"),
        }
    }
}

#[test]
fn fitted_trees_respect_every_constraint() {
    let mut r = rng::stream(12, "tree-oracle", 0);
    for case in 0..300 {
        let inst = random_instance(&mut r);
        let tree = fit(&inst.x, &inst.y, &inst.params, &inst.weights).unwrap();
        if let Err(e) = check_tree(&tree, &inst) {
            panic!("case {case} ({}): {e}", inst.params);
        }
    }
}

#[test]
fn integer_weights_equal_row_duplication() {
    let mut r = rng::stream(13, "tree-oracle", 0);
    for _ in 0..100 {
        let inst = random_instance(&mut r);
        let params = TreeModelParams {
            min_samples_leaf: 1,
            min_samples_split: 2,
            ..inst.params
        };
        let k = 3;
        let weighted = fit(&inst.x, &inst.y, &params, &ClassWeights::new(1.0, k as f64).unwrap()).unwrap();

        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..inst.x.n_rows() {
            let copies = if inst.y[i] == 1 { k } else { 1 };
            for _ in 0..copies {
                rows.push(inst.x.row(i).to_vec());
                y.push(inst.y[i]);
            }
        }
        let dup = fit(&Matrix::from_rows(&rows).unwrap(), &y, &params, &ClassWeights::unit()).unwrap();
        let a = weighted.predict(&inst.x).unwrap();
        let b = dup.predict(&inst.x).unwrap();
        assert_eq!(a, b);
        assert_eq!(weighted.n_leaves(), dup.n_leaves());
    }
}

#[test]
fn thirty_row_fit_is_pure_where_possible() {
    // two separated groups; an unrestricted tree must classify all rows
    let xs: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64, (i % 7) as f64]).collect();
    let y: Vec<u8> = (0..30).map(|i| u8::from(i >= 12)).collect();
    let x = Matrix::from_rows(&xs).unwrap();
    let params = TreeModelParams::new(20, 10, PurityMeasure::Entropy, 1, 2).unwrap();
    let tree = fit(&x, &y, &params, &ClassWeights::unit()).unwrap();
    assert_eq!(tree.predict(&x).unwrap(), y);
    assert_eq!(tree.n_leaves(), 2);
}
