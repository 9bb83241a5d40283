#![allow(dead_code)]

use covshift::dataset::Matrix;
use covshift::tree::{best_split, ClassWeights, NodeKind, PurityMeasure, Split, Tree, TreeModelParams};
use rand::Rng;

/// Weighted impurity term of one side: `W·gini` directly, entropy as
/// `W·log2 W − a·log2 a − b·log2 b`.
fn term(c: [usize; 2], w: &ClassWeights, m: PurityMeasure) -> f64 {
    let (a, b) = (c[0] as f64 * w.w0(), c[1] as f64 * w.w1());
    let t = a + b;
    if t <= 0.0 {
        return 0.0;
    }
    match m {
        PurityMeasure::Gini => {
            let (p0, p1) = (a / t, b / t);
            t * (1.0 - p0 * p0 - p1 * p1)
        }
        PurityMeasure::Entropy => {
            let xlx = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
            t * t.log2() - xlx(a) - xlx(b)
        }
    }
}

fn counts(y: &[u8], rows: impl Iterator<Item = usize>) -> [usize; 2] {
    let mut c = [0; 2];
    for r in rows {
        c[y[r] as usize] += 1;
    }
    c
}

/// Exhaustive split search: every feature, every midpoint of consecutive
/// distinct values, children evaluated by direct partitioning.
pub fn brute_force_split(x: &Matrix, rows: &[usize], y: &[u8], w: &ClassWeights, p: &TreeModelParams) -> Option<Split> {
    let n = rows.len();
    if n < p.min_samples_split || n < 2 * p.min_samples_leaf {
        return None;
    }
    let parent = term(counts(y, rows.iter().copied()), w, p.purity);
    let mut best: Option<Split> = None;
    for f in 0..x.n_cols() {
        let mut vals: Vec<f64> = rows.iter().map(|&r| x.get(r, f)).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for pair in vals.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let mut t = a * 0.5 + b * 0.5;
            if !(t >= a && t < b) {
                t = a;
            }
            let left: Vec<usize> = rows.iter().copied().filter(|&r| x.get(r, f) <= t).collect();
            let right: Vec<usize> = rows.iter().copied().filter(|&r| x.get(r, f) > t).collect();
            if left.len() < p.min_samples_leaf || right.len() < p.min_samples_leaf {
                continue;
            }
            let dec = parent
                - term(counts(y, left.into_iter()), w, p.purity)
                - term(counts(y, right.into_iter()), w, p.purity);
            if best.is_none_or(|b: Split| dec > b.decrease) {
                best = Some(Split {
                    feature: f,
                    threshold: t,
                    decrease: dec,
                });
            }
        }
    }
    best.filter(|b| b.decrease > 0.0)
}

pub struct Instance {
    pub x: Matrix,
    pub y: Vec<u8>,
    pub params: TreeModelParams,
    pub weights: ClassWeights,
}

/// Small random problem: n ≤ 50, d ≤ 4, values on a coarse grid so ties and
/// duplicate values are common.
pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let n = rng.random_range(1..=50);
    let d = rng.random_range(1..=4);
    let grid = rng.random_range(2..=12);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(0..grid) as f64 * 0.37 - 1.0).collect())
        .collect();
    let p1 = rng.random_range(0.1..0.9);
    let y: Vec<u8> = (0..n).map(|_| u8::from(rng.random_bool(p1))).collect();
    let params = TreeModelParams::new(
        rng.random_range(2..=20),
        rng.random_range(1..=8),
        if rng.random_bool(0.5) {
            PurityMeasure::Gini
        } else {
            PurityMeasure::Entropy
        },
        rng.random_range(1..=8),
        rng.random_range(2..=12),
    )
    .unwrap();
    let weights = if rng.random_bool(0.5) {
        ClassWeights::unit()
    } else {
        ClassWeights::new(rng.random_range(0.2..3.0), rng.random_range(0.2..3.0)).unwrap()
    };
    Instance {
        x: Matrix::from_rows(&rows).unwrap(),
        y,
        params,
        weights,
    }
}

/// Walk the tree and check every hyperparameter constraint plus that each
/// internal node carries the split the search would choose for its rows.
pub fn check_tree(tree: &Tree, inst: &Instance) -> Result<(), String> {
    let p = &inst.params;
    let nodes = tree.nodes();
    let mut reach: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    reach[0] = (0..inst.x.n_rows()).collect();
    let mut leaves = 0;
    for (id, node) in nodes.iter().enumerate() {
        let rows = std::mem::take(&mut reach[id]);
        if rows.len() != node.n_samples {
            return Err(format!(
                "node {id}: {} rows reach it, {} recorded",
                rows.len(),
                node.n_samples
            ));
        }
        if node.depth > p.max_depth {
            return Err(format!("node {id} at depth {} > {}", node.depth, p.max_depth));
        }
        match node.kind {
            NodeKind::Leaf { .. } => {
                leaves += 1;
                if id != 0 && rows.len() < p.min_samples_leaf {
                    return Err(format!("leaf {id} has {} < {} rows", rows.len(), p.min_samples_leaf));
                }
            }
            NodeKind::Internal {
                feature,
                threshold,
                left,
                right,
            } => {
                if rows.len() < p.min_samples_split {
                    return Err(format!(
                        "node {id} split with {} < {} rows",
                        rows.len(),
                        p.min_samples_split
                    ));
                }
                let want = best_split(&inst.x, &rows, &inst.y, &inst.weights, p)
                    .unwrap()
                    .ok_or(format!("node {id} split where none is admissible"))?;
                if want.feature != feature || want.threshold.to_bits() != threshold.to_bits() {
                    return Err(format!("node {id} split differs from the best split ({want:?})"));
                }
                for r in rows {
                    let child = if inst.x.get(r, feature) <= threshold {
                        left
                    } else {
                        right
                    };
                    reach[child].push(r);
                }
            }
        }
    }
    if leaves > p.max_leaves {
        return Err(format!("{leaves} leaves > {}", p.max_leaves));
    }
    Ok(())
}

/// Linear-interpolated percentile of `v` (q in [0, 1]).
pub fn percentile(v: &[f64], q: f64) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let pos = q * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    s[lo] + (s[hi] - s[lo]) * (pos - lo as f64)
}

pub fn median(v: &[f64]) -> f64 {
    percentile(v, 0.5)
}
