//! Binary classification trees with threshold splits.
//!
//! Trees are grown best-first: every frontier leaf carries its best admissible
//! split, and the leaf with the largest weighted impurity decrease is expanded
//! next (ties go to the leaf created first). Growth stops when the leaf budget
//! is spent or no frontier leaf can be split. A row goes left iff
//! `value <= threshold`; thresholds sit between consecutive distinct values.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::Matrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PurityMeasure {
    Entropy,
    Gini,
}

impl PurityMeasure {
    pub fn name(self) -> &'static str {
        match self {
            PurityMeasure::Entropy => "entropy",
            PurityMeasure::Gini => "gini",
        }
    }
}

impl std::str::FromStr for PurityMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entropy" => Ok(PurityMeasure::Entropy),
            "gini" => Ok(PurityMeasure::Gini),
            other => Err(Error::Config(format!("unknown purity measure `{other}`"))),
        }
    }
}

/// The five tunable tree hyperparameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeModelParams {
    pub max_leaves: usize,
    pub max_depth: usize,
    pub purity: PurityMeasure,
    pub min_samples_leaf: usize,
    pub min_samples_split: usize,
}

impl TreeModelParams {
    pub fn new(
        max_leaves: usize,
        max_depth: usize,
        purity: PurityMeasure,
        min_samples_leaf: usize,
        min_samples_split: usize,
    ) -> Result<Self> {
        let p = TreeModelParams {
            max_leaves,
            max_depth,
            purity,
            min_samples_leaf,
            min_samples_split,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_leaves < 2 {
            return Err(Error::Config("max_leaves must be at least 2".into()));
        }
        if self.max_depth < 1 {
            return Err(Error::Config("max_depth must be at least 1".into()));
        }
        if self.min_samples_leaf < 1 {
            return Err(Error::Config("min_samples_leaf must be at least 1".into()));
        }
        if self.min_samples_split < 2 {
            return Err(Error::Config("min_samples_split must be at least 2".into()));
        }
        Ok(())
    }
}

impl std::fmt::Display for TreeModelParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "max_leaves={};max_depth={};purity={};min_samples_leaf={};min_samples_split={}",
            self.max_leaves,
            self.max_depth,
            self.purity.name(),
            self.min_samples_leaf,
            self.min_samples_split
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights {
    w0: f64,
    w1: f64,
}

impl ClassWeights {
    pub fn new(w0: f64, w1: f64) -> Result<Self> {
        if !(w0.is_finite() && w1.is_finite() && w0 > 0.0 && w1 > 0.0) {
            return Err(Error::Config(format!(
                "class weights must be finite and positive, got ({w0}, {w1})"
            )));
        }
        Ok(ClassWeights { w0, w1 })
    }

    pub fn unit() -> Self {
        ClassWeights { w0: 1.0, w1: 1.0 }
    }

    /// `w_c = n / (2 n_c)`; both classes must be present.
    pub fn balanced(n0: usize, n1: usize) -> Result<Self> {
        if n0 == 0 || n1 == 0 {
            return Err(Error::Config("balanced weights need both classes".into()));
        }
        let n = (n0 + n1) as f64;
        Self::new(n / (2.0 * n0 as f64), n / (2.0 * n1 as f64))
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn w1(&self) -> f64 {
        self.w1
    }

    fn weigh(&self, counts: [usize; 2]) -> [f64; 2] {
        [counts[0] as f64 * self.w0, counts[1] as f64 * self.w1]
    }
}

fn impurity_of(c0: f64, c1: f64, measure: PurityMeasure) -> f64 {
    let total = c0 + c1;
    let p0 = c0 / total;
    let p1 = c1 / total;
    match measure {
        PurityMeasure::Gini => 1.0 - p0 * p0 - p1 * p1,
        PurityMeasure::Entropy => {
            let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
            h(p0) + h(p1)
        }
    }
}

/// Impurity of a node with weighted class counts `(c0, c1)`.
pub fn impurity(c0: f64, c1: f64, measure: PurityMeasure) -> Result<f64> {
    if !(c0 >= 0.0 && c1 >= 0.0 && c0 + c1 > 0.0 && (c0 + c1).is_finite()) {
        return Err(Error::NonPositiveWeight);
    }
    Ok(impurity_of(c0, c1, measure))
}

/// Total weight times impurity; zero for an empty side.
fn weighted_term(w: [f64; 2], measure: PurityMeasure) -> f64 {
    let total = w[0] + w[1];
    if total > 0.0 {
        total * impurity_of(w[0], w[1], measure)
    } else {
        0.0
    }
}

/// `W·I` of a node side from its integer class counts.
///
/// Entropy is evaluated as `W·log2 W − a·log2 a − b·log2 b` (with `a`, `b`
/// the weighted class counts and `W = a + b`); the per-class `x·log2 x`
/// terms are tabulated once per fit, leaving one logarithm per side.
struct SideCost {
    measure: PurityMeasure,
    weights: ClassWeights,
    xlogx: [Vec<f64>; 2],
}

impl SideCost {
    fn new(max_counts: [usize; 2], weights: &ClassWeights, measure: PurityMeasure) -> Self {
        let table = |n: usize, w: f64| -> Vec<f64> {
            (0..=n)
                .map(|k| {
                    let a = k as f64 * w;
                    if a > 0.0 {
                        a * a.log2()
                    } else {
                        0.0
                    }
                })
                .collect()
        };
        let xlogx = match measure {
            PurityMeasure::Entropy => [table(max_counts[0], weights.w0), table(max_counts[1], weights.w1)],
            PurityMeasure::Gini => [Vec::new(), Vec::new()],
        };
        SideCost {
            measure,
            weights: *weights,
            xlogx,
        }
    }

    fn of(&self, c: [usize; 2]) -> f64 {
        match self.measure {
            PurityMeasure::Gini => weighted_term(self.weights.weigh(c), PurityMeasure::Gini),
            PurityMeasure::Entropy => {
                let [a, b] = self.weights.weigh(c);
                let total = a + b;
                if total > 0.0 {
                    total * total.log2() - self.xlogx[0][c[0]] - self.xlogx[1][c[1]]
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    /// `W·I(node) − W_L·I(left) − W_R·I(right)` in class-weighted units.
    pub decrease: f64,
}

/// Midpoint of `a < b` that still sends `a` left and `b` right.
fn midpoint(a: f64, b: f64) -> f64 {
    let m = a * 0.5 + b * 0.5;
    if m >= a && m < b {
        m
    } else {
        a
    }
}

/// Training rows with every feature pre-sorted once, shareable across fits.
///
/// Per feature only the rows whose value differs from the column's most
/// frequent value are listed; rows at the mode form one implicit run. A
/// one-hot column therefore costs its non-zero count per node, not the node
/// size.
#[derive(Clone, Debug)]
pub struct TrainingSet {
    n_features: usize,
    /// Column-major feature values by sample position.
    columns: Vec<Vec<f64>>,
    labels: Vec<u8>,
    /// Most frequent value per feature (the smallest one on ties).
    mode: Vec<f64>,
    /// Per feature, off-mode samples ordered by `(value, position)`.
    order: Vec<Vec<Entry>>,
}

/// One sample in a feature's sorted order. Value and label ride along so the
/// split search reads memory sequentially.
#[derive(Clone, Copy, Debug)]
struct Entry {
    value: f64,
    pos: u32,
    label: u8,
}

/// Column-major copy of `rows` with their labels.
fn gather(x: &Matrix, rows: &[usize], y: &[u8]) -> Result<(Vec<Vec<f64>>, Vec<u8>)> {
    if y.len() != x.n_rows() {
        return Err(Error::LengthMismatch(y.len(), x.n_rows()));
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut columns = vec![Vec::with_capacity(rows.len()); x.n_cols()];
    let mut labels = Vec::with_capacity(rows.len());
    for &r in rows {
        for (j, &v) in x.row(r).iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row: r, col: j });
            }
            columns[j].push(v);
        }
        labels.push(u8::from(y[r] != 0));
    }
    Ok((columns, labels))
}

/// Per-column row order of a whole matrix, sorted once and shared by every
/// training subset drawn from it.
#[derive(Clone, Debug)]
pub struct SortedColumns {
    n_rows: usize,
    /// Per column, matrix rows ordered by `(value, row)`.
    order: Vec<Vec<u32>>,
}

/// Row order of `col` by `(value, index)`. Values must be finite, so
/// `partial_cmp` is total (and `-0.0 == 0.0`).
fn sorted_order(col: &[f64]) -> Vec<u32> {
    let mut idx: Vec<u32> = (0..col.len() as u32).collect();
    idx.sort_by(|&a, &b| {
        col[a as usize]
            .partial_cmp(&col[b as usize])
            .expect("finite")
            .then(a.cmp(&b))
    });
    idx
}

impl SortedColumns {
    pub fn new(x: &Matrix) -> Result<Self> {
        let mut columns = vec![Vec::with_capacity(x.n_rows()); x.n_cols()];
        for r in 0..x.n_rows() {
            for (j, &v) in x.row(r).iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: r, col: j });
                }
                columns[j].push(v);
            }
        }
        Ok(SortedColumns {
            n_rows: x.n_rows(),
            order: columns.iter().map(|c| sorted_order(c)).collect(),
        })
    }
}

impl TrainingSet {
    /// `rows` selects matrix rows; `y` is indexed by matrix row.
    pub fn new(x: &Matrix, rows: &[usize], y: &[u8]) -> Result<Self> {
        let (columns, labels) = gather(x, rows, y)?;
        let order = columns.iter().map(|c| sorted_order(c)).collect();
        Ok(Self::assemble(columns, labels, order))
    }

    /// Like [`TrainingSet::new`], reusing a sort of the whole matrix.
    pub fn from_sorted(x: &Matrix, sorted: &SortedColumns, rows: &[usize], y: &[u8]) -> Result<Self> {
        if sorted.n_rows != x.n_rows() || sorted.order.len() != x.n_cols() {
            return Err(Error::DimensionMismatch {
                expected: x.n_cols(),
                got: sorted.order.len(),
            });
        }
        let (columns, labels) = gather(x, rows, y)?;
        let mut position = vec![u32::MAX; x.n_rows()];
        for (p, &r) in rows.iter().enumerate() {
            position[r] = p as u32;
        }
        let order = sorted
            .order
            .iter()
            .map(|o| {
                o.iter()
                    .filter_map(|&r| Some(position[r as usize]).filter(|&p| p != u32::MAX))
                    .collect()
            })
            .collect();
        Ok(Self::assemble(columns, labels, order))
    }

    /// Find each column's mode and drop its rows from the sorted order.
    fn assemble(columns: Vec<Vec<f64>>, labels: Vec<u8>, full_order: Vec<Vec<u32>>) -> Self {
        let mut mode = Vec::with_capacity(columns.len());
        let mut order = Vec::with_capacity(columns.len());
        for (col, idx) in columns.iter().zip(full_order) {
            let (mut best, mut best_len) = (col[idx[0] as usize], 0);
            let mut i = 0;
            while i < idx.len() {
                let v = col[idx[i] as usize];
                let j = i + idx[i..].partition_point(|&p| col[p as usize] == v);
                if j - i > best_len {
                    (best, best_len) = (v, j - i);
                }
                i = j;
            }
            mode.push(best);
            order.push(
                idx.into_iter()
                    .filter(|&p| col[p as usize] != best)
                    .map(|p| Entry {
                        value: col[p as usize],
                        pos: p,
                        label: labels[p as usize],
                    })
                    .collect(),
            );
        }
        TrainingSet {
            n_features: columns.len(),
            columns,
            labels,
            mode,
            order,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let pos = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - pos, pos]
    }
}

fn counts_of(labels: &[u8], positions: &[u32]) -> [usize; 2] {
    let pos = positions.iter().filter(|&&p| labels[p as usize] == 1).count();
    [positions.len() - pos, pos]
}

fn entry_counts(entries: &[Entry]) -> [usize; 2] {
    let pos = entries.iter().map(|e| e.label as usize).sum::<usize>();
    [entries.len() - pos, pos]
}

/// Best split of a node given, per feature, its off-mode positions in value order.
fn search_split(
    set: &TrainingSet,
    order: &[&[Entry]],
    counts: [usize; 2],
    cost: &SideCost,
    params: &TreeModelParams,
) -> Option<Split> {
    let n = counts[0] + counts[1];
    let min_leaf = params.min_samples_leaf;
    if n < params.min_samples_split || n < 2 * min_leaf {
        return None;
    }
    let parent = cost.of(counts);
    let mut best: Option<Split> = None;
    for (feature, entries) in order.iter().enumerate() {
        let mode = set.mode[feature];
        let off = entry_counts(entries);
        let at_mode = [counts[0] - off[0], counts[1] - off[1]];
        let mut mode_pending = at_mode[0] + at_mode[1] > 0;

        // Walk runs of equal values in ascending order; a candidate sits
        // between each pair of consecutive runs. A candidate flanked by two
        // runs of the same single class is skipped when both neighbouring
        // candidates are admissible: along such a stretch the decrease is
        // strictly convex, so it peaks at the stretch's ends.
        let mut left = [0usize; 2];
        let mut prev: Option<f64> = None;
        let mut prev_run = [0usize; 2];
        let mut prev_admissible = false;
        let mut i = 0;
        loop {
            let (value, run) = if mode_pending && (i == entries.len() || mode < entries[i].value) {
                mode_pending = false;
                (mode, at_mode)
            } else if i < entries.len() {
                let v = entries[i].value;
                let mut run = [0usize; 2];
                while i < entries.len() && entries[i].value == v {
                    run[entries[i].label as usize] += 1;
                    i += 1;
                }
                (v, run)
            } else {
                break;
            };
            if let Some(a) = prev {
                let n_left = left[0] + left[1];
                if n - n_left < min_leaf {
                    break;
                }
                let admissible = n_left >= min_leaf;
                if admissible {
                    let more = i < entries.len() || mode_pending;
                    let next_admissible = more && n - n_left - run[0] - run[1] >= min_leaf;
                    let same_class = (prev_run[0] == 0 && run[0] == 0) || (prev_run[1] == 0 && run[1] == 0);
                    if !(prev_admissible && next_admissible && same_class) {
                        let right = [counts[0] - left[0], counts[1] - left[1]];
                        let decrease = parent - cost.of(left) - cost.of(right);
                        if best.is_none_or(|b| decrease > b.decrease) {
                            best = Some(Split {
                                feature,
                                threshold: midpoint(a, value),
                                decrease,
                            });
                        }
                    }
                }
                prev_admissible = admissible;
            }
            left[0] += run[0];
            left[1] += run[1];
            prev_run = run;
            prev = Some(value);
        }
    }
    best.filter(|b| b.decrease > 0.0)
}

/// Best admissible split of the given matrix rows.
///
/// Candidates are every midpoint between consecutive distinct values of
/// every feature whose children both keep `min_samples_leaf` rows. Ties go
/// to the lowest feature index, then the lowest threshold. Returns `None`
/// when the node has fewer than `min_samples_split` rows, no candidate is
/// admissible, or the best decrease is not positive.
pub fn best_split(
    x: &Matrix,
    rows: &[usize],
    y: &[u8],
    weights: &ClassWeights,
    params: &TreeModelParams,
) -> Result<Option<Split>> {
    if rows.is_empty() {
        return Ok(None);
    }
    let set = TrainingSet::new(x, rows, y)?;
    let order: Vec<&[Entry]> = set.order.iter().map(Vec::as_slice).collect();
    let counts = set.class_counts();
    let cost = SideCost::new(counts, weights, params.purity);
    Ok(search_split(&set, &order, counts, &cost, params))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum NodeKind {
    Internal {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        label: u8,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub depth: usize,
    pub n_samples: usize,
    pub class_counts: [usize; 2],
    pub weighted_counts: [f64; 2],
    pub kind: NodeKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    n_features: usize,
    /// Node 0 is the root; ids follow creation order.
    nodes: Vec<Node>,
}

fn leaf_label(w: [f64; 2]) -> u8 {
    u8::from(w[1] > w[0])
}

/// A leaf awaiting expansion. `rows` and each `ranges[f]` index into the
/// working arrays of the fit.
struct Frontier {
    node: usize,
    rows: (usize, usize),
    ranges: Vec<(usize, usize)>,
    counts: [usize; 2],
    split: Option<Split>,
}

/// Stable in-place partition; returns the number of entries sent left.
fn partition_stable<T: Copy>(range: &mut [T], left: impl Fn(&T) -> bool, scratch: &mut Vec<T>) -> usize {
    scratch.clear();
    let mut w = 0;
    for i in 0..range.len() {
        let p = range[i];
        if left(&p) {
            range[w] = p;
            w += 1;
        } else {
            scratch.push(p);
        }
    }
    range[w..].copy_from_slice(scratch);
    w
}

/// Fit a tree on all rows of `x`.
pub fn fit(x: &Matrix, y: &[u8], params: &TreeModelParams, weights: &ClassWeights) -> Result<Tree> {
    if x.n_rows() == 0 {
        return Err(Error::EmptyInput);
    }
    let rows: Vec<usize> = (0..x.n_rows()).collect();
    let set = TrainingSet::new(x, &rows, y)?;
    fit_prepared(&set, params, weights)
}

/// Fit a tree on a pre-sorted training set.
pub fn fit_prepared(set: &TrainingSet, params: &TreeModelParams, weights: &ClassWeights) -> Result<Tree> {
    params.validate()?;
    let n = set.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut rows: Vec<u32> = (0..n as u32).collect();
    let mut order: Vec<Vec<Entry>> = set.order.clone();
    let mut goes_left = vec![false; n];
    let mut scratch: Vec<u32> = Vec::with_capacity(n);
    let mut entry_scratch: Vec<Entry> = Vec::with_capacity(n);

    let root_counts = set.class_counts();
    let cost = SideCost::new(root_counts, weights, params.purity);
    let mut nodes = vec![Node {
        depth: 0,
        n_samples: n,
        class_counts: root_counts,
        weighted_counts: weights.weigh(root_counts),
        kind: NodeKind::Leaf {
            label: leaf_label(weights.weigh(root_counts)),
        },
    }];

    let split_for = |order: &[Vec<Entry>], ranges: &[(usize, usize)], depth: usize, counts| {
        if depth >= params.max_depth {
            return None;
        }
        let slices: Vec<&[Entry]> = order.iter().zip(ranges).map(|(o, &(a, b))| &o[a..b]).collect();
        search_split(set, &slices, counts, &cost, params)
    };

    let root_ranges: Vec<(usize, usize)> = order.iter().map(|o| (0, o.len())).collect();
    let mut frontier = vec![Frontier {
        node: 0,
        rows: (0, n),
        split: split_for(&order, &root_ranges, 0, root_counts),
        ranges: root_ranges,
        counts: root_counts,
    }];
    let mut leaves = 1;

    while leaves < params.max_leaves {
        // frontier is kept in node-id order, so strict > picks the earliest node on ties
        let mut pick: Option<usize> = None;
        for (i, f) in frontier.iter().enumerate() {
            if let Some(s) = f.split {
                if pick.is_none_or(|p| s.decrease > frontier[p].split.unwrap().decrease) {
                    pick = Some(i);
                }
            }
        }
        let Some(pick) = pick else { break };
        let leaf = frontier.remove(pick);
        let split = leaf.split.expect("picked a splittable leaf");
        let (start, end) = leaf.rows;

        let col = &set.columns[split.feature];
        for &p in &rows[start..end] {
            goes_left[p as usize] = col[p as usize] <= split.threshold;
        }
        let mid = start + partition_stable(&mut rows[start..end], |&p| goes_left[p as usize], &mut scratch);
        let mut left_ranges = Vec::with_capacity(order.len());
        let mut right_ranges = Vec::with_capacity(order.len());
        for (o, &(a, b)) in order.iter_mut().zip(&leaf.ranges) {
            let m = a + partition_stable(&mut o[a..b], |e| goes_left[e.pos as usize], &mut entry_scratch);
            left_ranges.push((a, m));
            right_ranges.push((m, b));
        }
        let depth = nodes[leaf.node].depth + 1;
        let left_counts = counts_of(&set.labels, &rows[start..mid]);
        let right_counts = [leaf.counts[0] - left_counts[0], leaf.counts[1] - left_counts[1]];

        let left_id = nodes.len();
        let right_id = left_id + 1;
        for (counts, len) in [(left_counts, mid - start), (right_counts, end - mid)] {
            let w = weights.weigh(counts);
            nodes.push(Node {
                depth,
                n_samples: len,
                class_counts: counts,
                weighted_counts: w,
                kind: NodeKind::Leaf { label: leaf_label(w) },
            });
        }
        nodes[leaf.node].kind = NodeKind::Internal {
            feature: split.feature,
            threshold: split.threshold,
            left: left_id,
            right: right_id,
        };
        leaves += 1;

        let left_split = split_for(&order, &left_ranges, depth, left_counts);
        let right_split = split_for(&order, &right_ranges, depth, right_counts);
        frontier.push(Frontier {
            node: left_id,
            rows: (start, mid),
            ranges: left_ranges,
            counts: left_counts,
            split: left_split,
        });
        frontier.push(Frontier {
            node: right_id,
            rows: (mid, end),
            ranges: right_ranges,
            counts: right_counts,
            split: right_split,
        });
    }

    Ok(Tree {
        n_features: set.n_features,
        nodes,
    })
}

impl Tree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Leaf { .. }))
            .count()
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let mut i = 0;
        loop {
            match &self.nodes[i].kind {
                NodeKind::Leaf { label } => return *label,
                NodeKind::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if row[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<u8>> {
        let rows: Vec<usize> = (0..x.n_rows()).collect();
        self.predict_rows(x, &rows)
    }

    pub fn predict_rows(&self, x: &Matrix, rows: &[usize]) -> Result<Vec<u8>> {
        if x.n_cols() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.n_cols(),
            });
        }
        Ok(rows.iter().map(|&r| self.predict_row(x.row(r))).collect())
    }

    /// Indented text dump, one node per line.
    pub fn dump(&self, column_names: Option<&[String]>) -> String {
        let mut out = String::new();
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            let node = &self.nodes[i];
            let indent = "  ".repeat(node.depth);
            let _ = write!(
                out,
                "{indent}#{i} n={} counts=[{}, {}]",
                node.n_samples, node.class_counts[0], node.class_counts[1]
            );
            match &node.kind {
                NodeKind::Leaf { label } => {
                    let _ = writeln!(out, " leaf -> {label}");
                }
                NodeKind::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    let name = column_names
                        .and_then(|c| c.get(*feature).cloned())
                        .unwrap_or_else(|| format!("x[{feature}]"));
                    let _ = writeln!(out, " {name} <= {threshold}");
                    stack.push(*right);
                    stack.push(*left);
                }
            }
        }
        out
    }
}
