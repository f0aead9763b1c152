//! Graph filtrations over edge weights and their Betti-0 curves.
//!
//! Thresholding a weighted network at level `lambda` keeps the edges whose
//! weight strictly exceeds `lambda`. Sweeping `lambda` from 0 upward gives a
//! nested family of graphs — a filtration — and the graph only changes when
//! `lambda` crosses one of the distinct edge weights. With `q` distinct
//! nonzero weights the filtration therefore has exactly `q + 1` levels, and
//! that is the finest (maximal) filtration the weights admit: no choice of
//! thresholds can produce more distinct graphs.
//!
//! The Betti-0 curve records the number of connected components at every
//! level. It starts at the component count of the full graph, is
//! non-decreasing and right-continuous in `lambda`, and ends at `p` (every
//! node isolated) once `lambda` passes the largest weight. Components are
//! counted with a union-find fed edges in descending weight order, so the
//! whole curve costs one sort plus near-linear merge work.

use crate::data::{fmt_g17, EdgeWeights};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// The maximal threshold filtration of a weighted network.
///
/// `values` holds the distinct nonzero edge weights in strictly increasing
/// order; together with level 0 they index the `values.len() + 1` distinct
/// graphs in the filtration. Equal weights collapse into a single value
/// (compared exactly, bit for bit — the weights come from one deterministic
/// computation, so no epsilon is involved). Zero-weight pairs are never
/// edges, so they do not contribute a level.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    p: usize,
    values: Vec<f64>,
    /// All positive-weight edges, sorted by ascending `(weight, j, k)`.
    edges: Vec<(usize, usize, f64)>,
}

impl Filtration {
    /// Number of nodes.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Distinct nonzero edge weights, strictly increasing.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of distinct graphs in the filtration: one per distinct
    /// nonzero weight, plus the graph at level 0.
    pub fn levels(&self) -> usize {
        self.values.len() + 1
    }

    /// Positive-weight edges sorted by ascending weight.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// One filtration value per line, 17 significant digits.
    pub fn values_to_csv_string(&self) -> String {
        let mut out = String::new();
        for &v in &self.values {
            out.push_str(&fmt_g17(v));
            out.push('\n');
        }
        out
    }
}

/// Builds the maximal filtration from an edge-weight matrix.
pub fn build_filtration(w: &EdgeWeights) -> Filtration {
    let mut edges: Vec<(usize, usize, f64)> =
        w.pairs().filter(|&(_, _, weight)| weight > 0.0).collect();
    edges.sort_unstable_by(|a, b| {
        a.2.partial_cmp(&b.2)
            .expect("weights are finite")
            .then(a.0.cmp(&b.0))
            .then(a.1.cmp(&b.1))
    });
    let mut values: Vec<f64> = Vec::new();
    for &(_, _, weight) in &edges {
        if values.last() != Some(&weight) {
            values.push(weight);
        }
    }
    Filtration {
        p: w.p(),
        values,
        edges,
    }
}

/// Number of connected components after thresholding at `lambda`.
///
/// Keeps edges with weight strictly greater than `lambda`; zero-weight
/// pairs are never edges (so a negative `lambda` behaves like `lambda = 0`).
/// Isolated nodes count as components.
pub fn betti0_at(w: &EdgeWeights, lambda: f64) -> usize {
    let mut uf = UnionFind::new(w.p());
    for (j, k, weight) in w.pairs() {
        if weight > lambda && weight > 0.0 {
            uf.union(j, k);
        }
    }
    uf.components()
}

/// Independent component counter used to cross-check [`betti0_at`]: builds
/// adjacency lists and runs an iterative depth-first search. Shares no code
/// with the union-find path. Test and diagnostic use only.
pub fn dfs_component_oracle(w: &EdgeWeights, lambda: f64) -> usize {
    let p = w.p();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); p];
    for (j, k, weight) in w.pairs() {
        if weight > lambda && weight > 0.0 {
            adjacency[j].push(k);
            adjacency[k].push(j);
        }
    }
    let mut visited = vec![false; p];
    let mut stack = Vec::new();
    let mut components = 0;
    for start in 0..p {
        if visited[start] {
            continue;
        }
        components += 1;
        visited[start] = true;
        stack.push(start);
        while let Some(node) = stack.pop() {
            for &next in &adjacency[node] {
                if !visited[next] {
                    visited[next] = true;
                    stack.push(next);
                }
            }
        }
    }
    components
}

/// A Betti-0 curve: components of the thresholded graph as a right-
/// continuous step function of the threshold.
///
/// `breakpoints` lists `(lambda, beta0)` pairs with the first at
/// `lambda = 0`; the curve holds each value on `[lambda_r, lambda_r+1)` and
/// the last value out to `domain_max`. Values are non-decreasing and the
/// final one is the node count `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct BettiCurve {
    breakpoints: Vec<(f64, usize)>,
    domain_max: f64,
}

impl BettiCurve {
    /// Builds a curve from raw breakpoints, validating the step-function
    /// shape: first breakpoint at 0, strictly increasing finite thresholds,
    /// non-decreasing positive values, and a finite domain that covers the
    /// last breakpoint.
    pub fn from_breakpoints(breakpoints: Vec<(f64, usize)>, domain_max: f64) -> Result<Self> {
        let Some(&(first_lambda, _)) = breakpoints.first() else {
            return Err(Error::InvalidCurve("no breakpoints".into()));
        };
        if first_lambda != 0.0 {
            return Err(Error::InvalidCurve(format!(
                "first breakpoint must sit at 0, got {first_lambda}"
            )));
        }
        for pair in breakpoints.windows(2) {
            let ((l0, b0), (l1, b1)) = (pair[0], pair[1]);
            if !l1.is_finite() || l1 <= l0 {
                return Err(Error::InvalidCurve(format!(
                    "thresholds must strictly increase ({l0} then {l1})"
                )));
            }
            if b1 < b0 {
                return Err(Error::InvalidCurve(format!(
                    "component counts must not decrease ({b0} then {b1})"
                )));
            }
        }
        if breakpoints.iter().any(|&(_, b)| b == 0) {
            return Err(Error::InvalidCurve("component count of 0".into()));
        }
        let last = breakpoints.last().expect("nonempty").0;
        if !domain_max.is_finite() || domain_max < last {
            return Err(Error::DomainTooSmall {
                domain_max,
                max_weight: last,
            });
        }
        Ok(BettiCurve {
            breakpoints,
            domain_max,
        })
    }

    /// The `(lambda, beta0)` breakpoints, first at `lambda = 0`.
    pub fn breakpoints(&self) -> &[(f64, usize)] {
        &self.breakpoints
    }

    /// Right edge of the curve's domain.
    pub fn domain_max(&self) -> f64 {
        self.domain_max
    }

    /// Final component count (the node count for curves built from a
    /// filtration).
    pub fn terminal_value(&self) -> usize {
        self.breakpoints.last().expect("nonempty").1
    }

    /// Evaluates the step function at `lambda`: the value of the largest
    /// breakpoint at or below it (right-continuous, so exactly at a
    /// breakpoint the edge is already gone). Thresholds below 0 clamp to
    /// the value at 0; thresholds past `domain_max` extend the last step.
    pub fn value_at(&self, lambda: f64) -> usize {
        let idx = self.breakpoints.partition_point(|&(l, _)| l <= lambda);
        if idx == 0 {
            self.breakpoints[0].1
        } else {
            self.breakpoints[idx - 1].1
        }
    }

    /// CSV export with a `lambda,beta0` header and one breakpoint per line.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("lambda,beta0\n");
        for &(lambda, beta) in &self.breakpoints {
            out.push_str(&fmt_g17(lambda));
            out.push(',');
            out.push_str(&beta.to_string());
            out.push('\n');
        }
        out
    }

    /// JSON export: `{"domain_max": ..., "breakpoints": [[lambda, beta0], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let bps: Vec<serde_json::Value> = self
            .breakpoints
            .iter()
            .map(|&(l, b)| serde_json::json!([l, b]))
            .collect();
        serde_json::json!({
            "domain_max": self.domain_max,
            "breakpoints": bps,
        })
    }
}

/// Computes the Betti-0 curve of a filtration.
///
/// Edges are inserted in descending weight order into a union-find, so each
/// level's component count is read off just before its edges arrive:
/// at level `values[r]` the surviving edges are exactly those with weight
/// strictly greater than `values[r]`. `domain_max` must cover the largest
/// weight (1 is the natural domain for correlation weights; the largest
/// weight for covariances).
pub fn betti_curve(f: &Filtration, domain_max: f64) -> Result<BettiCurve> {
    if f.p == 0 {
        return Err(Error::InvalidConfig(
            "cannot build a Betti curve over zero nodes".into(),
        ));
    }
    let max_weight = f.values.last().copied().unwrap_or(0.0);
    if !domain_max.is_finite() || domain_max < max_weight {
        return Err(Error::DomainTooSmall {
            domain_max,
            max_weight,
        });
    }
    let mut uf = UnionFind::new(f.p);
    let mut reversed: Vec<(f64, usize)> = Vec::with_capacity(f.levels());
    let mut edge_idx = f.edges.len();
    for &value in f.values.iter().rev() {
        reversed.push((value, uf.components()));
        while edge_idx > 0 && f.edges[edge_idx - 1].2 == value {
            let (a, b, _) = f.edges[edge_idx - 1];
            uf.union(a, b);
            edge_idx -= 1;
        }
    }
    debug_assert_eq!(edge_idx, 0, "every edge belongs to some level");
    reversed.push((0.0, uf.components()));
    reversed.reverse();
    Ok(BettiCurve {
        breakpoints: reversed,
        domain_max,
    })
}

/// Closed-form Betti-0 curve for a tree with unique positive edge weights.
///
/// Removing a tree edge always splits exactly one component, so the curve
/// depends only on the sorted weights, not the tree's shape: it steps from
/// `(0, 1)` through `(w_(r), r + 1)` for the sorted weights up to
/// `(w_(p-1), p)`. The caller asserts the `p - 1` weights come from a tree;
/// uniqueness and positivity are checked here. Reference implementation for
/// validating [`betti_curve`] — the pipeline never calls it.
pub fn tree_betti_oracle(tree_weights: &[f64], domain_max: f64) -> Result<BettiCurve> {
    for &w in tree_weights {
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::NotATree(format!(
                "edge weight {w} is not strictly positive"
            )));
        }
    }
    let mut sorted = tree_weights.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("weights are finite"));
    if sorted.windows(2).any(|pair| pair[0] == pair[1]) {
        return Err(Error::NotATree("edge weights must be unique".into()));
    }
    let mut breakpoints = Vec::with_capacity(sorted.len() + 1);
    breakpoints.push((0.0, 1));
    for (r, &w) in sorted.iter().enumerate() {
        breakpoints.push((w, r + 2));
    }
    BettiCurve::from_breakpoints(breakpoints, domain_max)
}
