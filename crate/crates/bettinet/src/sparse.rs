//! Closed-form sparse correlations by soft-thresholding.
//!
//! For unit-norm centered columns `z_j`, the penalized regression of one
//! column on another,
//!
//! ```text
//! min over g of  ||z_j - g * z_k||^2 + 2 * lambda * |g|,
//! ```
//!
//! separates into independent scalar problems whose objective is
//! `(g - c)^2 + 2 * lambda * |g|` up to an additive constant, where `c` is
//! the sample correlation. The minimizer is the soft-thresholding of `c`:
//! shrink toward zero by `lambda`, snapping to exactly zero once
//! `|c| <= lambda`. The whole solution path over `lambda` is therefore
//! available without any iterative solver, and the set of surviving
//! (nonzero) coefficients is the graph obtained by keeping pairs with
//! `|c| > lambda`.

use crate::data::{fmt_g17, n_pairs, pair_index, NormalizedMatrix};
use crate::error::{Error, Result};

/// Soft-thresholding of a scalar: the exact minimizer of
/// `(g - c)^2 + 2 * lambda * |g|`.
///
/// Returns `c - lambda` when `c > lambda`, `c + lambda` when `c < -lambda`,
/// and exactly `0.0` when `|c| <= lambda` (ties shrink to zero). `lambda`
/// must be nonnegative.
pub fn soft_threshold(c: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(soft(c, lambda))
}

/// [`soft_threshold`] with the nonnegativity of `lambda` already checked.
#[inline]
fn soft(c: f64, lambda: f64) -> f64 {
    if c > lambda {
        c - lambda
    } else if c < -lambda {
        c + lambda
    } else {
        0.0
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_nan() || lambda < 0.0 {
        Err(Error::NegativeLambda(lambda))
    } else {
        Ok(())
    }
}

/// All pairwise soft-thresholded sample correlations at one sparsity level.
///
/// Symmetric with a zero diagonal; only the strict upper triangle is
/// stored. At `lambda = 0` the coefficients are the sample correlations
/// themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSolution {
    p: usize,
    lambda: f64,
    /// Signed coefficients for pairs `(0,1), (0,2), ..., (1,2), ...`.
    gamma: Vec<f64>,
}

impl SparseSolution {
    /// Number of nodes.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Sparsity level the solution was computed at.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Coefficient for the pair `(j, k)`; zero on the diagonal, mirrored
    /// across it.
    pub fn gamma(&self, j: usize, k: usize) -> f64 {
        assert!(j < self.p && k < self.p, "node index out of range");
        if j == k {
            return 0.0;
        }
        self.gamma[pair_index(self.p, j.min(k), j.max(k))]
    }

    /// Number of nonzero coefficients (over pairs `j < k`).
    pub fn support_size(&self) -> usize {
        self.gamma.iter().filter(|&&g| g != 0.0).count()
    }

    /// JSON export for debugging: the full symmetric coefficient matrix.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<f64>> = (0..self.p)
            .map(|j| (0..self.p).map(|k| self.gamma(j, k)).collect())
            .collect();
        serde_json::json!({
            "lambda": self.lambda,
            "p": self.p,
            "gamma": rows,
        })
    }
}

/// Solves the sparse-correlation problem for every node pair at once.
///
/// Each coefficient is the soft-thresholding of the pair's sample
/// correlation (clamped into `[-1, 1]` against rounding overshoot, so the
/// magnitudes agree exactly with correlation-mode edge weights).
pub fn sparse_correlation(z: &NormalizedMatrix, lambda: f64) -> Result<SparseSolution> {
    check_lambda(lambda)?;
    let p = z.n_nodes();
    let gram = z.gram();
    let mut gamma = Vec::with_capacity(n_pairs(p));
    for j in 0..p {
        for k in j + 1..p {
            let c = gram[(j, k)].clamp(-1.0, 1.0);
            gamma.push(soft(c, lambda));
        }
    }
    Ok(SparseSolution { p, lambda, gamma })
}

/// The graph of surviving coefficients: node pair `(j, k)` is an edge
/// exactly when its sparse coefficient is nonzero, i.e. when the absolute
/// sample correlation strictly exceeds `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportGraph {
    p: usize,
    adj: Vec<bool>,
}

impl SupportGraph {
    /// Number of nodes.
    pub fn p(&self) -> usize {
        self.p
    }

    /// True when `(j, k)` is an edge. The diagonal is never an edge.
    pub fn is_edge(&self, j: usize, k: usize) -> bool {
        assert!(j < self.p && k < self.p, "node index out of range");
        if j == k {
            return false;
        }
        self.adj[pair_index(self.p, j.min(k), j.max(k))]
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count()
    }

    /// Iterates over edges as pairs `j < k`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let p = self.p;
        (0..p)
            .flat_map(move |j| (j + 1..p).map(move |k| (j, k)))
            .zip(self.adj.iter())
            .filter(|(_, &e)| e)
            .map(|(pair, _)| pair)
    }
}

/// Reads the support graph off a sparse solution.
pub fn support_graph(solution: &SparseSolution) -> SupportGraph {
    SupportGraph {
        p: solution.p,
        adj: solution.gamma.iter().map(|&g| g != 0.0).collect(),
    }
}

/// Numeric reference minimizer of `(g - c)^2 + 2 * lambda * |g|` over
/// `[-2, 2]`, correct to about `1e-8`.
///
/// This exists to validate [`soft_threshold`] and deliberately shares no
/// code with it: a coarse grid scan brackets the minimum and a
/// golden-section search refines it. Test and diagnostic use only — the
/// pipeline never calls it.
pub fn oracle_minimize(c: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let objective = |g: f64| (g - c) * (g - c) + 2.0 * lambda * g.abs();

    // Grid scan: strict convexity means the true minimizer lies within one
    // step of the best grid point.
    let steps = 4000usize;
    let step = 4.0 / steps as f64;
    let mut best_i = 0usize;
    let mut best_f = f64::INFINITY;
    for i in 0..=steps {
        let g = -2.0 + i as f64 * step;
        let f = objective(g);
        if f < best_f {
            best_f = f;
            best_i = i;
        }
    }
    let lo = -2.0 + best_i.saturating_sub(1) as f64 * step;
    let hi = (-2.0 + (best_i + 1) as f64 * step).min(2.0);
    Ok(golden_section_min(lo, hi, objective))
}

/// Golden-section search for the minimum of a unimodal function, run down
/// to an interval of width `1e-10`.
fn golden_section_min(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-10 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Renders the coefficient matrix as CSV (full square, 17 significant
/// digits), matching the edge-weight export format.
pub fn solution_to_csv_string(solution: &SparseSolution) -> String {
    let mut out = String::new();
    for j in 0..solution.p() {
        let line: Vec<String> = (0..solution.p())
            .map(|k| fmt_g17(solution.gamma(j, k)))
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{normalize_columns, DataMatrix};
    use ndarray::Array2;

    #[test]
    fn soft_threshold_cases() {
        assert_eq!(soft_threshold(0.8, 0.3).unwrap(), 0.5);
        assert_eq!(soft_threshold(0.2, 0.3).unwrap(), 0.0);
        assert_eq!(soft_threshold(-0.8, 0.3).unwrap(), -0.5);
        assert_eq!(soft_threshold(0.8, 0.0).unwrap(), 0.8);
        assert_eq!(soft_threshold(-0.8, 0.0).unwrap(), -0.8);
        // |c| == lambda is inside the dead zone.
        assert_eq!(soft_threshold(0.3, 0.3).unwrap(), 0.0);
        assert_eq!(soft_threshold(-0.3, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn soft_threshold_rejects_negative_lambda() {
        assert!(matches!(
            soft_threshold(0.5, -0.1),
            Err(Error::NegativeLambda(_))
        ));
        assert!(soft_threshold(0.5, f64::NAN).is_err());
    }

    #[test]
    fn oracle_agrees_on_hand_cases() {
        assert!((oracle_minimize(0.8, 0.3).unwrap() - 0.5).abs() <= 1e-6);
        assert!(oracle_minimize(0.2, 0.3).unwrap().abs() <= 1e-6);
        assert!((oracle_minimize(-0.8, 0.3).unwrap() + 0.5).abs() <= 1e-6);
        assert!(oracle_minimize(0.0, 0.5).unwrap().abs() <= 1e-6);
        assert!((oracle_minimize(0.97, 0.0).unwrap() - 0.97).abs() <= 1e-6);
    }

    fn example_normalized() -> NormalizedMatrix {
        let values = Array2::from_shape_vec(
            (5, 4),
            vec![
                0.3, -4.0, 7.5, 0.29, //
                1.9, 2.2, -0.4, 1.95, //
                -2.7, 8.8, 3.3, -2.64, //
                0.0, 1.0, 2.0, 0.08, //
                5.5, -3.1, 0.2, 5.41,
            ],
        )
        .unwrap();
        normalize_columns(&DataMatrix::new(values).unwrap()).unwrap()
    }

    #[test]
    fn lambda_zero_reproduces_sample_correlations() {
        let z = example_normalized();
        let sol = sparse_correlation(&z, 0.0).unwrap();
        let gram = z.values().t().dot(z.values());
        for j in 0..4 {
            for k in 0..4 {
                if j != k {
                    assert!((sol.gamma(j, k) - gram[(j, k)]).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn lambda_at_or_above_max_kills_everything() {
        let z = example_normalized();
        let sol = sparse_correlation(&z, 1.0).unwrap();
        assert_eq!(sol.support_size(), 0);
        assert_eq!(support_graph(&sol).edge_count(), 0);
    }

    #[test]
    fn support_is_strict_threshold_on_correlations() {
        let z = example_normalized();
        let gram = z.gram();
        for &lambda in &[0.0, 0.1, 0.3, 0.5, 0.9, 0.99] {
            let g = support_graph(&sparse_correlation(&z, lambda).unwrap());
            for j in 0..4 {
                for k in j + 1..4 {
                    let expected = gram[(j, k)].clamp(-1.0, 1.0).abs() > lambda;
                    assert_eq!(g.is_edge(j, k), expected, "pair ({j},{k}) at {lambda}");
                }
            }
        }
    }

    #[test]
    fn shrinkage_and_sign_consistency() {
        let z = example_normalized();
        let gram = z.gram();
        for &lambda in &[0.05, 0.2, 0.6] {
            let sol = sparse_correlation(&z, lambda).unwrap();
            for j in 0..4 {
                for k in j + 1..4 {
                    let c = gram[(j, k)].clamp(-1.0, 1.0);
                    let g = sol.gamma(j, k);
                    assert!(g.abs() <= (c.abs() - lambda).max(0.0) + 1e-12);
                    assert!(g == 0.0 || g.signum() == c.signum());
                }
            }
        }
    }

    #[test]
    fn support_nests_as_lambda_grows() {
        let z = example_normalized();
        let lambdas = [0.0, 0.1, 0.25, 0.4, 0.7, 1.0];
        let supports: Vec<SupportGraph> = lambdas
            .iter()
            .map(|&l| support_graph(&sparse_correlation(&z, l).unwrap()))
            .collect();
        for w in supports.windows(2) {
            for j in 0..4 {
                for k in j + 1..4 {
                    assert!(
                        !w[1].is_edge(j, k) || w[0].is_edge(j, k),
                        "support must shrink monotonically"
                    );
                }
            }
        }
    }

    #[test]
    fn thresholding_never_increases_the_objective() {
        // Summed objective over all pairs, including the penalty.
        let z = example_normalized();
        let gram = z.gram();
        for &lambda in &[0.05, 0.3, 0.8] {
            let sol = sparse_correlation(&z, lambda).unwrap();
            let mut f_soft = 0.0;
            let mut f_raw = 0.0;
            for j in 0..4 {
                for k in j + 1..4 {
                    let c = gram[(j, k)].clamp(-1.0, 1.0);
                    let g = sol.gamma(j, k);
                    f_soft += (g - c) * (g - c) + 2.0 * lambda * g.abs();
                    f_raw += 2.0 * lambda * c.abs();
                }
            }
            assert!(
                f_soft <= f_raw + 1e-12,
                "lambda {lambda}: {f_soft} > {f_raw}"
            );
        }
    }

    #[test]
    fn solution_json_shape() {
        let z = example_normalized();
        let sol = sparse_correlation(&z, 0.4).unwrap();
        let json = sol.to_json();
        assert_eq!(json["p"], 4);
        assert!((json["lambda"].as_f64().unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(json["gamma"].as_array().unwrap().len(), 4);
        assert_eq!(json["gamma"][0][0], 0.0);
    }
}
