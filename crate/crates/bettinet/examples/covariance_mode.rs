//! Covariance weights: same pipeline, scale retained.
//!
//! Correlation weights live in [0, 1], so their curves share the domain
//! [0, 1]. Covariance weights keep each pair's scale, so the threshold
//! domain must stretch to the largest weight instead. This example runs
//! both modes on one dataset where two columns co-vary strongly but with
//! very different magnitudes.

use bettinet::{
    auc, betti_curve, build_filtration, edge_weights, normalize_columns, DataMatrix, Result,
    WeightMode,
};
use ndarray::array;

fn main() -> Result<()> {
    // Column 1 is 10x column 0 plus jitter; column 2 is small independent
    // noise. Correlation sees columns 0 and 1 as near-identical;
    // covariance also sees their large shared scale.
    let data = DataMatrix::new(array![
        [1.0, 10.2, 0.03],
        [2.0, 19.8, -0.01],
        [3.0, 30.1, 0.04],
        [4.0, 40.3, -0.02],
        [5.0, 49.9, 0.01],
        [6.0, 59.7, -0.03],
    ])?;
    let z = normalize_columns(&data)?;

    let cor = edge_weights(&z, WeightMode::Correlation);
    let cov = edge_weights(&z, WeightMode::Covariance);

    println!("pairwise weights (correlation vs covariance):");
    for (j, k) in [(0, 1), (0, 2), (1, 2)] {
        println!(
            "  ({j},{k}): correlation {:>8.4}   covariance {:>10.4}",
            cor.weight(j, k),
            cov.weight(j, k)
        );
    }

    // Correlation curves integrate over [0, 1]; covariance curves over
    // [0, max weight].
    let cor_curve = betti_curve(&build_filtration(&cor), 1.0)?;
    let cov_domain = cov.max_weight();
    let cov_curve = betti_curve(&build_filtration(&cov), cov_domain)?;

    println!("\ncorrelation curve over [0, 1]:");
    for &(lambda, beta) in cor_curve.breakpoints() {
        println!("  ({lambda:.4}, {beta})");
    }
    println!("area = {:.4}", auc(&cor_curve));

    println!("\ncovariance curve over [0, {cov_domain:.4}]:");
    for &(lambda, beta) in cov_curve.breakpoints() {
        println!("  ({lambda:.4}, {beta})");
    }
    println!("area = {:.4}", auc(&cov_curve));

    // Both modes order the pairs the same way here, so the curves have the
    // same shape — only the threshold axis is scaled differently.
    assert_eq!(cor_curve.breakpoints().len(), cov_curve.breakpoints().len());
    println!("\nsame component structure, different threshold scale");
    Ok(())
}
