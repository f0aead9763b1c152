//! Closed-form sparse correlations.
//!
//! The sparsity penalty acts on each correlation independently, so the
//! penalized problem has an analytic minimizer: shrink the correlation
//! toward zero by the penalty and clip at zero. This example checks the
//! closed form against a brute-force numeric minimizer and shows how the
//! support (the set of surviving pairs) shrinks as the penalty grows.

use bettinet::{
    normalize_columns, oracle_minimize, soft_threshold, sparse_correlation, support_graph,
    DataMatrix, Result,
};
use ndarray::array;

fn main() -> Result<()> {
    // The scalar rule first: shrink toward zero, clip at zero.
    println!("soft thresholding vs brute-force minimization:");
    println!(
        "{:>8} {:>8} {:>12} {:>12}",
        "c", "lambda", "closed form", "numeric"
    );
    for (c, lambda) in [(0.8, 0.3), (-0.8, 0.3), (0.25, 0.3), (0.3, 0.3), (0.9, 0.0)] {
        let closed = soft_threshold(c, lambda)?;
        let numeric = oracle_minimize(c, lambda)?;
        println!("{c:>8.2} {lambda:>8.2} {closed:>12.6} {numeric:>12.6}");
        assert!((closed - numeric).abs() <= 1e-6);
    }

    // Now on a small dataset: six subjects, four nodes. Columns 0 and 1
    // track each other closely; column 3 is column 0 with tiny jitter.
    let data = DataMatrix::new(array![
        [1.0, 1.1, -0.4, 1.02],
        [2.0, 1.9, 0.3, 2.01],
        [3.0, 3.2, -0.1, 2.98],
        [4.0, 3.8, 0.9, 4.03],
        [5.0, 5.1, 0.2, 4.99],
        [6.0, 6.1, -0.6, 6.01],
    ])?;
    let z = normalize_columns(&data)?;

    println!("\nsupport size as the penalty grows:");
    for lambda in [0.0, 0.2, 0.5, 0.9, 0.99, 1.0] {
        let solution = sparse_correlation(&z, lambda)?;
        let support = support_graph(&solution);
        let edges: Vec<String> = support.edges().map(|(j, k)| format!("({j},{k})")).collect();
        println!(
            "  lambda = {lambda:<5} {} pairs survive: {}",
            support.edge_count(),
            if edges.is_empty() {
                "-".to_string()
            } else {
                edges.join(" ")
            }
        );
    }

    // Supports are nested: raising the penalty can only remove pairs.
    let loose = support_graph(&sparse_correlation(&z, 0.2)?);
    let tight = support_graph(&sparse_correlation(&z, 0.7)?);
    for (j, k) in tight.edges() {
        assert!(loose.is_edge(j, k), "support must shrink monotonically");
    }
    println!("\nsupport at lambda = 0.7 is contained in support at lambda = 0.2, as it must be");
    Ok(())
}
