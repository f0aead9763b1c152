//! Betti-0 curves over sparse-correlation network filtrations.
//!
//! `bettinet` turns a subjects-by-nodes data matrix into a weighted network,
//! thresholds it across every sparsity level at once, and summarizes the
//! result as a Betti-0 curve: the number of connected components as a
//! function of the threshold. Because the underlying sparse regression has a
//! closed-form soft-thresholding solution, the entire solution path is
//! available without iterative optimization, and the graph filtration it
//! induces is computed exactly.
//!
//! The crate is organized around a small pipeline:
//!
//! 1. [`data`] — load a numeric CSV, normalize columns, compute pairwise
//!    edge weights (absolute correlations or covariances).
//! 2. [`sparse`] — closed-form soft-thresholded sparse correlations and
//!    their support graphs.
//! 3. [`filtration`] — the maximal graph filtration over the unique edge
//!    weights and the Betti-0 curve computed with a union-find.
//! 4. [`inference`] — leave-one-out jackknife over subjects, area under the
//!    Betti-0 curve, and a Wilcoxon rank-sum comparison of two groups.
//! 5. [`sim`] — seeded synthetic data generators for calibration studies.
//! 6. [`plot`] / [`cli`] — SVG step plots and the file-emitting commands
//!    behind the `bettinet` binary.
//!
//! The `examples/` directory is the best starting point; each example is a
//! runnable walkthrough of one capability:
//!
//! ```text
//! cargo run --example soft_thresholding    # closed-form sparse correlations
//! cargo run --example filtration_basics    # weights -> filtration -> curve
//! cargo run --example tree_curves          # trees have a closed-form curve
//! cargo run --example correlation_network  # full pipeline on synthetic data
//! cargo run --example covariance_mode      # same pipeline on covariances
//! cargo run --example jackknife_inference  # two-group comparison end to end
//! cargo run --example simulate_datasets    # write calibration CSVs to disk
//! ```
//!
//! # Quick start
//!
//! ```
//! use bettinet::{betti_curve, build_filtration, edge_weights, normalize_columns};
//! use bettinet::{DataMatrix, WeightMode};
//! use ndarray::array;
//!
//! // Four subjects, three nodes.
//! let x = DataMatrix::new(array![
//!     [1.0, 2.0, 0.5],
//!     [2.0, 1.0, 0.9],
//!     [3.0, 4.0, 0.1],
//!     [4.0, 3.0, 0.7],
//! ])
//! .unwrap();
//!
//! let z = normalize_columns(&x).unwrap();
//! let w = edge_weights(&z, WeightMode::Correlation);
//! let filtration = build_filtration(&w);
//! let curve = betti_curve(&filtration, 1.0).unwrap();
//!
//! // One component at threshold 0, all nodes isolated past the largest weight.
//! assert_eq!(curve.value_at(0.0), 1);
//! assert_eq!(curve.value_at(1.0), 3);
//! ```

pub mod cli;
pub mod data;
mod error;
pub mod filtration;
pub mod inference;
pub mod plot;
pub mod sim;
pub mod sparse;
pub mod union_find;

pub use data::{edge_weights, load_csv, normalize_columns, parse_csv};
pub use data::{DataMatrix, EdgeWeights, NormalizedMatrix, WeightMode};
pub use error::{Error, Result};
pub use filtration::{
    betti0_at, betti_curve, build_filtration, dfs_component_oracle, tree_betti_oracle,
};
pub use filtration::{BettiCurve, Filtration};
pub use inference::{
    auc, compare_groups, compare_groups_detailed, jackknife_curves, rank_sum_test,
};
pub use inference::{AucSample, GroupComparison, GroupComparisonResult, PValueMethod};
pub use sim::{random_tree, simulate_study1, simulate_study2, SimConfig, SimRng, RNG_IDENTITY};
pub use sparse::{oracle_minimize, soft_threshold, sparse_correlation, support_graph};
pub use sparse::{SparseSolution, SupportGraph};
