//! Two-group comparison end to end.
//!
//! Each group is summarized by leave-one-out jackknife resampling: drop one
//! subject, re-run the whole pipeline, integrate the resulting Betti-0
//! curve. The two samples of areas are then compared with a Wilcoxon
//! rank-sum test. Run on matched null groups the test accepts; run on the
//! planted-dependency construction it rejects loudly.

use bettinet::{
    compare_groups, jackknife_curves, simulate_study1, simulate_study2, Result, SimConfig,
    WeightMode,
};

fn main() -> Result<()> {
    let cfg = SimConfig {
        seed: 4,
        ..SimConfig::default()
    };

    // Matched groups: same signal, group 2 differs only by tiny noise.
    let (x, y) = simulate_study1(&cfg)?;
    let null_result = compare_groups(&x, &y, WeightMode::Correlation, None)?;
    println!("matched null groups:");
    println!("{null_result}");
    assert!(null_result.p_value() > 0.05);

    // Planted dependency: group 2's nodes 1-5 form a tight cluster.
    let (x, y) = simulate_study2(&cfg)?;
    let planted_result = compare_groups(&x, &y, WeightMode::Correlation, None)?;
    println!("\nplanted dependency:");
    println!("{planted_result}");
    assert!(planted_result.p_value() < 0.001);

    // The replicate curves behind the test are available directly.
    let curves = jackknife_curves(&y, WeightMode::Correlation, 1.0)?;
    println!(
        "\n{} jackknife replicate curves for group 2; components at threshold 0.9:",
        curves.len()
    );
    let counts: Vec<usize> = curves.iter().map(|c| c.value_at(0.9)).collect();
    println!("  {counts:?}");
    println!("  (the planted 5-node cluster keeps every replicate below the node count)");
    Ok(())
}
