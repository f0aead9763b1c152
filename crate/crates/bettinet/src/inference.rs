//! Two-group inference on Betti-0 curves.
//!
//! The null hypothesis is that two groups share the same integral of the
//! Betti-0 curve over the threshold domain. Each group is summarized by
//! leave-one-out jackknife resampling: drop one subject, re-run the whole
//! pipeline (normalize, weights, filtration, curve), and integrate. The two
//! resulting samples of areas are compared with a Wilcoxon rank-sum test —
//! exact when a sample is small enough to enumerate the null distribution,
//! a tie-corrected normal approximation otherwise.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::data::{edge_weights, normalize_columns, DataMatrix, EdgeWeights, WeightMode};
use crate::error::{Error, Result};
use crate::filtration::{betti_curve, build_filtration, BettiCurve};

/// Largest `min(n, m)` for which the exact rank-sum null distribution is
/// enumerated.
pub const EXACT_CUTOFF: usize = 10;

/// Largest pooled sample size for which exact enumeration is attempted;
/// beyond this the count table would be wastefully large, and the normal
/// approximation is already excellent.
pub const EXACT_POOLED_LIMIT: usize = 500;

/// Exact area under a Betti-0 curve over `[0, domain_max]`.
///
/// The curve is a step function, so the integral is the exact sum of
/// `value * segment width` over its breakpoint segments — no quadrature
/// grid is involved.
pub fn auc(curve: &BettiCurve) -> f64 {
    let bps = curve.breakpoints();
    let mut total = 0.0;
    for pair in bps.windows(2) {
        total += pair[0].1 as f64 * (pair[1].0 - pair[0].0);
    }
    let &(last_lambda, last_beta) = bps.last().expect("curves have breakpoints");
    total + last_beta as f64 * (curve.domain_max() - last_lambda)
}

/// Per-replicate edge weights for the leave-one-out jackknife: replicate
/// `l` is the full pipeline run on the matrix with subject `l` removed.
pub(crate) fn jackknife_weights(x: &DataMatrix, mode: WeightMode) -> Result<Vec<EdgeWeights>> {
    let n = x.n_subjects();
    if n < 3 {
        return Err(Error::GroupTooSmall { got: n, min: 3 });
    }
    if n == 3 {
        log::warn!(
            "jackknife over 3 subjects: every replicate has 2 rows, so all absolute \
             correlations are exactly 1 and the curves are degenerate; \
             use at least 4 subjects for meaningful inference"
        );
    }
    (0..n)
        .map(|l| {
            let z = normalize_columns(&x.drop_row(l))?;
            Ok(edge_weights(&z, mode))
        })
        .collect()
}

/// Leave-one-out jackknife Betti-0 curves, one per subject.
///
/// Each replicate drops one subject and re-runs normalization, edge
/// weights, filtration, and the curve from scratch. Requires at least three
/// subjects; at exactly three a warning is logged because the replicate
/// curves are degenerate (two centered rows always correlate perfectly).
pub fn jackknife_curves(
    x: &DataMatrix,
    mode: WeightMode,
    domain_max: f64,
) -> Result<Vec<BettiCurve>> {
    jackknife_weights(x, mode)?
        .iter()
        .map(|w| betti_curve(&build_filtration(w), domain_max))
        .collect()
}

/// A group's jackknife sample of curve areas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AucSample {
    label: String,
    domain_max: f64,
    areas: Vec<f64>,
}

impl AucSample {
    /// Bundles a sample of areas under a label (e.g. `"group1"`).
    pub fn new(label: impl Into<String>, areas: Vec<f64>, domain_max: f64) -> Self {
        AucSample {
            label: label.into(),
            domain_max,
            areas,
        }
    }

    /// Group label.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// The replicate areas.
    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    /// Domain the curves were integrated over.
    pub fn domain_max(&self) -> f64 {
        self.domain_max
    }

    fn mean(&self) -> f64 {
        self.areas.iter().sum::<f64>() / self.areas.len() as f64
    }
}

/// How the rank-sum p-value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PValueMethod {
    /// Exact enumeration of the null rank-sum distribution.
    ExactEnumeration,
    /// Normal approximation with continuity correction and tie-corrected
    /// variance.
    NormalApproximation,
}

/// Outcome of a two-group comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupComparisonResult {
    auc1: AucSample,
    auc2: AucSample,
    statistic: f64,
    p_value: f64,
    method: PValueMethod,
}

impl GroupComparisonResult {
    /// First group's area sample.
    pub fn auc1(&self) -> &AucSample {
        &self.auc1
    }

    /// Second group's area sample.
    pub fn auc2(&self) -> &AucSample {
        &self.auc2
    }

    /// Rank-sum statistic: the sum of the first group's (mid)ranks in the
    /// pooled sample.
    pub fn statistic(&self) -> f64 {
        self.statistic
    }

    /// Two-sided p-value, always in `(0, 1]`.
    pub fn p_value(&self) -> f64 {
        self.p_value
    }

    /// Whether the p-value came from exact enumeration or the normal
    /// approximation.
    pub fn method(&self) -> PValueMethod {
        self.method
    }

    /// JSON export:
    /// `{"p_value", "statistic", "method", "auc1", "auc2"}` with the two
    /// area samples as arrays.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p_value": self.p_value,
            "statistic": self.statistic,
            "method": match self.method {
                PValueMethod::ExactEnumeration => "ExactEnumeration",
                PValueMethod::NormalApproximation => "NormalApproximation",
            },
            "auc1": self.auc1.areas,
            "auc2": self.auc2.areas,
        })
    }
}

impl std::fmt::Display for GroupComparisonResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{}: {} replicates, mean area {:.6}",
            self.auc1.label,
            self.auc1.areas.len(),
            self.auc1.mean()
        )?;
        writeln!(
            f,
            "{}: {} replicates, mean area {:.6}",
            self.auc2.label,
            self.auc2.areas.len(),
            self.auc2.mean()
        )?;
        writeln!(
            f,
            "rank-sum statistic W = {} ({} ranks)",
            self.statistic, self.auc1.label
        )?;
        write!(
            f,
            "two-sided p = {:.6e} ({})",
            self.p_value,
            match self.method {
                PValueMethod::ExactEnumeration => "exact enumeration",
                PValueMethod::NormalApproximation => "normal approximation",
            }
        )
    }
}

/// Midranks of the pooled sample plus the tie diagnostics the test needs:
/// the rank-sum of the first sample, whether any tie occurred, and the tie
/// correction term `sum(t^3 - t)` over tie runs.
fn pooled_midranks(a: &[f64], b: &[f64]) -> (f64, bool, f64) {
    let mut pooled: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    pooled.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("areas are finite"));

    let mut w = 0.0;
    let mut any_tie = false;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        let run = (j - i) as f64;
        if j - i > 1 {
            any_tie = true;
            tie_term += run * run * run - run;
        }
        // Ranks are 1-based; a run occupying positions i+1..=j gets their mean.
        let midrank = (i + 1 + j) as f64 / 2.0;
        for item in &pooled[i..j] {
            if item.1 {
                w += midrank;
            }
        }
        i = j;
    }
    (w, any_tie, tie_term)
}

/// Exact two-sided rank-sum p-value as an integer fraction.
///
/// For samples of size `n` and `m` with no ties, the first sample's ranks
/// are an `n`-subset of `1..=n+m` chosen uniformly under the null. This
/// counts, by dynamic programming over subset sums, how many subsets have a
/// rank sum at most / at least `w`, and returns
/// `(min(2 * min(count_le, count_ge), total), total)` — the two-sided
/// p-value before any floating-point rounding. Public so validation suites
/// can compare it against brute-force enumeration.
pub fn exact_rank_sum_fraction(n: usize, m: usize, w: u64) -> (u128, u128) {
    let big_n = n + m;
    let max_sum: usize = (big_n - n + 1..=big_n).sum();
    let min_sum: usize = (1..=n).sum();
    // dp[k][s]: number of k-subsets of the ranks seen so far with sum s.
    let mut dp = vec![vec![0u128; max_sum + 1]; n + 1];
    dp[0][0] = 1;
    for rank in 1..=big_n {
        for k in (1..=n.min(rank)).rev() {
            for s in (rank..=max_sum).rev() {
                let add = dp[k - 1][s - rank];
                if add != 0 {
                    dp[k][s] += add;
                }
            }
        }
    }
    let counts = &dp[n];
    let total: u128 = counts.iter().sum();
    let w = (w as usize).clamp(min_sum, max_sum);
    let count_le: u128 = counts[..=w].iter().sum();
    let count_ge: u128 = counts[w..].iter().sum();
    let numerator = (2 * count_le.min(count_ge)).min(total);
    (numerator, total)
}

/// Normal-approximation two-sided p-value with continuity correction and
/// tie-corrected variance. Returns 1 when the variance degenerates (all
/// pooled values tied).
fn normal_approx_p(w: f64, n: usize, m: usize, tie_term: f64) -> f64 {
    let (n_f, m_f) = (n as f64, m as f64);
    let big_n = n_f + m_f;
    let mean = n_f * (big_n + 1.0) / 2.0;
    let variance = n_f * m_f / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    if variance <= 0.0 {
        return 1.0;
    }
    let z = ((w - mean).abs() - 0.5).max(0.0) / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * normal.sf(z)).clamp(f64::MIN_POSITIVE, 1.0)
}

/// Wilcoxon rank-sum test between two area samples.
///
/// The statistic is the sum of the first sample's midranks in the pooled
/// ordering. With no ties and `min(n, m) <= 10` (and a pooled size the
/// count table can afford), the p-value is exact; otherwise it uses the
/// normal approximation with continuity correction and tie-corrected
/// variance. The two-sided p-value always lands in `(0, 1]`.
pub fn rank_sum_test(a: &AucSample, b: &AucSample) -> Result<GroupComparisonResult> {
    let (n, m) = (a.areas.len(), b.areas.len());
    if n == 0 || m == 0 {
        return Err(Error::EmptySample);
    }
    let (w, any_tie, tie_term) = pooled_midranks(&a.areas, &b.areas);
    let exact_applies = !any_tie && n.min(m) <= EXACT_CUTOFF && n + m <= EXACT_POOLED_LIMIT;
    let (p_value, method) = if exact_applies {
        // Tie-free midranks are integers, so the statistic is integral.
        let (num, den) = exact_rank_sum_fraction(n, m, w.round() as u64);
        (
            (num as f64 / den as f64).clamp(f64::MIN_POSITIVE, 1.0),
            PValueMethod::ExactEnumeration,
        )
    } else {
        (
            normal_approx_p(w, n, m, tie_term),
            PValueMethod::NormalApproximation,
        )
    };
    Ok(GroupComparisonResult {
        auc1: a.clone(),
        auc2: b.clone(),
        statistic: w,
        p_value,
        method,
    })
}

/// Resolves the integration domain for a comparison: 1 for correlation
/// weights, and the largest weight across every replicate of both groups
/// for covariances (so all curves integrate over one common domain).
fn resolve_domain(
    mode: WeightMode,
    requested: Option<f64>,
    wx: &[EdgeWeights],
    wy: &[EdgeWeights],
) -> f64 {
    match (requested, mode) {
        (Some(d), _) => d,
        (None, WeightMode::Correlation) => 1.0,
        (None, WeightMode::Covariance) => wx
            .iter()
            .chain(wy)
            .map(EdgeWeights::max_weight)
            .fold(0.0, f64::max),
    }
}

/// A comparison's full output: the test result plus each group's jackknife
/// replicate curves, for callers that also want to export or plot them.
#[derive(Debug, Clone)]
pub struct GroupComparison {
    /// Test outcome (areas, statistic, p-value, method).
    pub result: GroupComparisonResult,
    /// Group 1's replicate curves, one per subject, in drop order.
    pub curves1: Vec<BettiCurve>,
    /// Group 2's replicate curves, one per subject, in drop order.
    pub curves2: Vec<BettiCurve>,
    /// The common integration domain actually used.
    pub domain_max: f64,
}

/// Full two-group comparison: jackknife both groups, integrate every
/// replicate curve over a common domain, and rank-sum test the two area
/// samples. Also returns the replicate curves themselves.
///
/// Both groups must measure the same nodes. `domain_max` defaults per the
/// weight mode (1 for correlations, pooled maximum weight for covariances);
/// passing a value that fails to cover some replicate's weights surfaces as
/// [`Error::DomainTooSmall`].
pub fn compare_groups_detailed(
    x: &DataMatrix,
    y: &DataMatrix,
    mode: WeightMode,
    domain_max: Option<f64>,
) -> Result<GroupComparison> {
    if x.n_nodes() != y.n_nodes() {
        return Err(Error::NodeCountMismatch {
            p1: x.n_nodes(),
            p2: y.n_nodes(),
        });
    }
    let wx = jackknife_weights(x, mode)?;
    let wy = jackknife_weights(y, mode)?;
    let domain = resolve_domain(mode, domain_max, &wx, &wy);
    let curves = |ws: &[EdgeWeights]| -> Result<Vec<BettiCurve>> {
        ws.iter()
            .map(|w| betti_curve(&build_filtration(w), domain))
            .collect()
    };
    let curves1 = curves(&wx)?;
    let curves2 = curves(&wy)?;
    let sample1 = AucSample::new("group1", curves1.iter().map(auc).collect(), domain);
    let sample2 = AucSample::new("group2", curves2.iter().map(auc).collect(), domain);
    let result = rank_sum_test(&sample1, &sample2)?;
    Ok(GroupComparison {
        result,
        curves1,
        curves2,
        domain_max: domain,
    })
}

/// [`compare_groups_detailed`] without the replicate curves — just the test
/// result.
pub fn compare_groups(
    x: &DataMatrix,
    y: &DataMatrix,
    mode: WeightMode,
    domain_max: Option<f64>,
) -> Result<GroupComparisonResult> {
    Ok(compare_groups_detailed(x, y, mode, domain_max)?.result)
}
