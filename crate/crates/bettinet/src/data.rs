//! Data ingestion and edge-weight computation.
//!
//! The pipeline starts here: a subjects-by-nodes matrix is loaded from CSV,
//! every column is centered and scaled to unit norm, and the network is the
//! dense collection of pairwise weights — absolute correlations, or absolute
//! sample covariances when the scale of the measurements matters.

use std::fmt;
use std::io::Read;
use std::path::Path;

use ndarray::{Array2, Axis};

use crate::error::{Error, Result};

/// Tolerance below which a centered column norm counts as zero variance.
const ZERO_VARIANCE_TOL: f64 = 1e-12;

/// A subjects-by-nodes data matrix with optional labels.
///
/// Rows are subjects (observations), columns are nodes (variables). All
/// entries are finite; that is checked at construction so the numeric
/// kernels never have to re-validate.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Array2<f64>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl DataMatrix {
    /// Wraps a matrix after checking every entry is finite.
    pub fn new(values: Array2<f64>) -> Result<Self> {
        Self::with_labels(values, None, None)
    }

    /// Wraps a matrix with labels, checking label lengths and finiteness.
    pub fn with_labels(
        values: Array2<f64>,
        row_labels: Option<Vec<String>>,
        col_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if let Some((pos, bad)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            let p = values.ncols().max(1);
            return Err(Error::ParseError {
                row: pos / p + 1,
                col: pos % p + 1,
                cell: format!("{bad}"),
            });
        }
        if let Some(ref labels) = row_labels {
            if labels.len() != values.nrows() {
                return Err(Error::InvalidConfig(format!(
                    "{} row labels for {} rows",
                    labels.len(),
                    values.nrows()
                )));
            }
        }
        if let Some(ref labels) = col_labels {
            if labels.len() != values.ncols() {
                return Err(Error::InvalidConfig(format!(
                    "{} column labels for {} columns",
                    labels.len(),
                    values.ncols()
                )));
            }
        }
        Ok(DataMatrix {
            values,
            row_labels,
            col_labels,
        })
    }

    /// Number of subjects (rows).
    pub fn n_subjects(&self) -> usize {
        self.values.nrows()
    }

    /// Number of nodes (columns).
    pub fn n_nodes(&self) -> usize {
        self.values.ncols()
    }

    /// The underlying matrix.
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Column labels, if any were provided or derived from a header.
    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    /// Row labels, if any were provided.
    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    /// Label for column `j` (0-based): the stored label when present, else
    /// the 1-based index as text. Used in diagnostics.
    pub fn col_name(&self, j: usize) -> String {
        match &self.col_labels {
            Some(labels) => labels[j].clone(),
            None => (j + 1).to_string(),
        }
    }

    /// A copy of the matrix with subject `drop` (0-based) removed; labels
    /// follow. This is the jackknife resampling step.
    pub fn drop_row(&self, drop: usize) -> DataMatrix {
        assert!(drop < self.n_subjects(), "row index out of range");
        let keep: Vec<usize> = (0..self.n_subjects()).filter(|&i| i != drop).collect();
        DataMatrix {
            values: self.values.select(Axis(0), &keep),
            row_labels: self.row_labels.as_ref().map(|labels| {
                labels
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, l)| l.clone())
                    .collect()
            }),
            col_labels: self.col_labels.clone(),
        }
    }

    /// Renders the matrix as CSV. Numeric cells use 17 significant digits so
    /// a written file re-loads to bit-identical values. When
    /// `include_header` is set and column labels exist, they form the first
    /// line.
    pub fn to_csv_string(&self, include_header: bool) -> String {
        let mut out = String::new();
        if include_header {
            if let Some(labels) = &self.col_labels {
                out.push_str(&labels.join(","));
                out.push('\n');
            }
        }
        for row in self.values.rows() {
            let line: Vec<String> = row.iter().map(|&v| fmt_g17(v)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Formats a float with 17 significant digits, enough for a lossless
/// round-trip back to the same `f64`.
pub(crate) fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Loads a comma-separated numeric matrix.
///
/// Rows are subjects, columns are nodes. Cells may use scientific notation;
/// anything that does not parse to a finite number is a
/// [`Error::ParseError`] carrying the 1-based file position (so `NaN` and
/// `inf` cells are rejected, not smuggled in). Rows whose cell count differs
/// from the first row raise [`Error::RaggedRows`]. With `has_header`, the
/// first line provides column labels; otherwise labels default to the
/// 1-based node indices.
pub fn load_csv(path: &Path, has_header: bool) -> Result<DataMatrix> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    parse_csv(&text, has_header)
}

/// CSV parsing behind [`load_csv`], split out so in-memory inputs can be
/// parsed in tests.
pub fn parse_csv(text: &str, has_header: bool) -> Result<DataMatrix> {
    // Keep 1-based file line numbers for diagnostics; drop trailing blank
    // lines (a final newline is not an empty row) but reject interior ones.
    let mut lines: Vec<(usize, &str)> = text
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .collect();
    while lines.last().is_some_and(|(_, l)| l.trim().is_empty()) {
        lines.pop();
    }

    let mut iter = lines.into_iter();
    let col_labels = if has_header {
        let (_, header) = iter.next().ok_or(Error::EmptyInput)?;
        Some(
            header
                .split(',')
                .map(|c| c.trim().to_string())
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut expected: Option<usize> = col_labels.as_ref().map(|l| l.len());
    for (line_no, line) in iter {
        let cells: Vec<&str> = line.split(',').collect();
        match expected {
            None => expected = Some(cells.len()),
            Some(p) if cells.len() != p => {
                return Err(Error::RaggedRows {
                    row: line_no,
                    expected: p,
                    found: cells.len(),
                })
            }
            Some(_) => {}
        }
        let mut row = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            let parsed = cell.trim().parse::<f64>().ok().filter(|v| v.is_finite());
            match parsed {
                Some(v) => row.push(v),
                None => {
                    return Err(Error::ParseError {
                        row: line_no,
                        col: j + 1,
                        cell: cell.trim().to_string(),
                    })
                }
            }
        }
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = rows.len();
    let p = rows[0].len();
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    let values = Array2::from_shape_vec((n, p), flat).expect("row lengths already checked");
    let col_labels =
        col_labels.or_else(|| Some((1..=p).map(|j| j.to_string()).collect::<Vec<_>>()));
    DataMatrix::with_labels(values, None, col_labels)
}

/// A data matrix whose columns have been centered and scaled to unit norm.
///
/// Column `j` of the result is `(x_j - mean(x_j)) / ||x_j - mean(x_j)||`, so
/// inner products of columns are exactly the sample correlations. The
/// centered norms are kept alongside the values; they tie the normalized
/// matrix back to the scale of its source, which is what covariance-mode
/// edge weights need.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMatrix {
    values: Array2<f64>,
    /// Centered column norms of the source matrix, one per column.
    scales: Vec<f64>,
}

impl NormalizedMatrix {
    /// Number of subjects (rows).
    pub fn n_subjects(&self) -> usize {
        self.values.nrows()
    }

    /// Number of nodes (columns).
    pub fn n_nodes(&self) -> usize {
        self.values.ncols()
    }

    /// The normalized matrix.
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Centered column norms of the source matrix.
    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// Gram matrix of the normalized columns: entry `(j, k)` is the sample
    /// correlation of source columns `j` and `k`.
    pub(crate) fn gram(&self) -> Array2<f64> {
        self.values.t().dot(&self.values)
    }
}

/// Centers every column and scales it to unit Euclidean norm.
///
/// Fails with [`Error::ZeroVariance`] on a constant column (centered norm at
/// or below `1e-12`) and [`Error::TooFewRows`] when fewer than two subjects
/// are present. The operation is idempotent: normalizing an
/// already-normalized matrix reproduces it to within rounding.
pub fn normalize_columns(x: &DataMatrix) -> Result<NormalizedMatrix> {
    let n = x.n_subjects();
    if n < 2 {
        return Err(Error::TooFewRows { got: n, min: 2 });
    }
    let mut values = x.values().clone();
    let mut scales = Vec::with_capacity(x.n_nodes());
    for (j, mut col) in values.axis_iter_mut(Axis(1)).enumerate() {
        let mean = col.sum() / n as f64;
        col.mapv_inplace(|v| v - mean);
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= ZERO_VARIANCE_TOL {
            return Err(Error::ZeroVariance {
                column: x.col_name(j),
            });
        }
        col.mapv_inplace(|v| v / norm);
        scales.push(norm);
    }
    Ok(NormalizedMatrix { values, scales })
}

/// How pairwise edge weights are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// Absolute sample correlation; weights live in `[0, 1]`.
    Correlation,
    /// Absolute sample covariance; weights keep the data's scale.
    Covariance,
}

impl WeightMode {
    /// Stable lowercase name used in files and on the command line.
    pub fn as_str(self) -> &'static str {
        match self {
            WeightMode::Correlation => "correlation",
            WeightMode::Covariance => "covariance",
        }
    }
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "correlation" => Ok(WeightMode::Correlation),
            "covariance" => Ok(WeightMode::Covariance),
            other => Err(Error::InvalidConfig(format!(
                "unknown weight mode {other:?} (expected \"correlation\" or \"covariance\")"
            ))),
        }
    }
}

/// Symmetric, zero-diagonal matrix of nonnegative edge weights over `p`
/// nodes.
///
/// Only the strict upper triangle is stored; reads mirror it, so symmetry
/// holds exactly by construction. In [`WeightMode::Correlation`] every
/// weight lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights {
    p: usize,
    mode: WeightMode,
    /// Strict upper triangle in row-major pair order:
    /// `(0,1), (0,2), ..., (0,p-1), (1,2), ...`.
    w: Vec<f64>,
}

impl EdgeWeights {
    /// Builds edge weights from a condensed strict-upper-triangle vector in
    /// row-major pair order. The vector length must be `p*(p-1)/2` and every
    /// entry finite and nonnegative (at most 1 in correlation mode, with a
    /// whisker of rounding slack that gets clamped).
    pub fn from_condensed(p: usize, mut w: Vec<f64>, mode: WeightMode) -> Result<Self> {
        if w.len() != n_pairs(p) {
            return Err(Error::InvalidWeights(format!(
                "{} weights for {} node pairs",
                w.len(),
                n_pairs(p)
            )));
        }
        for (idx, v) in w.iter_mut().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::InvalidWeights(format!(
                    "weight {v} at pair index {idx} is not a finite nonnegative number"
                )));
            }
            if mode == WeightMode::Correlation {
                if *v > 1.0 + 1e-12 {
                    return Err(Error::InvalidWeights(format!(
                        "correlation weight {v} at pair index {idx} exceeds 1"
                    )));
                }
                *v = v.min(1.0);
            }
        }
        Ok(EdgeWeights { p, mode, w })
    }

    /// Builds edge weights from an explicit edge list; unlisted pairs get
    /// weight zero. Rejects self-loops, out-of-range nodes, duplicate pairs,
    /// and invalid weights.
    pub fn from_edges(p: usize, edges: &[(usize, usize, f64)], mode: WeightMode) -> Result<Self> {
        let mut w = vec![0.0; n_pairs(p)];
        let mut seen = vec![false; n_pairs(p)];
        for &(a, b, weight) in edges {
            if a == b {
                return Err(Error::InvalidWeights(format!("self-loop on node {a}")));
            }
            if a >= p || b >= p {
                return Err(Error::InvalidWeights(format!(
                    "edge ({a}, {b}) out of range for {p} nodes"
                )));
            }
            let idx = pair_index(p, a.min(b), a.max(b));
            if seen[idx] {
                return Err(Error::InvalidWeights(format!("duplicate edge ({a}, {b})")));
            }
            seen[idx] = true;
            w[idx] = weight;
        }
        Self::from_condensed(p, w, mode)
    }

    /// Number of nodes.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Weight mode the matrix was computed under.
    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    /// Weight of the pair `(j, k)`. The diagonal is identically zero and
    /// `weight(j, k) == weight(k, j)` exactly.
    pub fn weight(&self, j: usize, k: usize) -> f64 {
        assert!(j < self.p && k < self.p, "node index out of range");
        if j == k {
            return 0.0;
        }
        self.w[pair_index(self.p, j.min(k), j.max(k))]
    }

    /// Largest edge weight, or 0 when there are no pairs.
    pub fn max_weight(&self) -> f64 {
        self.w.iter().fold(0.0, |acc, &v| acc.max(v))
    }

    /// Iterates over all node pairs `j < k` with their weights, including
    /// zero-weight pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let p = self.p;
        (0..p)
            .flat_map(move |j| (j + 1..p).map(move |k| (j, k)))
            .zip(self.w.iter())
            .map(|((j, k), &w)| (j, k, w))
    }

    /// Renders the full `p x p` symmetric matrix (zero diagonal) as CSV with
    /// 17-significant-digit cells.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for j in 0..self.p {
            let line: Vec<String> = (0..self.p).map(|k| fmt_g17(self.weight(j, k))).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON export: `{"mode": ..., "p": ..., "weights": [[...], ...]}` with
    /// the full symmetric matrix.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<f64>> = (0..self.p)
            .map(|j| (0..self.p).map(|k| self.weight(j, k)).collect())
            .collect();
        serde_json::json!({
            "mode": self.mode.as_str(),
            "p": self.p,
            "weights": rows,
        })
    }
}

/// Number of unordered node pairs among `p` nodes.
pub(crate) fn n_pairs(p: usize) -> usize {
    p * p.saturating_sub(1) / 2
}

/// Index of pair `(j, k)`, `j < k`, in row-major condensed order.
pub(crate) fn pair_index(p: usize, j: usize, k: usize) -> usize {
    debug_assert!(j < k && k < p);
    j * (2 * p - j - 1) / 2 + (k - j - 1)
}

/// Computes pairwise edge weights from a normalized matrix.
///
/// In correlation mode the weight of `(j, k)` is `|z_j . z_k|`, the absolute
/// sample correlation, clamped into `[0, 1]` against rounding overshoot. In
/// covariance mode the centered scales stored on the normalized matrix are
/// folded back in, giving `|s_jk|`, the absolute sample covariance with the
/// usual `n - 1` denominator.
pub fn edge_weights(z: &NormalizedMatrix, mode: WeightMode) -> EdgeWeights {
    let p = z.n_nodes();
    let n = z.n_subjects();
    let gram = z.gram();
    let mut w = Vec::with_capacity(n_pairs(p));
    match mode {
        WeightMode::Correlation => {
            for j in 0..p {
                for k in j + 1..p {
                    w.push(gram[(j, k)].abs().min(1.0));
                }
            }
        }
        WeightMode::Covariance => {
            let denom = (n - 1) as f64;
            for j in 0..p {
                for k in j + 1..p {
                    w.push((gram[(j, k)] * z.scales[j] * z.scales[k] / denom).abs());
                }
            }
        }
    }
    EdgeWeights { p, mode, w }
}
