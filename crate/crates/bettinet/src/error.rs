use std::path::PathBuf;

/// Crate-wide error type. Every fallible operation in the pipeline returns
/// one of these variants, so callers (including the command-line binary) can
/// surface a single one-line diagnostic.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The input path does not exist.
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    /// A CSV cell could not be parsed as a finite number. Row and column are
    /// 1-based positions in the file (the header line counts as a row).
    #[error("row {row}, column {col}: cannot parse {cell:?} as a finite number")]
    ParseError {
        row: usize,
        col: usize,
        cell: String,
    },

    /// A CSV row has a different number of cells than the first row.
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },

    /// The input contains no data rows.
    #[error("input contains no data rows")]
    EmptyInput,

    /// An operation needs more rows than the matrix has.
    #[error("need at least {min} rows, got {got}")]
    TooFewRows { got: usize, min: usize },

    /// A column is constant, so it cannot be scaled to unit norm. `column`
    /// is the column's label when one is known, else its 1-based index.
    #[error("column {column} has zero variance")]
    ZeroVariance { column: String },

    /// The sparsity parameter must be nonnegative.
    #[error("sparsity parameter must be nonnegative, got {0}")]
    NegativeLambda(f64),

    /// A Betti curve cannot be laid out on a domain shorter than the largest
    /// edge weight.
    #[error("domain max {domain_max} is below the largest edge weight {max_weight}")]
    DomainTooSmall { domain_max: f64, max_weight: f64 },

    /// The closed-form tree curve was asked for on weights that cannot come
    /// from a tree with unique positive weights.
    #[error("not a tree: {0}")]
    NotATree(String),

    /// Jackknife resampling needs at least three subjects per group.
    #[error("group has {got} subjects, jackknife needs at least {min}")]
    GroupTooSmall { got: usize, min: usize },

    /// A rank-sum test was handed an empty sample.
    #[error("rank-sum test requires non-empty samples")]
    EmptySample,

    /// Two groups being compared must share the same node set.
    #[error("node counts differ between groups: {p1} vs {p2}")]
    NodeCountMismatch { p1: usize, p2: usize },

    /// A simulation or command configuration is out of range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An edge-weight matrix failed validation (non-finite, negative,
    /// out-of-range, or structurally inconsistent entries).
    #[error("invalid edge weights: {0}")]
    InvalidWeights(String),

    /// A Betti curve failed validation (breakpoints out of order, wrong
    /// origin, or a domain that does not cover them).
    #[error("invalid Betti curve: {0}")]
    InvalidCurve(String),

    /// An I/O failure, tagged with the path involved.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wraps an I/O error with the path it concerns, mapping a missing file
    /// to [`Error::FileNotFound`].
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound(path.to_path_buf())
        } else {
            Error::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    }
}
