use thiserror::Error;

/// Errors raised by every layer of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {deviation:.3e}")]
    NonSymmetric {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("matrices {first} and {second} do not commute: ||AB - BA||_F = {norm:.6e}")]
    NotCommuting {
        first: usize,
        second: usize,
        norm: f64,
    },
    #[error("seed vector is not a common eigenvector (matrix {matrix}, residual {residual:.3e})")]
    SeedNotEigenvector { matrix: usize, residual: f64 },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid edge {{{u}, {v}}} for a graph of order {order}")]
    InvalidEdge { u: usize, v: usize, order: usize },
    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooSmall(usize),
    #[error("invalid circulant step {step} for order {order}")]
    InvalidStep { step: usize, order: usize },
    #[error("invalid element {element} of Z_2^{dimension}")]
    InvalidElement { element: u64, dimension: u32 },
    #[error("factor {index} has order {actual}, expected {expected}")]
    OrderMismatch {
        index: usize,
        expected: usize,
        actual: usize,
    },
    #[error("pattern graph has {expected} vertices but {actual} factors were given")]
    FactorCountMismatch { expected: usize, actual: usize },
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("alpha must be nonzero")]
    AlphaZero,
    #[error("factor {factor} is not regular")]
    NotRegular { factor: usize },
    #[error("spectra have different sizes: {left} vs {right}")]
    MultiplicityMismatch { left: usize, right: usize },
    #[error("eigensolver failed to converge")]
    NoConvergence,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonSymmetric { .. } => "non_symmetric",
            Error::NonFinite { .. } => "non_finite",
            Error::SizeMismatch { .. } => "size_mismatch",
            Error::NotCommuting { .. } => "not_commuting",
            Error::SeedNotEigenvector { .. } => "seed_not_eigenvector",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::InvalidInput(_) => "invalid_input",
            Error::InvalidEdge { .. } => "invalid_edge",
            Error::DuplicateEdge { .. } => "duplicate_edge",
            Error::CycleTooSmall(_) => "cycle_too_small",
            Error::InvalidStep { .. } => "invalid_step",
            Error::InvalidElement { .. } => "invalid_element",
            Error::OrderMismatch { .. } => "order_mismatch",
            Error::FactorCountMismatch { .. } => "factor_count_mismatch",
            Error::NotAPartition(_) => "not_a_partition",
            Error::AlphaZero => "alpha_zero",
            Error::NotRegular { .. } => "not_regular",
            Error::MultiplicityMismatch { .. } => "multiplicity_mismatch",
            Error::NoConvergence => "no_convergence",
            Error::Parse { .. } => "parse",
        }
    }

    /// True for errors that mean a theorem hypothesis is not met, as opposed
    /// to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotCommuting { .. }
                | Error::NotRegular { .. }
                | Error::AlphaZero
                | Error::OrderMismatch { .. }
                | Error::FactorCountMismatch { .. }
                | Error::SeedNotEigenvector { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
