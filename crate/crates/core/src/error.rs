use thiserror::Error;

/// Errors produced by the numerical layers of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimension {0} is outside the supported range 2..=4")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("entry grid shape does not match the declared dimension")]
    BadShape,

    #[error("non-finite matrix entry at ({0}, {1})")]
    NonFiniteEntry(usize, usize),

    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:.3e})")]
    NotHermitian { max_asymmetry: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal_norm:.3e})")]
    NoConvergence { sweeps: usize, off_diagonal_norm: f64 },

    #[error("state is not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("degenerate eigenvalue pair (gap {gap:.3e}) with non-vanishing cross derivative element {cross:.3e}; the spectral derivative is ill-defined here")]
    DegenerateDerivative { gap: f64, cross: f64 },

    #[error("measurement outcome has probability {probability:.3e} below the support cutoff but derivative {derivative:.3e}; its Fisher contribution diverges")]
    DivergingOutcome { probability: f64, derivative: f64 },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("Fisher information must be strictly positive, got {0:.3e}")]
    NonPositiveFisher(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eta = {0:.3e} is within 1e-6 of a diagonal edge case; use the eta = 0 or eta = pi/2 closed forms instead")]
    EtaAtEdge(f64),

    #[error("outcome probabilities sum to {total:.17}, off from 1 by more than 1e-8")]
    InvalidProbabilities { total: f64 },

    #[error("state evaluation failed at parameter {at}: {source}")]
    FamilyEvaluation {
        at: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
