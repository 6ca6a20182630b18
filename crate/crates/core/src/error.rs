use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site {site} out of range for a register of {n} qubits")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("site {0} listed more than once")]
    RepeatedSite(usize),

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("operator is not traceless (|Tr| = {0:.3e})")]
    NotTraceless(f64),

    #[error("gate is not tri-unitary (residuals U={:.3e}, U~={:.3e}, U^={:.3e})", .0[0], .0[1], .0[2])]
    NotTriUnitary([f64; 3]),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    #[error("light cone wraps around the system: {0}")]
    Wraparound(String),

    #[error("ancilla register left in a contaminated state (fidelity {0:.12})")]
    AncillaContamination(f64),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Violations of size limits are reported separately so front ends can
    /// distinguish them from invalid input.
    pub fn is_resource_bound(&self) -> bool {
        matches!(self, Error::ResourceBound(_))
    }
}
