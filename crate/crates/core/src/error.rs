use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    /// The requested real energy sits on a pole of the scattering
    /// amplitudes (a bound state); use the spectra module instead.
    #[error("scattering amplitude pole at E = {energy}")]
    Pole { energy: f64 },
    #[error("susy amplitude map singular (threshold momentum)")]
    MapSingular,
    #[error("evanescent channel: full S-matrix not defined at E = {energy}")]
    EvanescentChannel { energy: f64 },
    #[error("no open channel on either side at E = {energy}")]
    NoOpenChannel { energy: f64 },
    #[error("dispersion relation violated, residual {0:e}")]
    DispersionViolated(f64),
    #[error("unsupported configuration for this operation: {0}")]
    Unsupported(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
