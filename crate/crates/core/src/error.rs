use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("spin amplitudes not normalized: |c+|^2 + |c-|^2 = {norm}")]
    NotNormalized { norm: f64 },

    /// F = 0: the packets never separate and the separation time is undefined.
    #[error("no separation: force is zero, separation timescale undefined")]
    NoSeparation,

    #[error("invalid wavenumber {0}: must be > 0")]
    InvalidWavenumber(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty grid")]
    EmptyGrid,

    #[error("state is not an in-field closed-form state; use the numeric Wigner transform")]
    NotInFieldFamily,

    #[error("undersampled: |p| = {p:e} kg m/s needs position spacing <= {max_spacing:e} m, grid has {spacing:e} m")]
    Undersampled { p: f64, spacing: f64, max_spacing: f64 },

    #[error("q = {q:e} m is not on the half-lattice of the density-matrix grid")]
    OffLattice { q: f64 },

    #[error("grid resolution: dx = {dx:e} exceeds required {required_dx:e} (scaled units)")]
    Resolution { dx: f64, required_dx: f64 },

    #[error("screen extent captures only {captured} of the probability")]
    Coverage { captured: f64 },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
