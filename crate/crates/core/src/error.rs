use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The operation does not apply to this parameter regime.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Both branches of the incidental-resonance formula have a vanishing denominator.
    #[error("no incidental resonance candidate: denominator vanishes")]
    NoCandidate,

    /// `1 + k_n² L⁺L⁻` vanishes at the requested lattice wavenumber.
    #[error("singular peak at n = {n} (k = {k}): 1 + k^2 L+ L- vanishes")]
    SingularPeak { n: u32, k: f64 },

    /// Every wavenumber transmits perfectly, so there is no discrete root set.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("numeric failure at k = {k}: {message}")]
    Numeric { k: f64, message: String },
}

pub(crate) fn check_wavenumber(k: f64) -> Result<()> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "wavenumber must be finite and positive, got {k}"
        )));
    }
    Ok(())
}
