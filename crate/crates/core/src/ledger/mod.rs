//! Linearized Gaussian optics on a symbolic ledger.
//!
//! Every beam is a carrier plus quadrature fluctuations written as exact
//! linear combinations of independent noise-source components. Passive
//! optics (beamsplitters, loss, phase shifts) and small phase jitter act
//! linearly on those coefficients; detected spectra are read off by
//! squaring coefficients against source variances.

mod field;
mod source;
mod spectrum;

use thiserror::Error;

pub use field::{
    apply_loss, apply_phase_dither, beamsplit, make_field, phase_shift, FieldState,
    ModulationStream, StreamId,
};
pub use source::{NoiseSource, Quadrature, RegistryId, SourceId, SourceKind, SourceRegistry};
pub use spectrum::{
    amplitude_spectrum, correct_dither, homodyne_spectrum, joint_current, joint_spectrum, Combine,
    DitherGain, Photocurrent, SpectrumDecomposition,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LedgerError {
    #[error("variance must be finite and positive, got {0}")]
    InvalidVariance(f64),
    #[error("source violates the uncertainty bound: V+ = {v_plus}, V- = {v_minus}")]
    Unphysical { v_plus: f64, v_minus: f64 },
    #[error("carrier amplitude must be finite and non-negative, got {0}")]
    InvalidCarrier(f64),
    #[error("signal power must be finite and non-negative, got {0}")]
    InvalidPower(f64),
    #[error("expected a {expected} source, got {found:?}")]
    WrongSourceKind {
        expected: &'static str,
        found: SourceKind,
    },
    #[error("stream `{0}` is already present on this field")]
    DuplicateStream(StreamId),
    #[error("beamsplitter transmission must lie in [0, 1], got {0}")]
    InvalidTransmission(f64),
    #[error("loss must lie in [0, 1], got {0}")]
    InvalidLoss(f64),
    #[error("fields belong to different source registries")]
    RegistryMismatch,
    #[error("reference spectrum does not share a dither source with the target")]
    MissingDither,
    #[error("more than one shared dither source")]
    AmbiguousDither,
    #[error("reference shares non-dither source {0} with the target")]
    CorrelatedReference(SourceId),
}
