//! Simulation and analysis of continuous-variable quantum key distribution
//! with coherent and two-mode squeezed light.
//!
//! * [`ledger`]: exact linearized Gaussian optics in variance space.
//! * [`signaling`]: S/N, simultaneous-measurement penalty, binary PCM error law.
//! * [`protocol`]: encoding, sifting, eavesdropper models and analytic reports.
//! * [`montecarlo`]: sample-level protocol runs that check the analytic engine.
//! * [`figures`]: the published operating points and how the models compare.

pub mod figures;
pub mod ledger;
pub mod montecarlo;
pub mod protocol;
pub mod signaling;
pub mod streams;

pub use ledger::{FieldState, NoiseSource, Quadrature, SourceRegistry, SpectrumDecomposition};
pub use montecarlo::run_montecarlo;
pub use protocol::run_analytic;
pub use protocol::{BerReport, EveStrategy, ReportMode, Scenario, SourceType, Verdict};
pub use signaling::{ber_to_snr, snr_to_ber, SnrValue};
