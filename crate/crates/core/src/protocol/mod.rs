//! The cryptographic layer: scenarios, Alice's encoding, Bob's basis
//! choices, public sifting, the three eavesdropper strategies and analytic
//! error-rate reports.

mod analytic;
mod detect;
mod encode;
pub mod optics;
mod scenario;
mod sift;

use thiserror::Error;

pub use analytic::{
    bob_channel_snr, calibrate_signal_power, eve_intervene, run_analytic, BerReport, BobChannel,
    Interception, ReportMode, SampleCounts,
};
pub use detect::{detect, Verdict, DEFAULT_MARGIN};
pub use encode::{alice_encode, alice_slot_bits, bob_choose_bases, bob_slot_basis, AliceBits};
pub use scenario::{
    EvePosition, EveStrategy, Scenario, ScenarioError, SourceType, DEFAULT_BITS, DEFAULT_TARGET_BER,
};
pub use sift::{sift, KeyBit, SiftOutcome, TestSchedule, DEFAULT_BLOCK};

use crate::ledger::LedgerError;
use crate::signaling::SignalingError;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Signaling(#[from] SignalingError),
    #[error("at least one bit is required")]
    NoBits,
    #[error("eavesdropper strategy is `none`")]
    NoStrategy,
    #[error("tap fraction must lie in (0, 1), got {0}")]
    InvalidTap(f64),
    #[error("sequences to sift have different lengths")]
    LengthMismatch,
    #[error("test schedule is empty")]
    EmptySchedule,
    #[error("test schedule covers {covered} slots, {needed} needed")]
    ScheduleTooShort { covered: usize, needed: usize },
}
