//! Published figures set against what the models compute.
//!
//! Every row pairs a quoted number with the value produced by the analytic
//! engine for the same set-up. Rows that the stated tap model cannot reach
//! are listed as documented gaps, with the model's own value shown.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::protocol::{run_analytic, BerReport, EveStrategy, ProtocolError, Scenario};
use crate::signaling::{simultaneous_penalty, snr_to_ber, SnrValue};

/// Channel used for the idealized guess row: errors there are negligible.
pub const NOISELESS_TARGET_BER: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum RowStatus {
    Pass,
    Fail,
    DocumentedGap,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Pass => "PASS",
            RowStatus::Fail => "FAIL",
            RowStatus::DocumentedGap => "DOCUMENTED-GAP",
        })
    }
}

/// What kind of number a row holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    /// A bit error rate, shown in percent.
    Rate,
    /// A dimensionless factor.
    Factor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureRow {
    pub id: &'static str,
    pub label: &'static str,
    pub unit: Unit,
    pub reference: f64,
    pub computed: f64,
    /// Absolute tolerance; `None` for documented gaps.
    pub tolerance: Option<f64>,
    pub status: RowStatus,
}

impl FigureRow {
    fn checked(
        id: &'static str,
        label: &'static str,
        unit: Unit,
        reference: f64,
        computed: f64,
        tol: f64,
    ) -> Self {
        let status = if (computed - reference).abs() <= tol {
            RowStatus::Pass
        } else {
            RowStatus::Fail
        };
        FigureRow {
            id,
            label,
            unit,
            reference,
            computed,
            tolerance: Some(tol),
            status,
        }
    }

    fn gap(id: &'static str, label: &'static str, reference: f64, computed: f64) -> Self {
        FigureRow {
            id,
            label,
            unit: Unit::Rate,
            reference,
            computed,
            tolerance: None,
            status: RowStatus::DocumentedGap,
        }
    }
}

fn report(s: Scenario) -> Result<BerReport, ProtocolError> {
    run_analytic(&s)
}

/// Computes every row. Order is fixed.
pub fn reproduce() -> Result<Vec<FigureRow>, ProtocolError> {
    use EveStrategy::{Guess, Simultaneous, Tap};
    let tap16 = Tap { fraction: 0.16 };
    let tap29 = Tap { fraction: 0.29 };

    let guess_ideal = report(
        Scenario::coherent()
            .with_eve(Guess)
            .with_target(NOISELESS_TARGET_BER),
    )?;
    let guess = report(Scenario::coherent().with_eve(Guess))?;
    let coh_sim = report(Scenario::coherent().with_eve(Simultaneous))?;
    let coh_tap = report(Scenario::coherent().with_eve(tap16))?;
    let epr_sim = report(Scenario::epr(10.0).with_eve(Simultaneous))?;
    let epr_tap = report(Scenario::epr(10.0).with_eve(tap16))?;
    let a_sim = report(Scenario::epr(10.0).with_loss(0.1).with_eve(Simultaneous))?;
    let a_tap = report(Scenario::epr(10.0).with_loss(0.1).with_eve(tap29))?;
    let b_sim = report(Scenario::epr(6.0).with_loss(0.2).with_eve(Simultaneous))?;
    let b_tap = report(Scenario::epr(6.0).with_loss(0.2).with_eve(tap29))?;

    let baseline = snr_to_ber(SnrValue::from_db(13.0));
    let factor = simultaneous_penalty(0.5, 0.1, 1.0)?;

    Ok(vec![
        FigureRow::checked(
            "baseline_13db",
            "Bob BER at 13 dB S/N, no Eve",
            Unit::Rate,
            0.01,
            baseline,
            0.005,
        ),
        FigureRow::checked(
            "guess_ideal",
            "guess: Bob test BER, noiseless channel",
            Unit::Rate,
            0.25,
            guess_ideal.bob_test_ber,
            0.001,
        ),
        FigureRow::checked(
            "guess_13db",
            "guess: Bob test BER, 13 dB channel",
            Unit::Rate,
            0.25,
            guess.bob_test_ber,
            0.015,
        ),
        FigureRow::checked(
            "coherent_sim_eve",
            "coherent, simultaneous: Eve BER",
            Unit::Rate,
            0.06,
            coh_sim.eve_key_ber,
            0.005,
        ),
        FigureRow::checked(
            "coherent_tap16_eve",
            "coherent, 16% tap: Eve BER",
            Unit::Rate,
            0.25,
            coh_tap.eve_key_ber,
            0.015,
        ),
        FigureRow::checked(
            "coherent_tap16_bob",
            "coherent, 16% tap: Bob BER",
            Unit::Rate,
            0.017,
            coh_tap.bob_test_ber,
            0.005,
        ),
        FigureRow::checked(
            "penalty_10db",
            "S/N factor, simultaneous, 10 dB squeezing",
            Unit::Factor,
            0.09,
            factor,
            0.005,
        ),
        FigureRow::checked(
            "epr_sim_eve",
            "EPR 10 dB, simultaneous: Eve BER",
            Unit::Rate,
            0.24,
            epr_sim.eve_key_ber,
            0.015,
        ),
        FigureRow::gap(
            "epr_tap16_eve",
            "EPR 10 dB, 16% tap: Eve BER",
            0.495,
            epr_tap.eve_key_ber,
        ),
        FigureRow::gap(
            "epr_tap16_bob",
            "EPR 10 dB, 16% tap: Bob BER",
            0.05,
            epr_tap.bob_test_ber,
        ),
        FigureRow::checked(
            "loss_a_sim_eve",
            "EPR 10 dB, 10% loss, simultaneous: Eve BER",
            Unit::Rate,
            0.15,
            a_sim.eve_key_ber,
            0.02,
        ),
        FigureRow::gap(
            "loss_a_tap29_eve",
            "EPR 10 dB, 10% loss, 29% tap: Eve BER",
            0.25,
            a_tap.eve_key_ber,
        ),
        FigureRow::gap(
            "loss_a_tap29_bob",
            "EPR 10 dB, 10% loss, 29% tap: Bob BER",
            0.20,
            a_tap.bob_test_ber,
        ),
        FigureRow::checked(
            "loss_b_sim_eve",
            "EPR 6 dB, 20% loss, simultaneous: Eve BER",
            Unit::Rate,
            0.075,
            b_sim.eve_key_ber,
            0.005,
        ),
        FigureRow::gap(
            "loss_b_tap29_eve",
            "EPR 6 dB, 20% loss, 29% tap: Eve BER",
            0.25,
            b_tap.eve_key_ber,
        ),
        FigureRow::gap(
            "loss_b_tap29_bob",
            "EPR 6 dB, 20% loss, 29% tap: Bob BER",
            0.11,
            b_tap.bob_test_ber,
        ),
    ])
}

/// True when no row failed. Documented gaps do not count as failures.
pub fn all_pass(rows: &[FigureRow]) -> bool {
    rows.iter().all(|r| r.status != RowStatus::Fail)
}
