//! Scalar signal theory for binary pulse-code modulation on a quadrature.
//!
//! Data are on-off keyed: a one displaces the measured quadrature by
//! `sqrt(Vs)`, a zero leaves it alone, and the receiver slices at
//! `sqrt(Vs) / 2` against Gaussian noise of variance `Vn`. The resulting
//! error rate is `BER = 1/2 erfc(1/2 sqrt(S/N / 2))` with `S/N = Vs / Vn`.
//!
//! The simultaneous-measurement penalty is applied to the noise ratio:
//! splitting a beam with transmission `eta` against partition noise `Vm`
//! leaves `S/N_sim = eta Vs / (eta Vn + (1 - eta) Vm)`, i.e. the ideal S/N
//! times `eta Vn / (eta Vn + (1 - eta) Vm)`. Reading the bracketed factor as
//! `eta Vs / (...)` and multiplying by `S/N` again would count the signal
//! twice and contradicts both the coherent-state halving and the `0.09`
//! factor at 10 dB squeezing.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalingError {
    #[error("`{name}` out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },
}

fn check(name: &'static str, value: f64, ok: bool) -> Result<(), SignalingError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(SignalingError::OutOfRange { name, value })
    }
}

/// A linear power signal-to-noise ratio.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SnrValue(f64);

impl SnrValue {
    pub fn new(linear: f64) -> Result<Self, SignalingError> {
        check("snr", linear, linear >= 0.0)?;
        Ok(SnrValue(linear))
    }

    pub fn from_db(db: f64) -> Self {
        SnrValue(db_to_linear(db))
    }

    pub fn linear(self) -> f64 {
        self.0
    }

    pub fn db(self) -> Result<f64, SignalingError> {
        linear_to_db(self.0)
    }
}

impl fmt::Display for SnrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> Result<f64, SignalingError> {
    check("linear", linear, linear > 0.0)?;
    Ok(10.0 * linear.log10())
}

/// Best S/N reachable on one quadrature when both are measured at once.
pub fn simultaneous_snr(
    eta: f64,
    v_s: f64,
    v_n: f64,
    v_m: f64,
) -> Result<SnrValue, SignalingError> {
    check("eta", eta, (0.0..=1.0).contains(&eta))?;
    check("v_s", v_s, v_s >= 0.0)?;
    check("v_n", v_n, v_n > 0.0)?;
    check("v_m", v_m, v_m > 0.0)?;
    Ok(SnrValue(eta * v_s / (eta * v_n + (1.0 - eta) * v_m)))
}

/// Factor by which a simultaneous measurement scales the ideal S/N.
pub fn simultaneous_penalty(eta: f64, v_n: f64, v_m: f64) -> Result<f64, SignalingError> {
    Ok(simultaneous_snr(eta, v_n, v_n, v_m)?.linear())
}

const ERF_SERIES_LIMIT: f64 = 1.5;

/// Complementary error function.
///
/// Positive-term Taylor series below 1.5, Laplace continued fraction above;
/// relative error stays near 1e-15 on `[0, 6]`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < ERF_SERIES_LIMIT {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

pub fn erf(x: f64) -> f64 {
    1.0 - erfc(x)
}

// erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (2n+1)!!
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term > sum * 1e-17 {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

// erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated with the modified Lentz method.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..5000 {
        let a = n as f64 / 2.0;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// Bit error rate of on-off keyed binary PCM at the given S/N.
pub fn snr_to_ber(snr: SnrValue) -> f64 {
    ber_at(snr.linear())
}

pub(crate) fn ber_at(snr: f64) -> f64 {
    0.5 * erfc(0.5 * (0.5 * snr).sqrt())
}

/// Inverse of [`snr_to_ber`] by bisection.
pub fn ber_to_snr(ber: f64) -> Result<SnrValue, SignalingError> {
    check("ber", ber, ber > 0.0 && ber <= 0.5)?;
    if ber == 0.5 {
        return Ok(SnrValue(0.0));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while ber_at(hi) > ber {
        hi *= 2.0;
    }
    // run until the bracket stops shrinking
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ber_at(mid) > ber {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(SnrValue(0.5 * (lo + hi)))
}

/// Probability that exactly one of two independent binary errors occurs.
pub fn compose_errors(p: f64, q: f64) -> f64 {
    p * (1.0 - q) + q * (1.0 - p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_round_numbers() {
        assert!((db_to_linear(13.0) - 19.952_623_149_688_8).abs() < 1e-12);
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
        assert!((db_to_linear(-10.0) - 0.1).abs() < 1e-15);
        assert!(linear_to_db(0.0).is_err());
        assert!((linear_to_db(100.0).unwrap() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn penalty_halving_and_squeezed_factor() {
        assert!((simultaneous_penalty(0.5, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let f = simultaneous_penalty(0.5, 0.1, 1.0).unwrap();
        assert!((f - 0.1 / 1.1).abs() < 1e-15);
        assert!((f - 0.0909).abs() < 2e-4);
        assert_eq!(simultaneous_penalty(1.0, 0.3, 1.0).unwrap(), 1.0);
        assert_eq!(simultaneous_snr(0.0, 5.0, 1.0, 1.0).unwrap().linear(), 0.0);
        assert!(simultaneous_snr(1.2, 5.0, 1.0, 1.0).is_err());
        assert!(simultaneous_snr(0.5, 5.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn ber_endpoints() {
        assert_eq!(snr_to_ber(SnrValue::new(0.0).unwrap()), 0.5);
        assert_eq!(ber_to_snr(0.5).unwrap().linear(), 0.0);
        assert!(ber_to_snr(0.0).is_err());
        assert!(ber_to_snr(0.6).is_err());
        assert!(SnrValue::new(-1.0).is_err());
    }

    #[test]
    fn erfc_symmetry() {
        for x in [0.1, 0.7, 2.3] {
            assert!((erfc(-x) + erfc(x) - 2.0).abs() < 1e-15);
        }
        assert_eq!(erfc(0.0), 1.0);
    }

    #[test]
    fn branch_seam_is_continuous() {
        let below = erfc(ERF_SERIES_LIMIT - 1e-12);
        let above = erfc(ERF_SERIES_LIMIT);
        assert!((below - above).abs() / above < 1e-10);
    }

    #[test]
    fn compose_is_symmetric() {
        assert_eq!(compose_errors(0.1, 0.0), 0.1);
        assert!((compose_errors(0.5, 0.2) - 0.5).abs() < 1e-15);
        assert_eq!(compose_errors(0.1, 0.3), compose_errors(0.3, 0.1));
    }
}
