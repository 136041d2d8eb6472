use serde::{Deserialize, Serialize};

use super::detect::{detect, Verdict, DEFAULT_MARGIN};
use super::optics::{self, Beams};
use super::scenario::{EveStrategy, Scenario};
use super::ProtocolError;
use crate::ledger::{Quadrature, SourceRegistry};
use crate::signaling::{ber_at, ber_to_snr, compose_errors};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportMode {
    Analytic,
    Empirical,
}

/// Sample sizes behind an empirical report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleCounts {
    pub test: usize,
    pub key: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerReport {
    /// Calibrated signal power `Vs` per string.
    pub signal_power: f64,
    /// Error rate Alice and Bob see on the disclosed test quadrature.
    pub bob_test_ber: f64,
    /// Error rate of Eve's copy of the key quadrature.
    pub eve_key_ber: f64,
    /// Bob's error rate without Eve.
    pub bob_baseline_ber: f64,
    pub verdict: Verdict,
    pub mode: ReportMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<SampleCounts>,
}

/// What Bob receives once Eve has acted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BobChannel {
    /// Eve's re-prepared beams, sent through the ordinary channel. The
    /// array is the S/N Bob gets on each string from Eve's transmitter.
    Resent { snr: [f64; 2] },
    /// Whatever Eve leaves of Alice's beams, after channel loss.
    Forwarded { snr: [f64; 2] },
}

/// Eve's measurement quality on each of Alice's strings (`[plus, minus]`)
/// together with the channel left to Bob.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interception {
    pub eve_snr: [f64; 2],
    pub bob: BobChannel,
}

fn registry_and_beams(
    s: &Scenario,
    signal_power: f64,
) -> Result<(SourceRegistry, Beams), ProtocolError> {
    let mut reg = SourceRegistry::new();
    let beams = optics::transmit(s.source, s.source_noise(), signal_power, &mut reg)?;
    Ok((reg, beams))
}

fn per_stream<F>(mut f: F) -> Result<[f64; 2], ProtocolError>
where
    F: FnMut(Quadrature) -> Result<f64, ProtocolError>,
{
    Ok([f(Quadrature::Plus)?, f(Quadrature::Minus)?])
}

/// Bob's S/N on each string with no eavesdropper.
pub fn bob_channel_snr(s: &Scenario, signal_power: f64) -> Result<[f64; 2], ProtocolError> {
    let (mut reg, beams) = registry_and_beams(s, signal_power)?;
    let rx = optics::channel(&beams, s.loss, &mut reg)?;
    per_stream(|q| Ok(optics::readout_snr(&rx, q)?))
}

/// Signal power Alice needs so that Bob, without Eve, sees `target_bob_ber`.
///
/// The ledger is probed at unit signal power; S/N is linear in `Vs`.
pub fn calibrate_signal_power(s: &Scenario) -> Result<f64, ProtocolError> {
    s.validate()?;
    let needed = ber_to_snr(s.target_bob_ber)?.linear();
    let [unit, _] = bob_channel_snr(s, 1.0)?;
    Ok(needed / unit)
}

pub fn eve_intervene(s: &Scenario, signal_power: f64) -> Result<Interception, ProtocolError> {
    let (mut reg, beams) = registry_and_beams(s, signal_power)?;
    match s.eve {
        EveStrategy::None => Err(ProtocolError::NoStrategy),
        EveStrategy::Guess => {
            // Eve reads whichever string she picks with Alice's full S/N,
            // then re-sends with a transmitter like Alice's.
            let eve_snr = per_stream(|q| Ok(optics::readout_snr(&beams, q)?))?;
            Ok(Interception {
                eve_snr,
                bob: BobChannel::Resent {
                    snr: bob_channel_snr(s, signal_power)?,
                },
            })
        }
        EveStrategy::Simultaneous => {
            let spectra = optics::simultaneous_readout(&beams, &mut reg)?;
            let eve_snr = per_stream(|q| Ok(spectra[q.index()].snr(&optics::stream_id(q))))?;
            Ok(Interception {
                eve_snr,
                bob: BobChannel::Resent {
                    snr: bob_channel_snr(s, signal_power)?,
                },
            })
        }
        EveStrategy::Tap { fraction } => {
            if !(fraction > 0.0 && fraction < 1.0) {
                return Err(ProtocolError::InvalidTap(fraction));
            }
            let (to_bob, tapped) = optics::split(&beams, 1.0 - fraction, &mut reg)?;
            let spectra = optics::simultaneous_readout(&tapped, &mut reg)?;
            let eve_snr = per_stream(|q| Ok(spectra[q.index()].snr(&optics::stream_id(q))))?;
            let rx = optics::channel(&to_bob, s.loss, &mut reg)?;
            let bob = per_stream(|q| Ok(optics::readout_snr(&rx, q)?))?;
            Ok(Interception {
                eve_snr,
                bob: BobChannel::Forwarded { snr: bob },
            })
        }
    }
}

fn mean(x: [f64; 2]) -> f64 {
    0.5 * (x[0] + x[1])
}

/// Closed-form error rates for a scenario.
///
/// Test and key roles swap at random between blocks, so reported rates
/// average the two strings.
pub fn run_analytic(s: &Scenario) -> Result<BerReport, ProtocolError> {
    let vs = calibrate_signal_power(s)?;
    let baseline = bob_channel_snr(s, vs)?.map(ber_at);
    let bob_baseline_ber = mean(baseline);

    let (bob_test, eve_key) = match s.eve {
        EveStrategy::None => (baseline, [0.5; 2]),
        _ => {
            let icpt = eve_intervene(s, vs)?;
            let eve = icpt.eve_snr.map(ber_at);
            match (s.eve, icpt.bob) {
                (EveStrategy::Guess, BobChannel::Resent { snr }) => {
                    // right guess half the time: Eve's bit through Bob's
                    // channel; wrong guess: a fresh random bit
                    let bob = snr.map(ber_at);
                    (
                        [0, 1].map(|i| 0.5 * compose_errors(eve[i], bob[i]) + 0.25),
                        eve.map(|e| 0.5 * e + 0.25),
                    )
                }
                (_, BobChannel::Resent { snr }) => {
                    let bob = snr.map(ber_at);
                    ([0, 1].map(|i| compose_errors(eve[i], bob[i])), eve)
                }
                (_, BobChannel::Forwarded { snr }) => (snr.map(ber_at), eve),
            }
        }
    };

    let bob_test_ber = mean(bob_test);
    Ok(BerReport {
        signal_power: vs,
        bob_test_ber,
        eve_key_ber: mean(eve_key),
        bob_baseline_ber,
        verdict: detect(bob_test_ber, bob_baseline_ber, DEFAULT_MARGIN),
        mode: ReportMode::Analytic,
        counts: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_eve_reproduces_target() {
        for s in [
            Scenario::coherent(),
            Scenario::epr(10.0).with_loss(0.1),
            Scenario::epr(6.0).with_loss(0.2).with_target(0.003),
        ] {
            let r = run_analytic(&s).unwrap();
            assert!((r.bob_test_ber - s.target_bob_ber).abs() < 1e-12);
            assert_eq!(r.bob_test_ber, r.bob_baseline_ber);
            assert_eq!(r.verdict, Verdict::Secure);
            assert_eq!(r.eve_key_ber, 0.5);
        }
    }

    #[test]
    fn intervene_requires_a_strategy() {
        assert!(matches!(
            eve_intervene(&Scenario::coherent(), 1.0),
            Err(ProtocolError::NoStrategy)
        ));
    }

    #[test]
    fn strings_are_symmetric() {
        let s = Scenario::epr(6.0)
            .with_loss(0.2)
            .with_eve(EveStrategy::Tap { fraction: 0.3 });
        let i = eve_intervene(&s, 3.0).unwrap();
        assert!((i.eve_snr[0] - i.eve_snr[1]).abs() < 1e-12);
        let BobChannel::Forwarded { snr } = i.bob else {
            panic!()
        };
        assert!((snr[0] - snr[1]).abs() < 1e-12);
    }

    #[test]
    fn guess_detected_tap_not() {
        let guess = run_analytic(&Scenario::coherent().with_eve(EveStrategy::Guess)).unwrap();
        assert_eq!(guess.verdict, Verdict::Compromised);
        let tap = run_analytic(&Scenario::coherent().with_eve(EveStrategy::Tap { fraction: 0.16 }))
            .unwrap();
        assert_eq!(tap.verdict, Verdict::Secure);
    }
}
