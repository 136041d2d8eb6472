//! Sample-level protocol runs.
//!
//! Each bit slot is simulated as Gaussian quadrature samples pushed through
//! the same optics the analytic engine describes: sources, beamsplitters
//! with fresh vacuum draws, channel loss, Eve's measurement and re-send, and
//! Bob's homodyne readout. The optics here act on sampled numbers and share
//! no code with the symbolic ledger, which makes the empirical rates an
//! independent check of the analytic ones.
//!
//! Receivers slice at the midpoint of their two signal levels, estimated
//! as the sample mean of everything they measured on that readout.

use rand::{Rng, RngCore};
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::ledger::Quadrature;
use crate::protocol::{
    alice_encode, bob_choose_bases, detect, run_analytic, sift, BerReport, EveStrategy,
    ProtocolError, ReportMode, SampleCounts, Scenario, SourceType, TestSchedule, DEFAULT_BLOCK,
    DEFAULT_MARGIN,
};
use crate::streams::{Role, SlotStreams};

/// One homodyne outcome for one bit slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotSample {
    pub quadrature: Quadrature,
    pub value: f64,
}

/// On-off keyed slot: `bit * signal_amplitude` plus Gaussian noise.
pub fn simulate_slot<R: Rng + ?Sized>(
    quadrature: Quadrature,
    bit: bool,
    signal_amplitude: f64,
    noise_variance: f64,
    rng: &mut R,
) -> SlotSample {
    let mean = if bit { signal_amplitude } else { 0.0 };
    let value = if noise_variance > 0.0 {
        let z: f64 = rng.sample(StandardNormal);
        mean + noise_variance.sqrt() * z
    } else {
        mean
    };
    SlotSample { quadrature, value }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn coin<R: RngCore + ?Sized>(rng: &mut R) -> bool {
    rng.next_u64() >> 63 == 1
}

/// Sampled quadratures `[X+, X-]` of one beam.
type Mode = [f64; 2];

/// One coherent beam, or the EPR pair `[c, d]`.
#[derive(Debug, Clone, Copy)]
struct Beams {
    modes: [Mode; 2],
    count: usize,
}

impl Beams {
    fn active(&self) -> &[Mode] {
        &self.modes[..self.count]
    }
}

fn prepare<R: Rng + ?Sized>(
    source: SourceType,
    bits: [bool; 2],
    amplitude: f64,
    squeezed_noise: f64,
    rng: &mut R,
) -> Beams {
    use Quadrature::{Minus, Plus};
    match source {
        SourceType::Coherent => {
            let p = simulate_slot(Plus, bits[0], amplitude, 1.0, rng).value;
            let m = simulate_slot(Minus, bits[1], amplitude, 1.0, rng).value;
            Beams {
                modes: [[p, m], [0.0; 2]],
                count: 1,
            }
        }
        SourceType::EprSqueezed => {
            let anti = (1.0 / squeezed_noise).sqrt();
            let a = [
                simulate_slot(Plus, bits[0], amplitude, squeezed_noise, rng).value,
                anti * normal(rng),
            ];
            let b = [
                simulate_slot(Plus, bits[1], amplitude, squeezed_noise, rng).value,
                anti * normal(rng),
            ];
            // c = (a + i b)/sqrt2, d = (a - i b)/sqrt2
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let c = [h * (a[0] - b[1]), h * (a[1] + b[0])];
            let d = [h * (a[0] + b[1]), h * (a[1] - b[0])];
            Beams {
                modes: [c, d],
                count: 2,
            }
        }
    }
}

/// Mixes each mode with fresh vacuum; returns `(transmitted, reflected)`.
fn split<R: Rng + ?Sized>(beams: &Beams, eta: f64, rng: &mut R) -> (Beams, Beams) {
    let (t, r) = (eta.sqrt(), (1.0 - eta).sqrt());
    let mut kept = *beams;
    let mut taken = *beams;
    for k in 0..beams.count {
        let m = beams.modes[k];
        let v = [normal(rng), normal(rng)];
        kept.modes[k] = [t * m[0] + r * v[0], t * m[1] + r * v[1]];
        taken.modes[k] = [r * m[0] - t * v[0], r * m[1] - t * v[1]];
    }
    (kept, taken)
}

fn attenuate<R: Rng + ?Sized>(beams: &Beams, loss: f64, rng: &mut R) -> Beams {
    if loss == 0.0 {
        return *beams;
    }
    split(beams, 1.0 - loss, rng).0
}

fn measure(beams: &Beams, basis: Quadrature) -> f64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match (beams.active(), basis) {
        ([m], Quadrature::Plus) => m[0],
        ([m], Quadrature::Minus) => m[1],
        ([c, d], Quadrature::Plus) => h * (c[0] + d[0]),
        ([c, d], Quadrature::Minus) => h * (c[1] - d[1]),
        _ => unreachable!("one or two modes"),
    }
}

/// Running mean used as a decision threshold.
#[derive(Debug, Default, Clone, Copy)]
struct Level {
    sum: f64,
    n: usize,
}

impl Level {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.n += 1;
    }

    fn threshold(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }
}

fn idx(q: Quadrature) -> usize {
    match q {
        Quadrature::Plus => 0,
        Quadrature::Minus => 1,
    }
}

fn pick(flag: bool) -> Quadrature {
    if flag {
        Quadrature::Minus
    } else {
        Quadrature::Plus
    }
}

/// Full protocol run at sample level. Deterministic in `(scenario, n_bits, seed)`.
pub fn run_montecarlo(s: &Scenario, n_bits: u64, seed: u64) -> Result<BerReport, ProtocolError> {
    let analytic = run_analytic(s)?;
    if n_bits == 0 {
        return Err(ProtocolError::NoBits);
    }
    let n = n_bits as usize;
    let amp = analytic.signal_power.sqrt();
    let vn = s.source_noise();
    let streams = SlotStreams::new(seed);
    let alice = alice_encode(n, &streams)?;
    let bases = bob_choose_bases(n, &streams)?;

    // Pass 1: Alice transmits, Eve measures; Bob reads directly where Eve
    // does not re-send.
    let mut bob_vals = vec![0.0; n];
    let mut eve_vals = vec![[f64::NAN; 2]; n];
    let mut eve_levels = [Level::default(); 2];
    for i in 0..n {
        let slot = i as u64;
        let bits = [alice.plus[i], alice.minus[i]];
        let tx = prepare(
            s.source,
            bits,
            amp,
            vn,
            &mut streams.rng(Role::AliceSource, slot),
        );
        match s.eve {
            EveStrategy::None => {
                let rx = attenuate(&tx, s.loss, &mut streams.rng(Role::Channel, slot));
                bob_vals[i] = measure(&rx, bases[i]);
            }
            EveStrategy::Guess => {
                let q = pick(coin(&mut streams.rng(Role::Eve, slot)));
                eve_vals[i][idx(q)] = measure(&tx, q);
            }
            EveStrategy::Simultaneous => {
                let (h1, h2) = split(&tx, 0.5, &mut streams.rng(Role::Eve, slot));
                eve_vals[i] = [
                    measure(&h1, Quadrature::Plus),
                    measure(&h2, Quadrature::Minus),
                ];
            }
            EveStrategy::Tap { fraction } => {
                let mut ch = streams.rng(Role::Channel, slot);
                let (to_bob, tapped) = split(&tx, 1.0 - fraction, &mut ch);
                let (h1, h2) = split(&tapped, 0.5, &mut streams.rng(Role::Eve, slot));
                eve_vals[i] = [
                    measure(&h1, Quadrature::Plus),
                    measure(&h2, Quadrature::Minus),
                ];
                bob_vals[i] = measure(&attenuate(&to_bob, s.loss, &mut ch), bases[i]);
            }
        }
        for (lvl, v) in eve_levels.iter_mut().zip(eve_vals[i]) {
            if !v.is_nan() {
                lvl.push(v);
            }
        }
    }

    // Eve's estimate of both strings; unmeasured strings are coin flips.
    let thresholds = eve_levels.map(|l| l.threshold());
    let guess_role = match s.eve {
        EveStrategy::None => Role::Eve,
        _ => Role::EveResend,
    };
    let eve_bits: Vec<[bool; 2]> = eve_vals
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut rng = streams.rng(guess_role, i as u64);
            let fill = coin(&mut rng);
            [0, 1].map(|k| {
                if v[k].is_nan() {
                    fill
                } else {
                    v[k] > thresholds[k]
                }
            })
        })
        .collect();

    // Pass 2: re-send strategies. Eve's transmitter draws its noise after
    // the fill bit on the same stream.
    if matches!(s.eve, EveStrategy::Guess | EveStrategy::Simultaneous) {
        for i in 0..n {
            let slot = i as u64;
            let mut rng = streams.rng(Role::EveResend, slot);
            let _fill = coin(&mut rng);
            let tx = prepare(s.source, eve_bits[i], amp, vn, &mut rng);
            let rx = attenuate(&tx, s.loss, &mut streams.rng(Role::Channel, slot));
            bob_vals[i] = measure(&rx, bases[i]);
        }
    }

    let mut bob_levels = [Level::default(); 2];
    for (v, q) in bob_vals.iter().zip(&bases) {
        bob_levels[idx(*q)].push(*v);
    }
    let bob_thr = bob_levels.map(|l| l.threshold());
    let bob_bits: Vec<bool> = bob_vals
        .iter()
        .zip(&bases)
        .map(|(v, q)| *v > bob_thr[idx(*q)])
        .collect();

    let schedule = TestSchedule::random(n, DEFAULT_BLOCK, &streams);
    let sifted = sift(&alice, &bob_bits, &bases, &schedule)?;
    let eve_errors = sifted
        .key
        .iter()
        .filter(|k| eve_bits[k.slot][idx(k.quadrature)] != k.alice)
        .count();
    let key_count = sifted.key.len();
    let bob_test_ber = sifted.test_ber().unwrap_or(f64::NAN);
    let eve_key_ber = if key_count > 0 {
        eve_errors as f64 / key_count as f64
    } else {
        f64::NAN
    };

    Ok(BerReport {
        signal_power: analytic.signal_power,
        bob_test_ber,
        eve_key_ber,
        bob_baseline_ber: analytic.bob_baseline_ber,
        verdict: detect(bob_test_ber, analytic.bob_baseline_ber, DEFAULT_MARGIN),
        mode: ReportMode::Empirical,
        counts: Some(SampleCounts {
            test: sifted.test_count,
            key: key_count,
        }),
    })
}

/// Standard deviation of an empirical rate over `n` Bernoulli trials.
pub fn binomial_sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// z-scores of empirical rates against analytic predictions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub bob_test_z: f64,
    pub eve_key_z: f64,
    pub bob_test_sigma: f64,
    pub eve_key_sigma: f64,
}

impl Agreement {
    pub fn max_abs_z(&self) -> f64 {
        self.bob_test_z.abs().max(self.eve_key_z.abs())
    }
}

pub fn agreement(analytic: &BerReport, empirical: &BerReport) -> Agreement {
    let counts = empirical.counts.unwrap_or(SampleCounts { test: 0, key: 0 });
    let bob_test_sigma = binomial_sigma(analytic.bob_test_ber, counts.test);
    let eve_key_sigma = binomial_sigma(analytic.eve_key_ber, counts.key);
    let z = |emp: f64, ana: f64, sigma: f64| {
        if emp == ana {
            0.0
        } else {
            (emp - ana) / sigma
        }
    };
    Agreement {
        bob_test_z: z(
            empirical.bob_test_ber,
            analytic.bob_test_ber,
            bob_test_sigma,
        ),
        eve_key_z: z(empirical.eve_key_ber, analytic.eve_key_ber, eve_key_sigma),
        bob_test_sigma,
        eve_key_sigma,
    }
}
