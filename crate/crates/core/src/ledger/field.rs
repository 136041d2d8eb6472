use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::source::{NoiseSource, Quadrature, RegistryId, SourceId, SourceKind, SourceRegistry};
use super::LedgerError;

/// Identifier of one of Alice's data strings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StreamId(pub String);

impl From<&str> for StreamId {
    fn from(s: &str) -> Self {
        StreamId(s.to_owned())
    }
}

impl fmt::Display for StreamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A data string impressed on one quadrature with signal power `power`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationStream {
    pub stream_id: StreamId,
    pub quadrature: Quadrature,
    pub power: f64,
}

impl ModulationStream {
    pub fn new(stream_id: impl Into<StreamId>, quadrature: Quadrature, power: f64) -> Self {
        Self {
            stream_id: stream_id.into(),
            quadrature,
            power,
        }
    }
}

/// Coefficients of one quantity on the two quadratures, `[X+, X-]`.
pub(crate) type QuadPair = [f64; 2];

pub(crate) type Component = (SourceId, Quadrature);

/// A beam in the linearized picture: a complex mean field plus fluctuation
/// quadratures written as linear combinations of independent source
/// components and signal displacements.
///
/// Quadratures are referred to a fixed local-oscillator frame (`X+` along
/// the real axis). Quadrature units follow `X = a + a^dagger`, so vacuum has
/// unit variance and a phase jitter `phi` on carrier `alpha` displaces the
/// in-phase-with-jitter quadrature by `2 alpha phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    registry: RegistryId,
    carrier: Complex64,
    sources: BTreeMap<SourceId, NoiseSource>,
    noise: BTreeMap<Component, QuadPair>,
    signals: BTreeMap<StreamId, QuadPair>,
}

/// Coherent or squeezed field with unit coefficients on its source.
pub fn make_field(carrier: f64, source: &NoiseSource) -> Result<FieldState, LedgerError> {
    if !(carrier.is_finite() && carrier >= 0.0) {
        return Err(LedgerError::InvalidCarrier(carrier));
    }
    if source.kind() == SourceKind::PhaseDither {
        return Err(LedgerError::WrongSourceKind {
            expected: "vacuum or squeezed",
            found: source.kind(),
        });
    }
    let mut noise = BTreeMap::new();
    noise.insert((source.id(), Quadrature::Plus), [1.0, 0.0]);
    noise.insert((source.id(), Quadrature::Minus), [0.0, 1.0]);
    Ok(FieldState {
        registry: source.registry(),
        carrier: Complex64::new(carrier, 0.0),
        sources: BTreeMap::from([(source.id(), *source)]),
        noise,
        signals: BTreeMap::new(),
    })
}

fn rotate(pair: QuadPair, w: Complex64) -> QuadPair {
    [
        w.re * pair[0] - w.im * pair[1],
        w.im * pair[0] + w.re * pair[1],
    ]
}

fn merge<K: Ord + Clone>(a: &mut BTreeMap<K, QuadPair>, b: &BTreeMap<K, QuadPair>) {
    for (k, v) in b {
        let e = a.entry(k.clone()).or_insert([0.0, 0.0]);
        e[0] += v[0];
        e[1] += v[1];
    }
}

impl FieldState {
    pub fn registry(&self) -> RegistryId {
        self.registry
    }

    /// Mean-field amplitude `|alpha|`.
    pub fn carrier(&self) -> f64 {
        self.carrier.norm()
    }

    pub fn carrier_complex(&self) -> Complex64 {
        self.carrier
    }

    /// Phase of the mean field in the local-oscillator frame.
    pub fn carrier_phase(&self) -> f64 {
        self.carrier.arg()
    }

    pub fn sources(&self) -> impl Iterator<Item = &NoiseSource> {
        self.sources.values()
    }

    pub(crate) fn noise_rows(&self) -> &BTreeMap<Component, QuadPair> {
        &self.noise
    }

    pub(crate) fn signal_rows(&self) -> &BTreeMap<StreamId, QuadPair> {
        &self.signals
    }

    /// Coefficient of a source component in the given output quadrature.
    pub fn coefficient(&self, quad: Quadrature, source: SourceId, component: Quadrature) -> f64 {
        self.noise
            .get(&(source, component))
            .map_or(0.0, |p| p[quad.index()])
    }

    pub fn signal_coefficient(&self, quad: Quadrature, stream: &StreamId) -> f64 {
        self.signals.get(stream).map_or(0.0, |p| p[quad.index()])
    }

    pub fn streams(&self) -> impl Iterator<Item = &StreamId> {
        self.signals.keys()
    }

    /// Noise variance of one quadrature.
    pub fn variance(&self, quad: Quadrature) -> f64 {
        self.noise
            .iter()
            .map(|(&(id, comp), p)| {
                let c = p[quad.index()];
                c * c * self.sources[&id].component_variance(comp)
            })
            .sum()
    }

    pub fn v_plus(&self) -> f64 {
        self.variance(Quadrature::Plus)
    }

    pub fn v_minus(&self) -> f64 {
        self.variance(Quadrature::Minus)
    }

    pub fn add_modulation(&self, stream: &ModulationStream) -> Result<FieldState, LedgerError> {
        if !(stream.power.is_finite() && stream.power >= 0.0) {
            return Err(LedgerError::InvalidPower(stream.power));
        }
        if self.signals.contains_key(&stream.stream_id) {
            return Err(LedgerError::DuplicateStream(stream.stream_id.clone()));
        }
        let mut out = self.clone();
        let mut pair = [0.0, 0.0];
        pair[stream.quadrature.index()] = stream.power.sqrt();
        out.signals.insert(stream.stream_id.clone(), pair);
        Ok(out)
    }

    /// Multiplies the whole mode by a complex weight.
    pub(crate) fn scaled(&self, w: Complex64) -> FieldState {
        FieldState {
            registry: self.registry,
            carrier: self.carrier * w,
            sources: self.sources.clone(),
            noise: self
                .noise
                .iter()
                .map(|(k, p)| (*k, rotate(*p, w)))
                .collect(),
            signals: self
                .signals
                .iter()
                .map(|(k, p)| (k.clone(), rotate(*p, w)))
                .collect(),
        }
    }

    pub(crate) fn plus(mut self, other: &FieldState) -> FieldState {
        debug_assert_eq!(self.registry, other.registry);
        self.carrier += other.carrier;
        for (id, s) in &other.sources {
            self.sources.entry(*id).or_insert(*s);
        }
        merge(&mut self.noise, &other.noise);
        merge(&mut self.signals, &other.signals);
        self
    }

    fn check_same_registry(&self, other: &FieldState) -> Result<(), LedgerError> {
        if self.registry != other.registry {
            return Err(LedgerError::RegistryMismatch);
        }
        Ok(())
    }
}

/// Two-port beamsplitter with intensity transmission `eta`.
///
/// `out1 = sqrt(eta) f1 + sqrt(1-eta) e^{i phase} f2` and
/// `out2 = sqrt(1-eta) f1 - sqrt(eta) e^{i phase} f2`. At `eta = 1/2`,
/// `phase = pi/2` this gives `(a + ib)/sqrt2` and `(a - ib)/sqrt2`.
pub fn beamsplit(
    f1: &FieldState,
    f2: &FieldState,
    eta: f64,
    rel_phase: f64,
) -> Result<(FieldState, FieldState), LedgerError> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(LedgerError::InvalidTransmission(eta));
    }
    f1.check_same_registry(f2)?;
    let t = eta.sqrt();
    let r = (1.0 - eta).sqrt();
    let ph = Complex64::from_polar(1.0, rel_phase);
    Ok((
        combine(f1, Complex64::from(t), f2, ph * r),
        combine(f1, Complex64::from(r), f2, -ph * t),
    ))
}

// Zero weights are skipped so that a fully transmissive splitter is an
// exact identity on the ledger.
fn combine(f1: &FieldState, w1: Complex64, f2: &FieldState, w2: Complex64) -> FieldState {
    match (w1 == Complex64::from(0.0), w2 == Complex64::from(0.0)) {
        (false, false) => f1.scaled(w1).plus(&f2.scaled(w2)),
        (true, _) => f2.scaled(w2),
        (false, true) => f1.scaled(w1),
    }
}

/// Power loss `loss` modeled as a beamsplitter against fresh vacuum.
pub fn apply_loss(
    field: &FieldState,
    loss: f64,
    registry: &mut SourceRegistry,
) -> Result<FieldState, LedgerError> {
    if !(0.0..=1.0).contains(&loss) {
        return Err(LedgerError::InvalidLoss(loss));
    }
    if registry.id() != field.registry {
        return Err(LedgerError::RegistryMismatch);
    }
    if loss == 0.0 {
        return Ok(field.clone());
    }
    let vac = make_field(0.0, &registry.vacuum())?;
    Ok(beamsplit(field, &vac, 1.0 - loss, 0.0)?.0)
}

pub fn phase_shift(field: &FieldState, theta: f64) -> FieldState {
    field.scaled(Complex64::from_polar(1.0, theta))
}

/// Small-angle phase jitter `c -> c (1 + i phi)`.
///
/// The jitter enters along `i * carrier`, i.e. on the field's own phase
/// quadrature with coefficient `2 |alpha|`.
pub fn apply_phase_dither(
    field: &FieldState,
    dither: &NoiseSource,
) -> Result<FieldState, LedgerError> {
    if dither.kind() != SourceKind::PhaseDither {
        return Err(LedgerError::WrongSourceKind {
            expected: "phase_dither",
            found: dither.kind(),
        });
    }
    if dither.registry() != field.registry {
        return Err(LedgerError::RegistryMismatch);
    }
    let mut out = field.clone();
    let push = 2.0 * field.carrier * Complex64::i();
    out.sources.entry(dither.id()).or_insert(*dither);
    let e = out
        .noise
        .entry((dither.id(), Quadrature::Plus))
        .or_insert([0.0, 0.0]);
    e[0] += push.re;
    e[1] += push.im;
    Ok(out)
}
