use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::field::{Component, FieldState, StreamId};
use super::source::{NoiseSource, Quadrature, RegistryId, SourceId, SourceKind};
use super::LedgerError;

/// A homodyne photocurrent: a real linear functional of the source
/// components and signal displacements.
///
/// Spectra of sums or differences of detector outputs must be built from
/// currents, since correlated sources combine before squaring.
#[derive(Debug, Clone, PartialEq)]
pub struct Photocurrent {
    registry: RegistryId,
    sources: BTreeMap<SourceId, NoiseSource>,
    noise: BTreeMap<Component, f64>,
    signals: BTreeMap<StreamId, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Sum,
    Difference,
}

impl Combine {
    fn sign(self) -> f64 {
        match self {
            Combine::Sum => 1.0,
            Combine::Difference => -1.0,
        }
    }
}

impl Photocurrent {
    /// Homodyne readout of `X(theta) = cos(theta) X+ + sin(theta) X-`.
    pub fn at_angle(field: &FieldState, theta: f64) -> Photocurrent {
        let (s, c) = theta.sin_cos();
        let project = |p: &[f64; 2]| c * p[0] + s * p[1];
        Photocurrent {
            registry: field.registry(),
            sources: field.sources().map(|s| (s.id(), *s)).collect(),
            noise: field
                .noise_rows()
                .iter()
                .map(|(k, p)| (*k, project(p)))
                .collect(),
            signals: field
                .signal_rows()
                .iter()
                .map(|(k, p)| (k.clone(), project(p)))
                .collect(),
        }
    }

    pub fn homodyne(field: &FieldState, quad: Quadrature) -> Photocurrent {
        match quad {
            // exact projections, no trig rounding
            Quadrature::Plus => Self::project_exact(field, 0),
            Quadrature::Minus => Self::project_exact(field, 1),
        }
    }

    fn project_exact(field: &FieldState, idx: usize) -> Photocurrent {
        Photocurrent {
            registry: field.registry(),
            sources: field.sources().map(|s| (s.id(), *s)).collect(),
            noise: field
                .noise_rows()
                .iter()
                .map(|(k, p)| (*k, p[idx]))
                .collect(),
            signals: field
                .signal_rows()
                .iter()
                .map(|(k, p)| (k.clone(), p[idx]))
                .collect(),
        }
    }

    /// `self + weight * other`.
    pub fn add_scaled(
        &self,
        other: &Photocurrent,
        weight: f64,
    ) -> Result<Photocurrent, LedgerError> {
        if self.registry != other.registry {
            return Err(LedgerError::RegistryMismatch);
        }
        let mut out = self.clone();
        for (id, s) in &other.sources {
            out.sources.entry(*id).or_insert(*s);
        }
        for (k, v) in &other.noise {
            *out.noise.entry(*k).or_insert(0.0) += weight * v;
        }
        for (k, v) in &other.signals {
            *out.signals.entry(k.clone()).or_insert(0.0) += weight * v;
        }
        Ok(out)
    }

    pub fn scale(&self, weight: f64) -> Photocurrent {
        let mut out = self.clone();
        out.noise.values_mut().for_each(|v| *v *= weight);
        out.signals.values_mut().for_each(|v| *v *= weight);
        out
    }

    pub fn spectrum(&self) -> SpectrumDecomposition {
        let mut noise_terms: BTreeMap<SourceId, f64> = BTreeMap::new();
        let mut dither_sources = BTreeSet::new();
        for (&(id, comp), &c) in &self.noise {
            let src = &self.sources[&id];
            if src.kind() == SourceKind::PhaseDither {
                dither_sources.insert(id);
            }
            *noise_terms.entry(id).or_insert(0.0) += c * c * src.component_variance(comp);
        }
        let signal_powers = self
            .signals
            .iter()
            .filter(|(_, c)| **c != 0.0)
            .map(|(k, c)| (k.clone(), c * c))
            .collect();
        SpectrumDecomposition::new(signal_powers, noise_terms, dither_sources)
    }
}

/// A detected power spectrum split into signal powers per stream and noise
/// contributions per source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumDecomposition {
    pub signal_powers: BTreeMap<StreamId, f64>,
    pub noise_terms: BTreeMap<SourceId, f64>,
    #[serde(skip)]
    dither_sources: BTreeSet<SourceId>,
    pub total_noise: f64,
}

impl SpectrumDecomposition {
    fn new(
        signal_powers: BTreeMap<StreamId, f64>,
        noise_terms: BTreeMap<SourceId, f64>,
        dither_sources: BTreeSet<SourceId>,
    ) -> Self {
        let total_noise = noise_terms.values().sum();
        Self {
            signal_powers,
            noise_terms,
            dither_sources,
            total_noise,
        }
    }

    pub fn signal(&self, stream: &StreamId) -> f64 {
        self.signal_powers.get(stream).copied().unwrap_or(0.0)
    }

    pub fn noise_from(&self, source: SourceId) -> f64 {
        self.noise_terms.get(&source).copied().unwrap_or(0.0)
    }

    pub fn snr(&self, stream: &StreamId) -> f64 {
        self.signal(stream) / self.total_noise
    }

    pub fn dither_sources(&self) -> impl Iterator<Item = SourceId> + '_ {
        self.dither_sources.iter().copied()
    }

    /// Noise from everything except phase dithers.
    pub fn quantum_noise(&self) -> f64 {
        self.noise_terms
            .iter()
            .filter(|(id, _)| !self.dither_sources.contains(id))
            .map(|(_, v)| v)
            .sum()
    }
}

pub fn homodyne_spectrum(field: &FieldState, quad: Quadrature) -> SpectrumDecomposition {
    Photocurrent::homodyne(field, quad).spectrum()
}

/// Direct (self-homodyne) detection: the quadrature in phase with the
/// field's own carrier.
pub fn amplitude_spectrum(field: &FieldState) -> SpectrumDecomposition {
    Photocurrent::at_angle(field, field.carrier_phase()).spectrum()
}

/// Spectrum of `(I_A +/- I_B) / sqrt2` for homodyne currents on two beams.
pub fn joint_spectrum(
    field_a: &FieldState,
    field_b: &FieldState,
    quad_a: Quadrature,
    quad_b: Quadrature,
    sign: Combine,
) -> Result<SpectrumDecomposition, LedgerError> {
    Ok(joint_current(field_a, field_b, quad_a, quad_b, sign)?.spectrum())
}

pub fn joint_current(
    field_a: &FieldState,
    field_b: &FieldState,
    quad_a: Quadrature,
    quad_b: Quadrature,
    sign: Combine,
) -> Result<Photocurrent, LedgerError> {
    let a = Photocurrent::homodyne(field_a, quad_a);
    let b = Photocurrent::homodyne(field_b, quad_b);
    Ok(a.add_scaled(&b, sign.sign())?
        .scale(std::f64::consts::FRAC_1_SQRT_2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DitherGain {
    /// Choose the gain that nulls the shared dither term.
    Auto,
    Fixed(f64),
}

/// Feed-forward subtraction of a dither reference from a target spectrum.
///
/// The gain is an amplitude gain applied to the reference current with the
/// sign that opposes the shared dither. Target and reference must share only
/// dither sources; all other reference noise is added scaled by `gain^2`.
pub fn correct_dither(
    target: &SpectrumDecomposition,
    reference: &SpectrumDecomposition,
    gain: DitherGain,
) -> Result<SpectrumDecomposition, LedgerError> {
    let shared: Vec<SourceId> = target
        .dither_sources
        .intersection(&reference.dither_sources)
        .copied()
        .collect();
    let dither = match shared.as_slice() {
        [] => return Err(LedgerError::MissingDither),
        [one] => *one,
        _ => return Err(LedgerError::AmbiguousDither),
    };
    if let Some(id) = reference
        .noise_terms
        .keys()
        .find(|id| **id != dither && target.noise_terms.contains_key(id))
    {
        return Err(LedgerError::CorrelatedReference(*id));
    }
    let t = target.noise_from(dither).sqrt();
    let r = reference.noise_from(dither).sqrt();
    if r == 0.0 {
        return Err(LedgerError::MissingDither);
    }
    let g = match gain {
        DitherGain::Auto => t / r,
        DitherGain::Fixed(g) => g,
    };
    if g == 0.0 {
        return Ok(target.clone());
    }

    let mut noise_terms = target.noise_terms.clone();
    let residual = t - g * r;
    noise_terms.insert(dither, residual * residual);
    for (id, v) in &reference.noise_terms {
        if *id != dither {
            noise_terms.insert(*id, g * g * v);
        }
    }
    let mut signal_powers = target.signal_powers.clone();
    for (k, v) in &reference.signal_powers {
        *signal_powers.entry(k.clone()).or_insert(0.0) += g * g * v;
    }
    let mut dither_sources = target.dither_sources.clone();
    dither_sources.extend(reference.dither_sources.iter().copied());
    Ok(SpectrumDecomposition::new(
        signal_powers,
        noise_terms,
        dither_sources,
    ))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::ledger::{beamsplit, make_field, ModulationStream, SourceRegistry};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn coherent_with_amplitude_signal() {
        let mut reg = SourceRegistry::new();
        let f = make_field(1.0, &reg.vacuum())
            .unwrap()
            .add_modulation(&ModulationStream::new("d", Quadrature::Plus, 19.95))
            .unwrap();
        let sp = homodyne_spectrum(&f, Quadrature::Plus);
        assert!(close(sp.signal(&"d".into()), 19.95));
        assert!(close(sp.total_noise, 1.0));
        let sm = homodyne_spectrum(&f, Quadrature::Minus);
        assert!(sm.signal_powers.is_empty());
    }

    #[test]
    fn zero_power_stream_is_invisible() {
        let mut reg = SourceRegistry::new();
        let f = make_field(1.0, &reg.vacuum()).unwrap();
        let g = f
            .add_modulation(&ModulationStream::new("z", Quadrature::Plus, 0.0))
            .unwrap();
        for q in Quadrature::BOTH {
            assert_eq!(homodyne_spectrum(&f, q), homodyne_spectrum(&g, q));
        }
    }

    #[test]
    fn anti_squeezed_partner_and_vacuum() {
        let mut reg = SourceRegistry::new();
        let s = make_field(1.0, &reg.squeezed(0.1).unwrap()).unwrap();
        assert!(close(
            homodyne_spectrum(&s, Quadrature::Minus).total_noise,
            10.0
        ));
        let v = make_field(1.0, &reg.vacuum()).unwrap();
        let sp = homodyne_spectrum(&v, Quadrature::Plus);
        assert!(sp.signal_powers.is_empty());
        assert_eq!(sp.total_noise, 1.0);
    }

    #[test]
    fn total_is_sum_of_terms() {
        let mut reg = SourceRegistry::new();
        let a = make_field(1.0, &reg.squeezed(0.3).unwrap()).unwrap();
        let b = make_field(1.0, &reg.vacuum()).unwrap();
        let (c, _) = beamsplit(&a, &b, 0.37, 0.4).unwrap();
        let sp = homodyne_spectrum(&c, Quadrature::Plus);
        let sum: f64 = sp.noise_terms.values().sum();
        assert!((sp.total_noise - sum).abs() <= 1e-12 * sum);
        assert!(sp.noise_terms.values().all(|v| *v >= 0.0));
    }

    #[test]
    fn independent_coherent_beams_combine_at_qnl() {
        let mut reg = SourceRegistry::new();
        let a = make_field(1.0, &reg.vacuum()).unwrap();
        let b = make_field(1.0, &reg.vacuum()).unwrap();
        let j = joint_spectrum(&a, &b, Quadrature::Plus, Quadrature::Plus, Combine::Sum).unwrap();
        assert!(close(j.total_noise, 1.0));
        assert_eq!(j.noise_terms.len(), 2);
    }

    #[test]
    fn joint_spectrum_rejects_foreign_registry() {
        let a = make_field(1.0, &SourceRegistry::new().vacuum()).unwrap();
        let b = make_field(1.0, &SourceRegistry::new().vacuum()).unwrap();
        assert!(joint_spectrum(&a, &b, Quadrature::Plus, Quadrature::Plus, Combine::Sum).is_err());
    }

    #[test]
    fn epr_sum_and_difference_recover_sources() {
        let mut reg = SourceRegistry::new();
        let a = make_field(1.0, &reg.squeezed(0.1).unwrap())
            .unwrap()
            .add_modulation(&ModulationStream::new("a", Quadrature::Plus, 2.0))
            .unwrap();
        let b = make_field(1.0, &reg.squeezed(0.1).unwrap())
            .unwrap()
            .add_modulation(&ModulationStream::new("b", Quadrature::Plus, 3.0))
            .unwrap();
        let (c, d) = beamsplit(&a, &b, 0.5, FRAC_PI_2).unwrap();
        let plus =
            joint_spectrum(&c, &d, Quadrature::Plus, Quadrature::Plus, Combine::Sum).unwrap();
        assert!(close(plus.total_noise, 0.1));
        assert!(close(plus.signal(&"a".into()), 2.0));
        assert!(plus.signal(&"b".into()) < 1e-30);
        let minus = joint_spectrum(
            &c,
            &d,
            Quadrature::Minus,
            Quadrature::Minus,
            Combine::Difference,
        )
        .unwrap();
        assert!(close(minus.total_noise, 0.1));
        assert!(close(minus.signal(&"b".into()), 3.0));
    }

    fn dithered_pair(
        alpha: f64,
        e: f64,
        v_phi: f64,
    ) -> (SpectrumDecomposition, SpectrumDecomposition) {
        let mut reg = SourceRegistry::new();
        let sig = make_field(alpha, &reg.vacuum()).unwrap();
        let lo = make_field(e, &reg.vacuum()).unwrap();
        let d = reg.phase_dither(v_phi).unwrap();
        let sig = crate::ledger::apply_phase_dither(&sig, &d).unwrap();
        let lo = crate::ledger::apply_phase_dither(&lo, &d).unwrap();
        (
            homodyne_spectrum(&sig, Quadrature::Minus),
            homodyne_spectrum(&lo, Quadrature::Minus),
        )
    }

    #[test]
    fn auto_gain_leaves_alpha_over_e_squared() {
        for (alpha, e) in [(2.0, 2.0), (1.0, 10.0), (3.0, 1.5)] {
            let (t, r) = dithered_pair(alpha, e, 0.7);
            let c = correct_dither(&t, &r, DitherGain::Auto).unwrap();
            let dither = t.dither_sources().next().unwrap();
            assert!(c.noise_from(dither).abs() < 1e-12);
            let penalty = c.total_noise - t.quantum_noise();
            assert!(close(penalty, alpha * alpha / (e * e)));
        }
    }

    #[test]
    fn zero_gain_is_identity() {
        let (t, r) = dithered_pair(1.0, 2.0, 0.3);
        assert_eq!(correct_dither(&t, &r, DitherGain::Fixed(0.0)).unwrap(), t);
    }

    #[test]
    fn reference_without_dither_is_rejected() {
        let (t, _) = dithered_pair(1.0, 2.0, 0.3);
        let mut reg = SourceRegistry::new();
        let plain = homodyne_spectrum(&make_field(1.0, &reg.vacuum()).unwrap(), Quadrature::Plus);
        assert!(matches!(
            correct_dither(&t, &plain, DitherGain::Auto),
            Err(LedgerError::MissingDither)
        ));
    }
}
