//! The physical set-ups of the protocol, built on the mode ledger.
//!
//! Alice's two strings are the streams `plus` and `minus`. With a coherent
//! source they ride on the amplitude and phase quadrature of one beam. With
//! the EPR source `plus` sits on squeezed beam `a`, `minus` on squeezed beam
//! `b`; `b` is shifted by pi/2 and the two are mixed 50:50 into `c` and `d`.
//! Reading `plus` then means summing the amplitude quadratures of `c` and
//! `d`, reading `minus` means differencing their phase quadratures.

use std::f64::consts::FRAC_PI_2;

use super::scenario::SourceType;
use crate::ledger::{
    apply_loss, beamsplit, homodyne_spectrum, joint_spectrum, make_field, Combine, FieldState,
    LedgerError, ModulationStream, Quadrature, SourceRegistry, SpectrumDecomposition, StreamId,
};

/// Nominal mean-field amplitude. Nothing in the strategy analysis depends on it.
const CARRIER: f64 = 1.0;

pub fn stream_id(q: Quadrature) -> StreamId {
    StreamId(q.to_string())
}

/// The beams in flight: one for a coherent source, `[c, d]` for EPR.
#[derive(Debug, Clone)]
pub struct Beams {
    pub source: SourceType,
    pub modes: Vec<FieldState>,
}

impl Beams {
    fn map<F>(&self, f: F) -> Result<Beams, LedgerError>
    where
        F: FnMut(&FieldState) -> Result<FieldState, LedgerError>,
    {
        Ok(Beams {
            source: self.source,
            modes: self.modes.iter().map(f).collect::<Result<_, _>>()?,
        })
    }
}

/// Alice's transmitter with signal power `signal_power` on both strings and
/// squeezed noise floor `source_noise` (ignored for coherent light).
pub fn transmit(
    source: SourceType,
    source_noise: f64,
    signal_power: f64,
    reg: &mut SourceRegistry,
) -> Result<Beams, LedgerError> {
    let modes = match source {
        SourceType::Coherent => {
            let f = make_field(CARRIER, &reg.vacuum())?
                .add_modulation(&ModulationStream::new(
                    stream_id(Quadrature::Plus),
                    Quadrature::Plus,
                    signal_power,
                ))?
                .add_modulation(&ModulationStream::new(
                    stream_id(Quadrature::Minus),
                    Quadrature::Minus,
                    signal_power,
                ))?;
            vec![f]
        }
        SourceType::EprSqueezed => {
            let a = make_field(CARRIER, &reg.squeezed(source_noise)?)?.add_modulation(
                &ModulationStream::new(stream_id(Quadrature::Plus), Quadrature::Plus, signal_power),
            )?;
            let b = make_field(CARRIER, &reg.squeezed(source_noise)?)?.add_modulation(
                &ModulationStream::new(
                    stream_id(Quadrature::Minus),
                    Quadrature::Plus,
                    signal_power,
                ),
            )?;
            let (c, d) = beamsplit(&a, &b, 0.5, FRAC_PI_2)?;
            vec![c, d]
        }
    };
    Ok(Beams { source, modes })
}

/// The detection that carries stream `basis`.
pub fn readout(beams: &Beams, basis: Quadrature) -> Result<SpectrumDecomposition, LedgerError> {
    match beams.source {
        SourceType::Coherent => Ok(homodyne_spectrum(&beams.modes[0], basis)),
        SourceType::EprSqueezed => {
            let (c, d) = (&beams.modes[0], &beams.modes[1]);
            match basis {
                Quadrature::Plus => joint_spectrum(c, d, basis, basis, Combine::Sum),
                Quadrature::Minus => joint_spectrum(c, d, basis, basis, Combine::Difference),
            }
        }
    }
}

/// S/N of stream `basis` in its own readout.
pub fn readout_snr(beams: &Beams, basis: Quadrature) -> Result<f64, LedgerError> {
    Ok(readout(beams, basis)?.snr(&stream_id(basis)))
}

pub fn channel(beams: &Beams, loss: f64, reg: &mut SourceRegistry) -> Result<Beams, LedgerError> {
    beams.map(|m| apply_loss(m, loss, reg))
}

/// Splits every mode against its own fresh vacuum; returns
/// `(transmitted, reflected)` with power transmission `eta`.
pub fn split(
    beams: &Beams,
    eta: f64,
    reg: &mut SourceRegistry,
) -> Result<(Beams, Beams), LedgerError> {
    let mut kept = Vec::with_capacity(beams.modes.len());
    let mut taken = Vec::with_capacity(beams.modes.len());
    for m in &beams.modes {
        let vac = make_field(0.0, &reg.vacuum())?;
        let (t, r) = beamsplit(m, &vac, eta, 0.0)?;
        kept.push(t);
        taken.push(r);
    }
    Ok((
        Beams {
            source: beams.source,
            modes: kept,
        },
        Beams {
            source: beams.source,
            modes: taken,
        },
    ))
}

/// A 50:50 simultaneous measurement: the `plus` readout on one half, the
/// `minus` readout on the other. Returns both spectra.
pub fn simultaneous_readout(
    beams: &Beams,
    reg: &mut SourceRegistry,
) -> Result<[SpectrumDecomposition; 2], LedgerError> {
    let (h1, h2) = split(beams, 0.5, reg)?;
    Ok([
        readout(&h1, Quadrature::Plus)?,
        readout(&h2, Quadrature::Minus)?,
    ])
}
