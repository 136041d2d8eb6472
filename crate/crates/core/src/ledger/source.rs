use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use super::LedgerError;

/// Which quadrature of a mode: amplitude (`Plus`) or phase (`Minus`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    Plus,
    Minus,
}

impl Quadrature {
    pub const BOTH: [Quadrature; 2] = [Quadrature::Plus, Quadrature::Minus];

    pub(crate) fn index(self) -> usize {
        match self {
            Quadrature::Plus => 0,
            Quadrature::Minus => 1,
        }
    }

    pub fn other(self) -> Quadrature {
        match self {
            Quadrature::Plus => Quadrature::Minus,
            Quadrature::Minus => Quadrature::Plus,
        }
    }

    /// Local-oscillator angle that selects this quadrature.
    pub fn lo_angle(self) -> f64 {
        match self {
            Quadrature::Plus => 0.0,
            Quadrature::Minus => std::f64::consts::FRAC_PI_2,
        }
    }
}

impl fmt::Display for Quadrature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quadrature::Plus => "plus",
            Quadrature::Minus => "minus",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceId(pub(crate) u32);

impl fmt::Display for SourceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl Serialize for SourceId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegistryId(u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Vacuum,
    Squeezed,
    PhaseDither,
}

/// An independent Gaussian fluctuation source.
///
/// Variances are normalized to the quantum noise limit. A phase dither is a
/// scalar process: its spectral density `V_phi` lives in `v_plus` and
/// `v_minus` is unused.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSource {
    id: SourceId,
    registry: RegistryId,
    kind: SourceKind,
    v_plus: f64,
    v_minus: f64,
}

impl NoiseSource {
    pub fn id(&self) -> SourceId {
        self.id
    }

    pub fn registry(&self) -> RegistryId {
        self.registry
    }

    pub fn kind(&self) -> SourceKind {
        self.kind
    }

    pub fn v_plus(&self) -> f64 {
        self.v_plus
    }

    pub fn v_minus(&self) -> f64 {
        self.v_minus
    }

    /// Dither spectral density; only meaningful for `PhaseDither` sources.
    pub fn v_phi(&self) -> f64 {
        self.v_plus
    }

    pub(crate) fn component_variance(&self, quad: Quadrature) -> f64 {
        match (self.kind, quad) {
            (SourceKind::PhaseDither, Quadrature::Plus) => self.v_plus,
            (SourceKind::PhaseDither, Quadrature::Minus) => 0.0,
            (_, Quadrature::Plus) => self.v_plus,
            (_, Quadrature::Minus) => self.v_minus,
        }
    }
}

/// Allocates noise sources for one simulation.
///
/// Every vacuum port opened by a loss or a beamsplitter gets a fresh id, so
/// two fields only share a source when they really share a fluctuation.
#[derive(Debug)]
pub struct SourceRegistry {
    id: RegistryId,
    next: u32,
}

static NEXT_REGISTRY: AtomicU64 = AtomicU64::new(1);

impl Default for SourceRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl SourceRegistry {
    pub fn new() -> Self {
        Self {
            id: RegistryId(NEXT_REGISTRY.fetch_add(1, Ordering::Relaxed)),
            next: 0,
        }
    }

    pub fn id(&self) -> RegistryId {
        self.id
    }

    /// Number of sources allocated so far.
    pub fn len(&self) -> usize {
        self.next as usize
    }

    pub fn is_empty(&self) -> bool {
        self.next == 0
    }

    fn allocate(&mut self, kind: SourceKind, v_plus: f64, v_minus: f64) -> NoiseSource {
        let id = SourceId(self.next);
        self.next += 1;
        NoiseSource {
            id,
            registry: self.id,
            kind,
            v_plus,
            v_minus,
        }
    }

    pub fn vacuum(&mut self) -> NoiseSource {
        self.allocate(SourceKind::Vacuum, 1.0, 1.0)
    }

    /// Minimum-uncertainty squeezed source with `V- = 1 / V+`.
    pub fn squeezed(&mut self, v_plus: f64) -> Result<NoiseSource, LedgerError> {
        if !(v_plus.is_finite() && v_plus > 0.0) {
            return Err(LedgerError::InvalidVariance(v_plus));
        }
        Ok(self.allocate(SourceKind::Squeezed, v_plus, 1.0 / v_plus))
    }

    /// Squeezed source with explicit, possibly impure, variances.
    pub fn squeezed_mixed(
        &mut self,
        v_plus: f64,
        v_minus: f64,
    ) -> Result<NoiseSource, LedgerError> {
        for v in [v_plus, v_minus] {
            if !(v.is_finite() && v > 0.0) {
                return Err(LedgerError::InvalidVariance(v));
            }
        }
        // small slack so 1/v round trips are accepted
        if v_plus * v_minus < 1.0 - 1e-12 {
            return Err(LedgerError::Unphysical { v_plus, v_minus });
        }
        Ok(self.allocate(SourceKind::Squeezed, v_plus, v_minus))
    }

    pub fn phase_dither(&mut self, v_phi: f64) -> Result<NoiseSource, LedgerError> {
        if !(v_phi.is_finite() && v_phi >= 0.0) {
            return Err(LedgerError::InvalidVariance(v_phi));
        }
        Ok(self.allocate(SourceKind::PhaseDither, v_phi, 0.0))
    }
}
